#ifndef THEORIA_STORE_HPP
#define THEORIA_STORE_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "theoria/kernel.hpp"

namespace theoria {

// How one derived fact came to be: the rule that produced it plus the
// situated ground premises it consumed. Negated premises stand for
// negation-as-failure leaves; equality premises for situation-term
// decomposition.
struct Derivation {
  std::string rule;
  // the firing substitution, restricted to the rule's variables
  Substitution theta;
  std::vector<std::pair<Literal, std::string>> premises;

  bool operator==(const Derivation&) const = default;
};

// Populated model over a situation forest. Base facts are user-asserted;
// derived facts and their derivations are written by the engine and
// invalidated here whenever an assertion could change them.
class FactStore {
 public:
  explicit FactStore(Ontology ontology);

  const Ontology& ontology() const { return ontology_; }
  Ontology& ontology() { return ontology_; }

  // -- situations ---------------------------------------------------------
  bool has_situation(const std::string& id) const;
  const Situation& situation(const std::string& id) const;
  // sorted for deterministic iteration
  std::vector<std::string> situation_ids() const;
  std::string add_base_situation(const std::string& name);
  // Creates (or finds) the do(action, parent) situation and records
  // occurs(action, parent) as a base fact of the parent.
  std::string successor(const Atom& action, const std::string& parent_id);
  // Ground situation term -> id. With create set, missing constants become
  // base situations and missing do(...) chains are built via successor.
  std::string resolve_sitterm(const Term& sitterm, bool create);
  bool is_descendant(const std::string& id, const std::string& ancestor) const;

  // -- base facts ---------------------------------------------------------
  // The literal's own situation field is ignored; sit_id is authoritative.
  void assert_fact(const Literal& lit, const std::string& sit_id);
  // Resolves the literal's situation term (creating situations as needed)
  // and asserts; the path every `fact` item takes.
  void materialize(const Literal& ground_fact);

  const std::set<Literal>& base_facts(const std::string& sit_id) const;
  const std::set<Atom>& rigid_facts() const { return rigid_; }

  // base, derived, and rigid facts visible in one situation; rigid atoms
  // are reported as holds literals situated at sit_id
  std::set<Literal> facts_in(const std::string& sit_id) const;

  // -- engine-owned derived layer -----------------------------------------
  bool is_saturated(const std::string& sit_id) const;
  void mark_saturated(const std::string& sit_id);
  void add_derived(const std::string& sit_id, const Literal& lit,
                   Derivation how);
  const std::set<Literal>& derived_facts(const std::string& sit_id) const;
  const Derivation* find_derivation(const std::string& sit_id,
                                    const Literal& lit) const;

  // monotonically increasing; bumped by every mutation of base data
  std::size_t version() const { return version_; }

 private:
  void invalidate(const std::string& sit_id);
  void invalidate_all();
  void check_fact_shape(const Literal& lit) const;

  Ontology ontology_;
  std::map<std::string, Situation> situations_;
  std::map<std::string, std::set<Literal>> base_;
  std::set<Atom> rigid_;
  std::map<std::string, std::set<Literal>> derived_;
  std::map<std::string, std::map<Literal, Derivation>> derivations_;
  std::set<std::string> saturated_;
  std::size_t version_ = 0;
};

// -- tabular ingestion -----------------------------------------------------

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC-4180-ish: quoted fields, doubled-quote escapes, CRLF or LF. Every row
// must match the header width.
Csv parse_csv(const std::string& text, const std::string& path = "<csv>");

// trim, lowercase, non-[a-z0-9] runs to one '_', strip edge '_'. Throws
// when the result is not a valid constant symbol.
std::string normalize_cell(const std::string& cell);

struct IngestionMapping {
  std::string table;
  std::string predicate;
  std::vector<std::string> columns;
  std::optional<std::string> situation_column;
  std::string default_situation;

  bool operator==(const IngestionMapping&) const = default;
};

// One mapping per line: `table:predicate:col1,col2[:sitcol]`; `%` comments.
std::vector<IngestionMapping> parse_mapping_text(
    const std::string& text, const std::string& path = "<map>");

// One holds fact per row; duplicates collapse. Returns how many facts were
// newly asserted. Situations must already exist.
std::size_t ingest_table(FactStore& store, const Csv& csv,
                         const IngestionMapping& mapping);

}  // namespace theoria

#endif  // THEORIA_STORE_HPP
