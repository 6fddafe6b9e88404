#ifndef THEORIA_ENGINE_HPP
#define THEORIA_ENGINE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "theoria/kernel.hpp"
#include "theoria/store.hpp"

namespace theoria {

// Ready-to-run rule: head existentials replaced by Skolem terms, body in
// join order (positive literals as written, then equalities, then
// negations), stratum assigned.
struct CompiledRule {
  std::string name;
  std::vector<Literal> body;
  Literal head;
  int stratum = 0;

  bool operator==(const CompiledRule&) const = default;
};

// Head existentials V become sk_<axiomName>_<V>(U1, ..., Uk) over the
// axiom's universals in declaration order. Deterministic; an axiom without
// existentials comes back unchanged.
Axiom skolemize(const Axiom& axiom);

// Skolemize + join-order + stratify every axiom. Throws on negative
// cycles through negation ("negative cycle: p, q").
std::vector<CompiledRule> compile(const Ontology& ontology);

// Strata as computed by compile, exposed for inspection: predicate ->
// stratum. Predicates never derived sit in stratum 0.
std::map<std::string, int> stratum_map(const Ontology& ontology);

// Saturates sit (ancestors first) and caches results in the store.
// Returns the derived set for sit.
std::set<Literal> saturate(FactStore& store, const std::string& sit_id);

// Saturates every situation; keyed by situation id.
std::map<std::string, std::set<Literal>> saturate_all(FactStore& store);

// Pure variant: computes the same derived set without touching the
// store's caches. Safe to call concurrently on one store.
std::set<Literal> saturate_snapshot(const FactStore& store,
                                    const std::string& sit_id);

// Brute-force oracle: grounds every rule over the visible constant
// universe each round until fixpoint. Shares only skolemize/compile with
// the real evaluator.
std::set<Literal> naive_saturate(const FactStore& store,
                                 const std::string& sit_id);

struct Answer {
  Substitution bindings;   // restricted to the query's variables
  std::string situation;   // first body literal's situation, if ground

  bool operator==(const Answer&) const = default;
};

// Saturates everything, then evaluates the body over the whole situation
// forest. Answers are distinct and ordered by canonical text.
std::vector<Answer> query(FactStore& store, const std::vector<Literal>& body);

struct ProofNode {
  Literal conclusion;               // ground, situated at `situation`
  std::string situation;
  std::string rule;                 // axiom name, "base-fact", "frame",
                                    // "equality", "negation-as-failure"
  Substitution bindings;
  std::vector<ProofNode> premises;

  bool operator==(const ProofNode&) const = default;
};

// Proof for a ground holds/occurs literal at sit, or nullopt when the
// fact is not derivable there.
std::optional<ProofNode> prove(FactStore& store, const Literal& goal,
                               const std::string& sit_id);

// Bottom-up check: every leaf is justified by the store and every inner
// node's rule instance actually produces its conclusion.
bool replay_proof(const FactStore& store, const ProofNode& proof);

nlohmann::json proof_to_json(const ProofNode& proof);
ProofNode proof_from_json(const nlohmann::json& j);
nlohmann::json answers_to_json(const std::vector<Answer>& answers);
std::vector<Answer> answers_from_json(const nlohmann::json& j);

struct CompetencyEntry {
  std::string name;
  NamedQuery::Expect expect = NamedQuery::Expect::None;
  bool satisfied = false;
  std::size_t answer_count = 0;
  bool passed = false;
  std::string error;
};

struct CompetencyReport {
  std::vector<CompetencyEntry> entries;
  bool all_passed() const;
};

// Runs every named query in the ontology; a query with no expectation
// passes by merely evaluating without error.
CompetencyReport check_competency(FactStore& store);

}  // namespace theoria

#endif  // THEORIA_ENGINE_HPP
