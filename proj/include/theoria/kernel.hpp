#ifndef THEORIA_KERNEL_HPP
#define THEORIA_KERNEL_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "theoria/error.hpp"

namespace theoria {

// Lexical conventions: instances and functors are lower_snake identifiers,
// variables start with a capital letter. Symbols carrying the reserved sk_
// prefix may additionally mention capitals (the variable they witness).
bool is_constant_symbol(std::string_view s);
bool is_variable_name(std::string_view s);
bool is_skolem_symbol(std::string_view s);

enum class TermKind { Constant, Variable, Compound };

// Immutable symbol tree. Constants and compounds share the instance
// convention; situation terms are ordinary terms (a base situation is a
// constant, a successor is the compound do(action, parent)).
struct Term {
  TermKind kind = TermKind::Constant;
  std::string symbol;       // constant symbol, variable name, or functor
  std::vector<Term> args;   // compound arguments, arity >= 1

  static Term constant(std::string symbol);
  static Term variable(std::string name);
  static Term compound(std::string functor, std::vector<Term> args);

  bool is_constant() const { return kind == TermKind::Constant; }
  bool is_variable() const { return kind == TermKind::Variable; }
  bool is_compound() const { return kind == TermKind::Compound; }
  bool is_ground() const;
  bool contains_variable(const std::string& name) const;
  // True if any functor or constant carries the reserved Skolem prefix.
  bool mentions_skolem() const;
  void collect_variables(std::vector<std::string>& out) const;

  std::string text() const;
  bool operator==(const Term&) const = default;
  bool operator<(const Term& other) const;
};

// Predicate applied to terms. Kept separate from Term so that zero-arity
// predicates are representable and predicate symbols live in their own
// declaration table.
struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  bool is_ground() const;
  void collect_variables(std::vector<std::string>& out) const;
  std::string text() const;
  bool operator==(const Atom&) const = default;
  bool operator<(const Atom& other) const;
};

// An atom embedded in a term position (e.g. the action slot of do(a, s)).
Term atom_to_term(const Atom& atom);
std::optional<Atom> term_to_atom(const Term& term);

enum class Modality { Holds, Occurs, Equality };

// Signed, modal atomic formula. Negation applies to Holds only; Equality
// relates two situation terms.
struct Literal {
  Modality modality = Modality::Holds;
  bool negated = false;
  Atom atom;        // Holds / Occurs payload
  Term situation;   // Holds / Occurs situation term
  Term lhs, rhs;    // Equality sides

  static Literal holds(Atom atom, Term situation, bool negated = false);
  static Literal occurs(Atom atom, Term situation);
  static Literal equality(Term lhs, Term rhs);

  bool is_positive() const { return !negated; }
  bool is_ground() const;
  void collect_variables(std::vector<std::string>& out) const;
  std::string text() const;
  bool operator==(const Literal&) const = default;
  bool operator<(const Literal& other) const;
};

// Named, quantified implication: body conjunction -> single positive Holds
// head, with optional head existentials.
struct Axiom {
  std::string name;
  std::vector<std::string> universals;
  std::vector<std::string> head_existentials;
  std::vector<Literal> body;
  Literal head;

  std::string text() const;
  bool operator==(const Axiom&) const = default;
};

// A situational context: either a named base or a do(action, parent)
// successor. The id encodes the full chain textually.
struct Situation {
  std::string id;
  bool is_base = true;
  std::string base_name;   // base only
  Atom action;             // successor only
  std::string parent_id;   // successor only

  static Situation base(std::string name);
  static Situation successor(const Atom& action, const Situation& parent);

  bool operator==(const Situation&) const = default;
};

// Deterministic textual id for a successor situation. Throws on a
// non-ground action.
std::string canonical_situation_id(const Atom& action,
                                   const std::string& parent_id);

enum class PredicateKind { Fluent, Action, Rigid };

std::string to_string(PredicateKind kind);

struct Declaration {
  std::string predicate;
  std::size_t arity = 0;
  PredicateKind kind = PredicateKind::Fluent;

  bool operator==(const Declaration&) const = default;
};

struct NamedQuery {
  enum class Expect { None, Sat, Unsat };

  std::string name;
  Expect expect = Expect::None;
  std::vector<Literal> body;

  bool operator==(const NamedQuery&) const = default;
};

// Validated collection of terminology, axioms, ground facts, and named
// competency questions. clips/3 is pre-declared: asserting
// holds(clips(action, predicate, situation), sigma) blocks frame
// inheritance of that predicate across that action.
class Ontology {
 public:
  Ontology();

  // Throws on a conflicting declaration; identical re-declaration is a no-op.
  void declare(const Declaration& decl);
  const Declaration* find_declaration(const std::string& predicate) const;
  const Declaration& declaration(const std::string& predicate) const;
  const std::map<std::string, Declaration>& declarations() const {
    return declarations_;
  }

  void add_axiom(Axiom axiom);          // throws on duplicate name
  void add_ground_fact(Literal fact);   // ground Holds/Occurs literal
  void add_query(NamedQuery query);     // throws on duplicate name

  const std::vector<Axiom>& axioms() const { return axioms_; }
  const std::vector<Literal>& ground_facts() const { return ground_facts_; }
  const std::vector<NamedQuery>& queries() const { return queries_; }

 private:
  std::map<std::string, Declaration> declarations_;
  std::vector<Axiom> axioms_;
  std::set<std::string> axiom_names_;
  std::vector<Literal> ground_facts_;
  std::vector<NamedQuery> queries_;
  std::set<std::string> query_names_;
};

// Idempotent variable -> term map with occurs-check. Binding maintains the
// solved form: no bound variable appears in any binding value.
class Substitution {
 public:
  Substitution() = default;

  // Closes a raw map to solved form; throws on an occurs-check violation.
  static Substitution from_bindings(std::map<std::string, Term> raw);

  // False iff binding would violate the occurs-check.
  bool bind(const std::string& var, const Term& value);

  const Term* lookup(const std::string& var) const;
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<std::string, Term>& bindings() const { return bindings_; }

  Term apply(const Term& t) const;
  Atom apply(const Atom& a) const;
  Literal apply(const Literal& l) const;

  Substitution restricted_to(const std::vector<std::string>& vars) const;
  std::string text() const;
  bool operator==(const Substitution&) const = default;

 private:
  std::map<std::string, Term> bindings_;
};

// Most-general unifier with occurs-check. Failure is a non-match, not a
// fault. The `seed` overloads extend an existing substitution.
std::optional<Substitution> unify(const Term& a, const Term& b);
std::optional<Substitution> unify(const Atom& a, const Atom& b);
bool unify_into(const Term& a, const Term& b, Substitution& seed);
bool unify_into(const Atom& a, const Atom& b, Substitution& seed);

}  // namespace theoria

#endif  // THEORIA_KERNEL_HPP
