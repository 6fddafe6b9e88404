#include "theoria/kernel.hpp"

#include <algorithm>
#include <sstream>

namespace theoria {

namespace {

constexpr std::string_view kSkolemPrefix = "sk_";

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

void join_terms(std::ostream& out, const std::vector<Term>& ts) {
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out << ", ";
    out << ts[i].text();
  }
}

void flatten_term(std::ostream& out, const Term& t) {
  if (t.is_constant()) {
    out << t.symbol;
    return;
  }
  out << t.symbol;
  for (const Term& a : t.args) {
    out << '_';
    flatten_term(out, a);
  }
}

}  // namespace

bool is_constant_symbol(std::string_view s) {
  if (s.empty() || !is_lower(s[0])) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    return is_lower(c) || is_digit(c) || c == '_';
  });
}

bool is_skolem_symbol(std::string_view s) {
  if (!s.starts_with(kSkolemPrefix)) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return is_lower(c) || is_upper(c) || is_digit(c) || c == '_';
  });
}

bool is_variable_name(std::string_view s) {
  if (s.empty() || !is_upper(s[0])) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    return is_lower(c) || is_upper(c) || is_digit(c) || c == '_';
  });
}

Term Term::constant(std::string symbol) {
  if (!is_constant_symbol(symbol) && !is_skolem_symbol(symbol))
    throw Error(Error::Kind::Validation,
                "invalid constant symbol '" + symbol + "'");
  Term t;
  t.kind = TermKind::Constant;
  t.symbol = std::move(symbol);
  return t;
}

Term Term::variable(std::string name) {
  if (!is_variable_name(name))
    throw Error(Error::Kind::Validation,
                "invalid variable name '" + name + "'");
  Term t;
  t.kind = TermKind::Variable;
  t.symbol = std::move(name);
  return t;
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  if (!is_constant_symbol(functor) && !is_skolem_symbol(functor))
    throw Error(Error::Kind::Validation,
                "invalid functor symbol '" + functor + "'");
  if (args.empty())
    throw Error(Error::Kind::Validation,
                "compound term '" + functor + "' requires arity >= 1");
  Term t;
  t.kind = TermKind::Compound;
  t.symbol = std::move(functor);
  t.args = std::move(args);
  return t;
}

bool Term::is_ground() const {
  if (is_variable()) return false;
  return std::all_of(args.begin(), args.end(),
                     [](const Term& a) { return a.is_ground(); });
}

bool Term::contains_variable(const std::string& name) const {
  if (is_variable()) return symbol == name;
  return std::any_of(args.begin(), args.end(), [&](const Term& a) {
    return a.contains_variable(name);
  });
}

bool Term::mentions_skolem() const {
  if (!is_variable() && symbol.starts_with(kSkolemPrefix)) return true;
  return std::any_of(args.begin(), args.end(),
                     [](const Term& a) { return a.mentions_skolem(); });
}

void Term::collect_variables(std::vector<std::string>& out) const {
  if (is_variable()) {
    if (std::find(out.begin(), out.end(), symbol) == out.end())
      out.push_back(symbol);
    return;
  }
  for (const Term& a : args) a.collect_variables(out);
}

std::string Term::text() const {
  if (!is_compound()) return symbol;
  std::ostringstream out;
  out << symbol << '(';
  join_terms(out, args);
  out << ')';
  return out.str();
}

// Hand-rolled orderings: a defaulted three-way comparison is deleted for
// self-referential std::vector members, and ordered containers need these.
bool Term::operator<(const Term& other) const {
  if (kind != other.kind) return kind < other.kind;
  if (symbol != other.symbol) return symbol < other.symbol;
  return std::lexicographical_compare(args.begin(), args.end(),
                                      other.args.begin(), other.args.end());
}

bool Atom::is_ground() const {
  return std::all_of(args.begin(), args.end(),
                     [](const Term& a) { return a.is_ground(); });
}

void Atom::collect_variables(std::vector<std::string>& out) const {
  for (const Term& a : args) a.collect_variables(out);
}

std::string Atom::text() const {
  if (args.empty()) return predicate;
  std::ostringstream out;
  out << predicate << '(';
  join_terms(out, args);
  out << ')';
  return out.str();
}

bool Atom::operator<(const Atom& other) const {
  if (predicate != other.predicate) return predicate < other.predicate;
  return std::lexicographical_compare(args.begin(), args.end(),
                                      other.args.begin(), other.args.end());
}

Term atom_to_term(const Atom& atom) {
  if (atom.args.empty()) return Term::constant(atom.predicate);
  return Term::compound(atom.predicate, atom.args);
}

std::optional<Atom> term_to_atom(const Term& term) {
  if (term.is_variable()) return std::nullopt;
  return Atom{term.symbol, term.args};
}

Literal Literal::holds(Atom atom, Term situation, bool negated) {
  Literal l;
  l.modality = Modality::Holds;
  l.negated = negated;
  l.atom = std::move(atom);
  l.situation = std::move(situation);
  return l;
}

Literal Literal::occurs(Atom atom, Term situation) {
  Literal l;
  l.modality = Modality::Occurs;
  l.atom = std::move(atom);
  l.situation = std::move(situation);
  return l;
}

Literal Literal::equality(Term lhs, Term rhs) {
  Literal l;
  l.modality = Modality::Equality;
  l.lhs = std::move(lhs);
  l.rhs = std::move(rhs);
  return l;
}

bool Literal::is_ground() const {
  if (modality == Modality::Equality) return lhs.is_ground() && rhs.is_ground();
  return atom.is_ground() && situation.is_ground();
}

void Literal::collect_variables(std::vector<std::string>& out) const {
  if (modality == Modality::Equality) {
    lhs.collect_variables(out);
    rhs.collect_variables(out);
    return;
  }
  atom.collect_variables(out);
  situation.collect_variables(out);
}

std::string Literal::text() const {
  std::ostringstream out;
  switch (modality) {
    case Modality::Holds:
      if (negated) out << "not ";
      out << "holds(" << atom.text() << ", " << situation.text() << ')';
      break;
    case Modality::Occurs:
      out << "occurs(" << atom.text() << ", " << situation.text() << ')';
      break;
    case Modality::Equality:
      out << lhs.text() << " = " << rhs.text();
      break;
  }
  return out.str();
}

bool Literal::operator<(const Literal& other) const {
  if (modality != other.modality) return modality < other.modality;
  if (negated != other.negated) return negated < other.negated;
  if (!(atom == other.atom)) return atom < other.atom;
  if (!(situation == other.situation)) return situation < other.situation;
  if (!(lhs == other.lhs)) return lhs < other.lhs;
  return rhs < other.rhs;
}

std::string Axiom::text() const {
  std::ostringstream out;
  out << "axiom " << name << ": forall ";
  for (std::size_t i = 0; i < universals.size(); ++i) {
    if (i) out << ", ";
    out << universals[i];
  }
  out << ": ";
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out << " & ";
    out << body[i].text();
  }
  out << " -> ";
  if (!head_existentials.empty()) {
    out << "exists ";
    for (std::size_t i = 0; i < head_existentials.size(); ++i) {
      if (i) out << ", ";
      out << head_existentials[i];
    }
    out << ": ";
  }
  out << head.text() << '.';
  return out.str();
}

Situation Situation::base(std::string name) {
  if (!is_constant_symbol(name))
    throw Error(Error::Kind::Store,
                "invalid base situation name '" + name + "'");
  Situation s;
  s.id = name;
  s.is_base = true;
  s.base_name = std::move(name);
  return s;
}

Situation Situation::successor(const Atom& action, const Situation& parent) {
  Situation s;
  s.id = canonical_situation_id(action, parent.id);
  s.is_base = false;
  s.action = action;
  s.parent_id = parent.id;
  return s;
}

std::string canonical_situation_id(const Atom& action,
                                   const std::string& parent_id) {
  if (!action.is_ground())
    throw Error(Error::Kind::Store,
                "successor situations require a ground action, got " +
                    action.text());
  std::ostringstream out;
  out << "do__";
  flatten_term(out, atom_to_term(action));
  out << "__" << parent_id;
  return out.str();
}

std::string to_string(PredicateKind kind) {
  switch (kind) {
    case PredicateKind::Fluent: return "fluent";
    case PredicateKind::Action: return "action";
    case PredicateKind::Rigid: return "rigid";
  }
  return "fluent";
}

Ontology::Ontology() {
  // Frame exception predicate: clips(action, predicate, situation).
  declarations_["clips"] = Declaration{"clips", 3, PredicateKind::Fluent};
}

void Ontology::declare(const Declaration& decl) {
  static const std::set<std::string> reserved = {"do", "holds", "occurs",
                                                 "not"};
  if (reserved.contains(decl.predicate))
    throw Error(Error::Kind::Validation,
                "'" + decl.predicate + "' is reserved and cannot be declared");
  if (decl.predicate.starts_with("sk_"))
    throw Error(Error::Kind::Validation,
                "the 'sk_' prefix is reserved for Skolem terms: '" +
                    decl.predicate + "'");
  auto it = declarations_.find(decl.predicate);
  if (it != declarations_.end()) {
    if (it->second.arity != decl.arity)
      throw Error(Error::Kind::Validation,
                  "predicate '" + decl.predicate + "' already declared with arity " +
                      std::to_string(it->second.arity));
    if (it->second.kind != decl.kind)
      throw Error(Error::Kind::Validation,
                  "predicate '" + decl.predicate + "' already declared with kind " +
                      to_string(it->second.kind));
    return;
  }
  declarations_[decl.predicate] = decl;
}

const Declaration* Ontology::find_declaration(
    const std::string& predicate) const {
  auto it = declarations_.find(predicate);
  return it == declarations_.end() ? nullptr : &it->second;
}

const Declaration& Ontology::declaration(const std::string& predicate) const {
  const Declaration* d = find_declaration(predicate);
  if (!d)
    throw Error(Error::Kind::Validation,
                "undeclared predicate '" + predicate + "'");
  return *d;
}

void Ontology::add_axiom(Axiom axiom) {
  if (!axiom_names_.insert(axiom.name).second)
    throw Error(Error::Kind::Validation,
                "duplicate axiom name '" + axiom.name + "'");
  axioms_.push_back(std::move(axiom));
}

void Ontology::add_ground_fact(Literal fact) {
  if (!fact.is_ground())
    throw Error(Error::Kind::Validation,
                "fact must be ground: " + fact.text());
  if (fact.modality == Modality::Equality || fact.negated)
    throw Error(Error::Kind::Validation,
                "facts must be positive holds/occurs literals");
  ground_facts_.push_back(std::move(fact));
}

void Ontology::add_query(NamedQuery query) {
  if (!query_names_.insert(query.name).second)
    throw Error(Error::Kind::Validation,
                "duplicate query name '" + query.name + "'");
  queries_.push_back(std::move(query));
}

Substitution Substitution::from_bindings(std::map<std::string, Term> raw) {
  Substitution s;
  for (const auto& [var, value] : raw) {
    if (!is_variable_name(var))
      throw Error(Error::Kind::Validation,
                  "invalid variable name '" + var + "' in substitution");
    if (!s.bind(var, value))
      throw Error(Error::Kind::Validation,
                  "occurs-check violation binding " + var + " to " +
                      value.text());
  }
  return s;
}

bool Substitution::bind(const std::string& var, const Term& value) {
  Term resolved = apply(value);
  if (resolved.is_variable() && resolved.symbol == var) return true;
  if (resolved.contains_variable(var)) return false;
  // Keep solved form: eliminate var from every stored value.
  Substitution single;
  single.bindings_[var] = resolved;
  for (auto& [_, v] : bindings_) v = single.apply(v);
  bindings_[var] = std::move(resolved);
  return true;
}

const Term* Substitution::lookup(const std::string& var) const {
  auto it = bindings_.find(var);
  return it == bindings_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
  switch (t.kind) {
    case TermKind::Constant:
      return t;
    case TermKind::Variable: {
      const Term* bound = lookup(t.symbol);
      return bound ? *bound : t;
    }
    case TermKind::Compound: {
      Term out = t;
      for (Term& a : out.args) a = apply(a);
      return out;
    }
  }
  return t;
}

Atom Substitution::apply(const Atom& a) const {
  Atom out = a;
  for (Term& t : out.args) t = apply(t);
  return out;
}

Literal Substitution::apply(const Literal& l) const {
  Literal out = l;
  if (l.modality == Modality::Equality) {
    out.lhs = apply(l.lhs);
    out.rhs = apply(l.rhs);
  } else {
    out.atom = apply(l.atom);
    out.situation = apply(l.situation);
  }
  return out;
}

Substitution Substitution::restricted_to(
    const std::vector<std::string>& vars) const {
  Substitution out;
  for (const std::string& v : vars) {
    if (const Term* t = lookup(v)) out.bindings_[v] = *t;
  }
  return out;
}

std::string Substitution::text() const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const auto& [var, value] : bindings_) {
    if (!first) out << ", ";
    first = false;
    out << var << " -> " << value.text();
  }
  out << '}';
  return out.str();
}

bool unify_into(const Term& a, const Term& b, Substitution& seed) {
  Term ra = seed.apply(a);
  Term rb = seed.apply(b);
  if (ra == rb) return true;
  if (ra.is_variable()) return seed.bind(ra.symbol, rb);
  if (rb.is_variable()) return seed.bind(rb.symbol, ra);
  if (ra.kind != rb.kind) return false;
  if (ra.symbol != rb.symbol || ra.args.size() != rb.args.size()) return false;
  for (std::size_t i = 0; i < ra.args.size(); ++i)
    if (!unify_into(ra.args[i], rb.args[i], seed)) return false;
  return true;
}

bool unify_into(const Atom& a, const Atom& b, Substitution& seed) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!unify_into(a.args[i], b.args[i], seed)) return false;
  return true;
}

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution s;
  if (!unify_into(a, b, s)) return std::nullopt;
  return s;
}

std::optional<Substitution> unify(const Atom& a, const Atom& b) {
  Substitution s;
  if (!unify_into(a, b, s)) return std::nullopt;
  return s;
}

}  // namespace theoria
