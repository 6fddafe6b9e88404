#ifndef THEORIA_TESTS_SUPPORT_HPP
#define THEORIA_TESTS_SUPPORT_HPP

// Shared generators and brute-force oracles. Oracles here deliberately do
// not reuse library code paths beyond the types themselves.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "theoria/kernel.hpp"

namespace theoria::testing {

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(rng);
}

template <typename T>
const T& pick_one(Rng& rng, const std::vector<T>& pool) {
  return pool[static_cast<size_t>(pick(rng, 0, static_cast<int>(pool.size()) - 1))];
}

// Underscore-free symbol pools keep canonical situation ids collision-free
// by construction.
inline const std::vector<std::string>& constant_pool() {
  static const std::vector<std::string> pool = {"a", "b", "c", "d", "ifrs",
                                                "acme"};
  return pool;
}

inline const std::vector<std::string>& variable_pool() {
  static const std::vector<std::string> pool = {"X", "Y", "Z", "W"};
  return pool;
}

inline const std::vector<std::string>& functor_pool() {
  static const std::vector<std::string> pool = {"f", "g", "h"};
  return pool;
}

// Random term, depth-bounded; may contain variables.
inline Term random_term(Rng& rng, int depth = 2) {
  int roll = pick(rng, 0, 9);
  if (depth == 0 || roll < 4) {
    return Term::constant(pick_one(rng, constant_pool()));
  }
  if (roll < 7) {
    return Term::variable(pick_one(rng, variable_pool()));
  }
  int arity = pick(rng, 1, 2);
  std::vector<Term> args;
  for (int i = 0; i < arity; ++i) args.push_back(random_term(rng, depth - 1));
  return Term::compound(pick_one(rng, functor_pool()), std::move(args));
}

inline Term random_ground_term(Rng& rng, int depth = 2) {
  int roll = pick(rng, 0, 9);
  if (depth == 0 || roll < 6) {
    return Term::constant(pick_one(rng, constant_pool()));
  }
  int arity = pick(rng, 1, 2);
  std::vector<Term> args;
  for (int i = 0; i < arity; ++i) {
    args.push_back(random_ground_term(rng, depth - 1));
  }
  return Term::compound(pick_one(rng, functor_pool()), std::move(args));
}

// ---- brute-force substitution enumeration --------------------------------

// All substitutions over the given variables whose values come from the
// candidate list. Used for "no unifier exists" and generality checks.
inline std::vector<std::map<std::string, Term>> all_assignments(
    const std::vector<std::string>& vars, const std::vector<Term>& values) {
  std::vector<std::map<std::string, Term>> out = {{}};
  for (const auto& v : vars) {
    std::vector<std::map<std::string, Term>> next;
    for (const auto& partial : out) {
      for (const auto& val : values) {
        auto extended = partial;
        extended[v] = val;
        next.push_back(std::move(extended));
      }
    }
    out = std::move(next);
  }
  return out;
}

// Raw simultaneous replacement (no solved-form closure); the oracle works
// with plain maps so it cannot inherit a bug from Substitution.
inline Term raw_replace(const std::map<std::string, Term>& m, const Term& t) {
  if (t.kind == TermKind::Variable) {
    auto it = m.find(t.symbol);
    return it == m.end() ? t : it->second;
  }
  if (t.kind == TermKind::Constant) return t;
  std::vector<Term> args;
  for (const auto& a : t.args) args.push_back(raw_replace(m, a));
  return Term::compound(t.symbol, std::move(args));
}

// Fixpoint of repeated raw replacement; gives up (returns nullopt) if the
// map is cyclic.
inline std::optional<Term> replace_to_fixpoint(
    const std::map<std::string, Term>& m, Term t) {
  for (int i = 0; i < 64; ++i) {
    Term next = raw_replace(m, t);
    if (next == t) return t;
    t = std::move(next);
  }
  return std::nullopt;
}

inline std::vector<std::string> variables_of(const Term& t) {
  std::vector<std::string> vs;
  t.collect_variables(vs);
  std::set<std::string> seen;
  std::vector<std::string> out;
  for (const auto& v : vs) {
    if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

// True iff some assignment of candidate values to the variables of a and b
// makes them syntactically equal.
inline bool ground_unifiable(const Term& a, const Term& b,
                             const std::vector<Term>& values) {
  std::set<std::string> var_set;
  for (const auto& v : variables_of(a)) var_set.insert(v);
  for (const auto& v : variables_of(b)) var_set.insert(v);
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  for (const auto& m : all_assignments(vars, values)) {
    auto ra = replace_to_fixpoint(m, a);
    auto rb = replace_to_fixpoint(m, b);
    if (ra && rb && *ra == *rb) return true;
  }
  return false;
}

// ---- random situation forests --------------------------------------------

struct ForestNode {
  std::string id;
  bool is_base = false;
  std::string base_name;
  Atom action;
  std::string parent_id;
};

// Random forest over underscore-free action atoms; ids built with
// canonical_situation_id. Distinct structure implies distinct ids here.
inline std::vector<ForestNode> random_forest(Rng& rng, int max_nodes = 8) {
  std::vector<ForestNode> nodes;
  int bases = pick(rng, 1, 2);
  for (int i = 0; i < bases; ++i) {
    ForestNode n;
    n.is_base = true;
    n.base_name = "base" + std::to_string(i);
    n.id = n.base_name;
    nodes.push_back(n);
  }
  int extra = pick(rng, 0, max_nodes - bases);
  static const std::vector<std::string> actions = {"step", "move", "audit"};
  for (int i = 0; i < extra; ++i) {
    const ForestNode& parent = pick_one(rng, nodes);
    Atom action;
    action.predicate = pick_one(rng, actions);
    int arity = pick(rng, 0, 2);
    for (int j = 0; j < arity; ++j) {
      action.args.push_back(Term::constant(pick_one(rng, constant_pool())));
    }
    ForestNode n;
    n.is_base = false;
    n.action = action;
    n.parent_id = parent.id;
    n.id = canonical_situation_id(action, parent.id);
    if (std::any_of(nodes.begin(), nodes.end(),
                    [&](const ForestNode& m) { return m.id == n.id; })) {
      continue;  // same action applied to the same parent twice
    }
    nodes.push_back(n);
  }
  return nodes;
}

}  // namespace theoria::testing

#endif  // THEORIA_TESTS_SUPPORT_HPP
