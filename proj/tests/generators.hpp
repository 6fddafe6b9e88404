#ifndef THEORIA_TESTS_GENERATORS_HPP
#define THEORIA_TESTS_GENERATORS_HPP

// Random stratified programs over populated situation forests, shared by
// the differential tests and the acceptance runner.
//
// Vocabulary: six fluents whose index is their negation level, one rigid,
// one action. Rules only negate predicates of strictly lower index than
// their head, so every generated program is stratified by construction.
// w is output-only (never in a body), which keeps Skolem terms from ever
// feeding back into a generator.

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "support.hpp"
#include "theoria/kernel.hpp"
#include "theoria/store.hpp"

namespace theoria::testing {

inline const std::vector<std::pair<std::string, int>> kGenFluents = {
    {"p", 1}, {"q", 1}, {"r", 2}, {"u", 1}, {"v", 2}, {"w", 2}};

inline Ontology gen_ontology() {
  Ontology o;
  for (const auto& [name, arity] : kGenFluents) {
    o.declare(Declaration{name, static_cast<std::size_t>(arity),
                          PredicateKind::Fluent});
  }
  o.declare(Declaration{"g", 1, PredicateKind::Rigid});
  o.declare(Declaration{"act", 1, PredicateKind::Action});
  return o;
}

struct World {
  FactStore store;
  std::vector<std::string> sits;
};

inline bool chance(Rng& rng, int percent) {
  return static_cast<int>(rng() % 100) < percent;
}

inline Term gen_arg(Rng& rng, const std::vector<std::string>& vars,
                    const std::vector<std::string>& consts) {
  if (!vars.empty() && chance(rng, 55)) {
    return Term::variable(pick_one(rng, vars));
  }
  return Term::constant(pick_one(rng, consts));
}

inline Axiom gen_rule(Rng& rng, int index, bool allow_negation,
                      bool allow_exists, const std::vector<std::string>& consts,
                      const std::vector<std::string>& sit_ids,
                      bool allow_equality = true) {
  Axiom ax;
  ax.name = "r" + std::to_string(index);

  bool exists = allow_exists && chance(rng, 20);
  int head_idx = exists ? 5 : 1 + static_cast<int>(rng() % 5);

  std::vector<std::string> term_vars = {"X"};
  if (chance(rng, 30)) term_vars.push_back("Y");

  bool s_bound = false;
  auto gen_sit = [&]() -> Term {
    if (chance(rng, 75)) {
      s_bound = true;
      return Term::variable("S");
    }
    return Term::constant(pick_one(rng, sit_ids));
  };

  // positive fluent premises stay at or below the head's index and negated
  // ones strictly below it, so the index order itself stratifies the program
  auto gen_positive = [&]() -> Literal {
    if (chance(rng, 12)) {
      return Literal::holds(Atom{"g", {gen_arg(rng, term_vars, consts)}},
                            gen_sit());
    }
    if (chance(rng, 15)) {
      return Literal::occurs(Atom{"act", {gen_arg(rng, term_vars, consts)}},
                             gen_sit());
    }
    int idx = static_cast<int>(rng() % (std::min(head_idx, 4) + 1));
    const auto& [name, arity] = kGenFluents[static_cast<std::size_t>(idx)];
    Atom a{name, {}};
    for (int k = 0; k < arity; ++k) {
      a.args.push_back(gen_arg(rng, term_vars, consts));
    }
    return Literal::holds(a, gen_sit());
  };

  ax.body.push_back(gen_positive());
  if (chance(rng, 55)) ax.body.push_back(gen_positive());

  // negation only over vars the positive part already mentions
  if (allow_negation && head_idx > 0 && chance(rng, 45)) {
    std::vector<std::string> bound;
    for (const auto& l : ax.body) l.collect_variables(bound);
    bound.erase(std::remove(bound.begin(), bound.end(), "S"), bound.end());
    int idx = static_cast<int>(rng() % head_idx);
    const auto& [name, arity] = kGenFluents[static_cast<std::size_t>(idx)];
    Atom a{name, {}};
    for (int k = 0; k < arity; ++k) {
      a.args.push_back(gen_arg(rng, bound, consts));
    }
    Term sit = s_bound && chance(rng, 75)
                   ? Term::variable("S")
                   : Term::constant(pick_one(rng, sit_ids));
    ax.body.push_back(Literal::holds(a, sit, true));
  }

  // sometimes a transition filter binding a second situation variable
  bool via_equality = allow_equality && s_bound && chance(rng, 20);
  if (via_equality) {
    Term action =
        Term::compound("act", {Term::constant(pick_one(rng, consts))});
    ax.body.push_back(Literal::equality(
        Term::variable("S2"),
        Term::compound("do", {action, Term::variable("S")})));
  }

  std::vector<std::string> positive_vars;
  for (const auto& l : ax.body) {
    if (!l.negated && l.modality != Modality::Equality) {
      l.collect_variables(positive_vars);
    }
  }
  positive_vars.erase(
      std::remove(positive_vars.begin(), positive_vars.end(), "S"),
      positive_vars.end());

  const auto& [head_name, head_arity] =
      kGenFluents[static_cast<std::size_t>(head_idx)];
  Atom head{head_name, {}};
  int user_args = exists ? head_arity - 1 : head_arity;
  for (int k = 0; k < user_args; ++k) {
    head.args.push_back(gen_arg(rng, positive_vars, consts));
  }
  if (exists) head.args.push_back(Term::variable("B"));

  Term head_sit = Term::constant(pick_one(rng, sit_ids));
  if (via_equality && chance(rng, 70)) {
    head_sit = Term::variable("S2");
  } else if (s_bound) {
    if (chance(rng, 70)) {
      head_sit = Term::variable("S");
    } else if (chance(rng, 40)) {
      head_sit = Term::compound(
          "do",
          {Term::compound("act", {Term::constant(pick_one(rng, consts))}),
           Term::variable("S")});
    }
  }
  ax.head = Literal::holds(head, head_sit);

  std::vector<std::string> raw;
  for (const auto& l : ax.body) l.collect_variables(raw);
  ax.head.collect_variables(raw);
  std::set<std::string> seen;
  for (const auto& v : raw) {
    if (v != "B" && seen.insert(v).second) ax.universals.push_back(v);
  }
  if (exists) ax.head_existentials = {"B"};
  return ax;
}

inline World random_world(Rng& rng, bool allow_negation, bool allow_exists,
                          bool allow_equality = true) {
  std::vector<std::string> consts = {"a", "b", "c"};
  if (chance(rng, 50)) consts.push_back("d");

  Ontology onto = gen_ontology();

  World w{FactStore(std::move(onto)), {}};
  FactStore& store = w.store;
  w.sits.push_back(store.add_base_situation("s0"));
  if (chance(rng, 50)) w.sits.push_back(store.add_base_situation("s1"));
  int successors = static_cast<int>(rng() % 3);
  for (int i = 0; i < successors; ++i) {
    const std::string parent = pick_one(rng, w.sits);
    std::string id = store.successor(
        Atom{"act", {Term::constant(pick_one(rng, consts))}}, parent);
    if (std::find(w.sits.begin(), w.sits.end(), id) == w.sits.end()) {
      w.sits.push_back(id);
    }
  }

  int rules = 2 + static_cast<int>(rng() % 7);
  std::vector<Axiom> axioms;
  for (int i = 0; i < rules; ++i) {
    axioms.push_back(gen_rule(rng, i, allow_negation, allow_exists, consts,
                              w.sits, allow_equality));
  }
  for (auto& ax : axioms) store.ontology().add_axiom(std::move(ax));

  int facts = 4 + static_cast<int>(rng() % 5);
  for (int i = 0; i < facts; ++i) {
    const std::string sit = pick_one(rng, w.sits);
    if (chance(rng, 12)) {
      store.assert_fact(
          Literal::holds(Atom{"g", {Term::constant(pick_one(rng, consts))}},
                         Term::constant(sit)),
          sit);
      continue;
    }
    int idx = static_cast<int>(rng() % 5);
    const auto& [name, arity] = kGenFluents[static_cast<std::size_t>(idx)];
    Atom a{name, {}};
    for (int k = 0; k < arity; ++k) {
      a.args.push_back(Term::constant(pick_one(rng, consts)));
    }
    store.assert_fact(Literal::holds(a, Term::constant(sit)), sit);
  }

  // frame exceptions over existing transitions
  for (const auto& id : store.situation_ids()) {
    const Situation& s = store.situation(id);
    if (s.is_base || !chance(rng, 40)) continue;
    const auto& [name, arity] =
        kGenFluents[static_cast<std::size_t>(rng() % 6)];
    (void)arity;
    Atom clips{"clips",
               {atom_to_term(s.action), Term::constant(name),
                Term::constant(s.parent_id)}};
    store.assert_fact(Literal::holds(clips, Term::constant(s.parent_id)),
                      s.parent_id);
  }
  return w;
}

}  // namespace theoria::testing

#endif  // THEORIA_TESTS_GENERATORS_HPP
