#include "theoria/engine.hpp"

#include <algorithm>
#include <functional>

#include "theoria/dsl.hpp"
#include "theoria/error.hpp"

namespace theoria {

namespace {

[[noreturn]] void engine_error(const std::string& msg) {
  throw Error(Error::Kind::Engine, msg);
}

bool is_do_term(const Term& t) {
  return t.is_compound() && t.symbol == "do" && t.args.size() == 2;
}

// Ground situation term -> id; no existence check here.
std::string ground_sit_id(const Term& t) {
  if (t.is_constant()) return t.symbol;
  if (is_do_term(t)) {
    std::optional<Atom> action = term_to_atom(t.args[0]);
    if (!action || !action->is_ground()) {
      engine_error("malformed situation term: " + t.text());
    }
    return canonical_situation_id(*action, ground_sit_id(t.args[1]));
  }
  engine_error("malformed situation term: " + t.text());
}

// Unifies a (possibly structured) situation pattern against a concrete
// situation in the forest, extending theta.
bool unify_sitterm(const Term& pattern, const std::string& sit_id,
                   const FactStore& store, Substitution& theta) {
  Term p = theta.apply(pattern);
  if (p.is_variable()) {
    return theta.bind(p.symbol, Term::constant(sit_id));
  }
  if (p.is_constant()) {
    return p.symbol == sit_id;
  }
  if (is_do_term(p)) {
    if (!store.has_situation(sit_id)) return false;
    const Situation& s = store.situation(sit_id);
    if (s.is_base) return false;
    std::optional<Atom> pat_action = term_to_atom(p.args[0]);
    if (!pat_action) return false;
    if (!unify_into(*pat_action, s.action, theta)) return false;
    return unify_sitterm(p.args[1], s.parent_id, store, theta);
  }
  return false;
}

void collect_rule_vars(const CompiledRule& rule,
                       std::vector<std::string>& out) {
  std::set<std::string> seen;
  auto add = [&](const Literal& l) {
    std::vector<std::string> vs;
    l.collect_variables(vs);
    for (const auto& v : vs) {
      if (seen.insert(v).second) out.push_back(v);
    }
  };
  for (const auto& l : rule.body) add(l);
  add(rule.head);
}

// A Skolem term whose arguments mention another Skolem term would let the
// Herbrand universe grow without bound; refuse.
void check_no_skolem_nesting(const Term& t) {
  if (!t.is_compound()) return;
  bool is_sk = t.symbol.rfind("sk_", 0) == 0;
  for (const auto& a : t.args) {
    if (is_sk && a.mentions_skolem()) {
      engine_error("Skolem nesting in '" + t.text() +
                   "' (a generated witness fed back into a generator)");
    }
    check_no_skolem_nesting(a);
  }
}

}  // namespace

// ---- compilation ---------------------------------------------------------

Axiom skolemize(const Axiom& axiom) {
  if (axiom.head_existentials.empty()) return axiom;
  std::set<std::string> body_vars;
  for (const auto& l : axiom.body) {
    std::vector<std::string> vs;
    l.collect_variables(vs);
    body_vars.insert(vs.begin(), vs.end());
  }
  std::map<std::string, Term> replacements;
  for (const auto& v : axiom.head_existentials) {
    if (body_vars.count(v)) {
      engine_error("existential variable '" + v +
                   "' appears in the body of axiom '" + axiom.name + "'");
    }
    std::vector<Term> args;
    for (const auto& u : axiom.universals) args.push_back(Term::variable(u));
    std::string witness = "sk_" + axiom.name + "_" + v;
    replacements[v] = args.empty() ? Term::constant(witness)
                                   : Term::compound(witness, args);
  }
  Substitution theta = Substitution::from_bindings(replacements);
  Axiom out = axiom;
  out.head = theta.apply(out.head);
  out.head_existentials.clear();
  return out;
}

namespace {

std::map<std::string, int> compute_strata(const Ontology& ontology) {
  std::map<std::string, int> stratum;
  for (const auto& [pred, d] : ontology.declarations()) stratum[pred] = 0;

  struct Dep {
    std::string head;
    std::string body;
    bool negated;
  };
  std::vector<Dep> deps;
  for (const auto& ax : ontology.axioms()) {
    for (const auto& l : ax.body) {
      if (l.modality != Modality::Holds) continue;
      deps.push_back({ax.head.atom.predicate, l.atom.predicate, l.negated});
    }
  }

  std::size_t bound = stratum.size() + 1;
  bool changed = true;
  std::size_t rounds = 0;
  while (changed && rounds <= bound) {
    changed = false;
    ++rounds;
    for (const auto& d : deps) {
      int need = stratum[d.body] + (d.negated ? 1 : 0);
      if (stratum[d.head] < need) {
        stratum[d.head] = need;
        changed = true;
      }
    }
  }
  if (changed) {
    std::set<std::string> cycle;
    int limit = static_cast<int>(bound);
    for (const auto& [pred, s] : stratum) {
      if (s > limit) cycle.insert(pred);
    }
    std::string names;
    for (const auto& p : cycle) {
      if (!names.empty()) names += ", ";
      names += p;
    }
    engine_error("negative cycle: " + names);
  }
  return stratum;
}

}  // namespace

std::map<std::string, int> stratum_map(const Ontology& ontology) {
  return compute_strata(ontology);
}

// join order: positives as written, then equalities, then negations, so
// every equality/negation variable is bound by the time it runs
static std::vector<Literal> join_order(const std::vector<Literal>& body) {
  std::vector<Literal> out;
  for (const auto& l : body) {
    if (!l.negated && l.modality != Modality::Equality) out.push_back(l);
  }
  for (const auto& l : body) {
    if (l.modality == Modality::Equality) out.push_back(l);
  }
  for (const auto& l : body) {
    if (l.negated) out.push_back(l);
  }
  return out;
}

std::vector<CompiledRule> compile(const Ontology& ontology) {
  std::map<std::string, int> strata = compute_strata(ontology);
  std::vector<CompiledRule> rules;
  for (const auto& ax : ontology.axioms()) {
    Axiom sk = skolemize(ax);
    CompiledRule r;
    r.name = sk.name;
    r.head = sk.head;
    r.stratum = strata.at(sk.head.atom.predicate);
    r.body = join_order(sk.body);
    rules.push_back(std::move(r));
  }
  std::stable_sort(rules.begin(), rules.end(),
                   [](const CompiledRule& a, const CompiledRule& b) {
                     return a.stratum < b.stratum;
                   });
  return rules;
}

// ---- conjunction evaluation ----------------------------------------------

namespace {

// Solves literal conjunctions against a fixed set of candidate situations
// with per-situation visible facts. Emission order is deterministic:
// situations and facts are iterated in sorted order.
class Evaluator {
 public:
  explicit Evaluator(const FactStore& store) : store_(store) {}

  void set_situation(const std::string& id, const std::set<Literal>* facts) {
    if (visible_.emplace(id, facts).second) order_.push_back(id);
    else visible_[id] = facts;
  }

  const std::set<Literal>& facts_at(const std::string& id) const {
    static const std::set<Literal> empty;
    auto it = visible_.find(id);
    return it == visible_.end() || it->second == nullptr ? empty : *it->second;
  }

  bool has_candidate(const std::string& id) const {
    return visible_.count(id) > 0;
  }

  // delta_pos: index into body that must match delta facts at delta_sit
  // (semi-naive); -1 evaluates everything against the full visible sets.
  void solve(const std::vector<Literal>& body, const Substitution& seed,
             int delta_pos, const std::string& delta_sit,
             const std::set<Literal>& delta,
             const std::function<void(const Substitution&)>& emit) const {
    step(body, 0, seed, delta_pos, delta_sit, delta, emit);
  }

 private:
  void step(const std::vector<Literal>& body, std::size_t k,
            const Substitution& theta, int delta_pos,
            const std::string& delta_sit, const std::set<Literal>& delta,
            const std::function<void(const Substitution&)>& emit) const {
    if (k == body.size()) {
      emit(theta);
      return;
    }
    const Literal& lit = body[k];
    auto next = [&](const Substitution& t) {
      step(body, k + 1, t, delta_pos, delta_sit, delta, emit);
    };

    if (lit.modality == Modality::Equality) {
      for (const auto& id : order_) {
        Substitution t = theta;
        if (!unify_sitterm(lit.lhs, id, store_, t)) continue;
        if (!unify_sitterm(lit.rhs, id, store_, t)) continue;
        next(t);
      }
      return;
    }

    if (lit.negated) {
      Literal g = theta.apply(lit);
      if (!g.is_ground()) {
        engine_error("unbound variable under negation in " + lit.text());
      }
      std::string sit = ground_sit_id(g.situation);
      Literal positive = Literal::holds(g.atom, Term::constant(sit));
      if (facts_at(sit).count(positive) == 0) next(theta);
      return;
    }

    // positive holds / occurs
    if (static_cast<int>(k) == delta_pos) {
      for (const auto& fact : delta) {
        if (fact.modality != lit.modality) continue;
        if (fact.atom.predicate != lit.atom.predicate) continue;
        Substitution t = theta;
        if (!unify_sitterm(lit.situation, delta_sit, store_, t)) continue;
        if (!unify_into(lit.atom, fact.atom, t)) continue;
        next(t);
      }
      return;
    }
    for (const auto& id : order_) {
      Substitution base = theta;
      if (!unify_sitterm(lit.situation, id, store_, base)) continue;
      for (const auto& fact : facts_at(id)) {
        if (fact.modality != lit.modality) continue;
        if (fact.atom.predicate != lit.atom.predicate) continue;
        Substitution t = base;
        if (!unify_into(lit.atom, fact.atom, t)) continue;
        next(t);
      }
    }
  }

  const FactStore& store_;
  std::vector<std::string> order_;
  std::map<std::string, const std::set<Literal>*> visible_;
};

std::vector<std::string> chain_of(const FactStore& store,
                                  const std::string& sit_id) {
  std::vector<std::string> chain;
  std::string cur = sit_id;
  while (true) {
    chain.push_back(cur);
    const Situation& s = store.situation(cur);
    if (s.is_base) break;
    cur = s.parent_id;
  }
  std::reverse(chain.begin(), chain.end());  // root first
  return chain;
}

std::set<Literal> base_with_rigids(const FactStore& store,
                                   const std::string& sit_id) {
  std::set<Literal> out = store.base_facts(sit_id);
  Term here = Term::constant(sit_id);
  for (const auto& atom : store.rigid_facts()) {
    out.insert(Literal::holds(atom, here));
  }
  return out;
}

Literal clips_literal(const Atom& action, const std::string& fluent,
                      const std::string& parent_id) {
  Atom clips;
  clips.predicate = "clips";
  clips.args = {atom_to_term(action), Term::constant(fluent),
                Term::constant(parent_id)};
  return Literal::holds(clips, Term::constant(parent_id));
}

// One situation's saturation state while the fixpoint runs.
struct Stage {
  std::set<Literal> facts;                 // everything visible at the stage
  std::map<Literal, Derivation> derived;   // minus base/rigid layer
};

// Chain-wise saturation: ancestors are finished and frozen before their
// descendants start, so each stage sees exactly base + inherited + its own
// derivations.
class Saturator {
 public:
  explicit Saturator(const FactStore& store, bool reuse_cache)
      : store_(store),
        rules_(compile(store.ontology())),
        reuse_cache_(reuse_cache) {}

  const Stage& ensure(const std::string& sit_id) {
    auto it = stages_.find(sit_id);
    if (it != stages_.end()) return it->second;

    const Situation& s = store_.situation(sit_id);
    const Stage* parent = nullptr;
    if (!s.is_base) parent = &ensure(s.parent_id);

    if (reuse_cache_ && store_.is_saturated(sit_id)) {
      Stage stage;
      stage.facts = base_with_rigids(store_, sit_id);
      for (const auto& lit : store_.derived_facts(sit_id)) {
        stage.facts.insert(lit);
        const Derivation* d = store_.find_derivation(sit_id, lit);
        stage.derived.emplace(lit, d ? *d : Derivation{});
      }
      return stages_.emplace(sit_id, std::move(stage)).first->second;
    }

    Stage stage;
    stage.facts = base_with_rigids(store_, sit_id);
    if (parent != nullptr) inherit(stage, *parent, s);
    run_rules(stage, sit_id);
    return stages_.emplace(sit_id, std::move(stage)).first->second;
  }

  std::set<Literal> derived_set(const std::string& sit_id) {
    const Stage& stage = ensure(sit_id);
    std::set<Literal> out;
    for (const auto& [lit, d] : stage.derived) out.insert(lit);
    return out;
  }

  const std::map<Literal, Derivation>& derivations(const std::string& sit_id) {
    return ensure(sit_id).derived;
  }

 private:
  // Inertia: fluents persist across the action unless clipped. occurs
  // records and clips annotations describe one specific transition and do
  // not travel.
  void inherit(Stage& stage, const Stage& parent, const Situation& s) {
    for (const auto& fact : parent.facts) {
      if (fact.modality != Modality::Holds) continue;
      const std::string& pred = fact.atom.predicate;
      if (pred == "clips") continue;
      const Declaration* d = store_.ontology().find_declaration(pred);
      if (d == nullptr || d->kind != PredicateKind::Fluent) continue;
      Literal blocked = clips_literal(s.action, pred, s.parent_id);
      if (parent.facts.count(blocked) > 0) continue;
      Literal moved = Literal::holds(fact.atom, Term::constant(s.id));
      if (stage.facts.insert(moved).second) {
        Literal naf = blocked;
        naf.negated = true;
        Derivation how;
        how.rule = "frame";
        how.premises = {{fact, s.parent_id}, {naf, s.parent_id}};
        stage.derived.emplace(moved, std::move(how));
      }
    }
  }

  void run_rules(Stage& stage, const std::string& sit_id) {
    Evaluator ev(store_);
    for (const auto& [id, st] : stages_) {
      if (store_.is_descendant(sit_id, id)) ev.set_situation(id, &st.facts);
    }
    ev.set_situation(sit_id, &stage.facts);

    std::set<int> strata;
    for (const auto& r : rules_) strata.insert(r.stratum);
    for (int stratum : strata) {
      std::vector<const CompiledRule*> active;
      for (const auto& r : rules_) {
        if (r.stratum == stratum) active.push_back(&r);
      }
      // round 1: full evaluation
      std::set<Literal> delta;
      for (const CompiledRule* r : active) {
        fire(*r, ev, stage, sit_id, -1, {}, delta);
      }
      // then: every firing must touch at least one new fact
      while (!delta.empty()) {
        std::set<Literal> next;
        for (const CompiledRule* r : active) {
          for (std::size_t i = 0; i < r->body.size(); ++i) {
            const Literal& l = r->body[i];
            if (l.negated || l.modality != Modality::Holds) continue;
            fire(*r, ev, stage, sit_id, static_cast<int>(i), delta, next);
          }
        }
        delta = std::move(next);
      }
    }
  }

  void fire(const CompiledRule& rule, const Evaluator& ev, Stage& stage,
            const std::string& sit_id, int delta_pos,
            const std::set<Literal>& delta, std::set<Literal>& added) {
    std::vector<std::string> rule_vars;
    collect_rule_vars(rule, rule_vars);
    ev.solve(rule.body, Substitution(), delta_pos, sit_id, delta,
             [&](const Substitution& theta) {
               Atom head_atom = theta.apply(rule.head.atom);
               if (!head_atom.is_ground()) return;  // unreachable for valid rules
               for (const auto& a : head_atom.args) check_no_skolem_nesting(a);
               Term head_sit = theta.apply(rule.head.situation);
               if (!head_sit.is_ground()) return;
               std::string target = ground_sit_id(head_sit);
               if (target != sit_id) return;  // ancestors are frozen
               Literal fact =
                   Literal::holds(head_atom, Term::constant(sit_id));
               if (stage.facts.count(fact) > 0) return;
               stage.facts.insert(fact);
               added.insert(fact);
               Derivation how;
               how.rule = rule.name;
               how.theta = theta.restricted_to(rule_vars);
               for (const auto& l : rule.body) {
                 Literal g = theta.apply(l);
                 std::string at;
                 if (l.modality == Modality::Equality) {
                   at = ground_sit_id(g.lhs);
                 } else {
                   at = ground_sit_id(g.situation);
                   g.situation = Term::constant(at);
                 }
                 how.premises.emplace_back(g, at);
               }
               stage.derived.emplace(fact, std::move(how));
             });
  }

  const FactStore& store_;
  std::vector<CompiledRule> rules_;
  bool reuse_cache_;
  std::map<std::string, Stage> stages_;
};

}  // namespace

// ---- public saturation entry points --------------------------------------

std::set<Literal> saturate(FactStore& store, const std::string& sit_id) {
  if (store.is_saturated(sit_id)) {
    return store.derived_facts(sit_id);
  }
  Saturator sat(store, true);
  sat.ensure(sit_id);
  for (const auto& id : chain_of(store, sit_id)) {
    if (store.is_saturated(id)) continue;
    for (const auto& [lit, how] : sat.derivations(id)) {
      store.add_derived(id, lit, how);
    }
    store.mark_saturated(id);
  }
  return store.derived_facts(sit_id);
}

std::map<std::string, std::set<Literal>> saturate_all(FactStore& store) {
  std::map<std::string, std::set<Literal>> out;
  for (const auto& id : store.situation_ids()) {
    out[id] = saturate(store, id);
  }
  return out;
}

std::set<Literal> saturate_snapshot(const FactStore& store,
                                    const std::string& sit_id) {
  Saturator sat(store, false);
  return sat.derived_set(sit_id);
}

// ---- the brute-force oracle ----------------------------------------------

namespace {

void subterms_of(const Term& t, std::set<Term>& out) {
  if (t.is_ground()) out.insert(t);
  for (const auto& a : t.args) subterms_of(a, out);
}

// The oracle's own frame pass, kept independent of Saturator::inherit.
std::set<Literal> naive_inherit(const FactStore& store,
                                const std::set<Literal>& parent_facts,
                                const Situation& s) {
  std::set<Literal> out;
  for (const auto& fact : parent_facts) {
    if (fact.modality != Modality::Holds) continue;
    if (fact.atom.predicate == "clips") continue;
    const Declaration* d =
        store.ontology().find_declaration(fact.atom.predicate);
    if (d == nullptr || d->kind != PredicateKind::Fluent) continue;
    Literal blocked =
        clips_literal(s.action, fact.atom.predicate, s.parent_id);
    if (parent_facts.count(blocked) > 0) continue;
    out.insert(Literal::holds(fact.atom, Term::constant(s.id)));
  }
  return out;
}

bool naive_literal_true(const Literal& ground,
                        const std::map<std::string, std::set<Literal>>& facts,
                        const std::vector<std::string>& chain) {
  if (ground.modality == Modality::Equality) {
    if (!ground.lhs.is_ground() || !ground.rhs.is_ground()) return false;
    std::string l;
    std::string r;
    try {
      l = ground_sit_id(ground.lhs);
      r = ground_sit_id(ground.rhs);
    } catch (const Error&) {
      return false;
    }
    if (l != r) return false;
    return std::find(chain.begin(), chain.end(), l) != chain.end();
  }
  std::string sit;
  try {
    sit = ground_sit_id(ground.situation);
  } catch (const Error&) {
    return false;
  }
  auto it = facts.find(sit);
  const std::set<Literal> empty;
  const std::set<Literal>& visible = it == facts.end() ? empty : it->second;
  Literal positive = ground;
  positive.negated = false;
  positive.situation = Term::constant(sit);
  bool present = visible.count(positive) > 0;
  return ground.negated ? !present : present;
}

}  // namespace

std::set<Literal> naive_saturate(const FactStore& store,
                                 const std::string& sit_id) {
  std::vector<CompiledRule> rules = compile(store.ontology());
  std::vector<std::string> chain = chain_of(store, sit_id);

  std::map<std::string, std::set<Literal>> facts;
  for (std::size_t c = 0; c < chain.size(); ++c) {
    const std::string& here = chain[c];
    std::set<Literal>& mine = facts[here];
    mine = base_with_rigids(store, here);
    if (c > 0) {
      for (const auto& lit :
           naive_inherit(store, facts[chain[c - 1]], store.situation(here))) {
        mine.insert(lit);
      }
    }

    std::set<int> strata;
    for (const auto& r : rules) strata.insert(r.stratum);
    for (int stratum : strata) {
      bool changed = true;
      while (changed) {
        changed = false;
        // universe: every ground term visible anywhere on the chain plus
        // constants mentioned by the rules, rebuilt every round
        std::set<Term> universe_set;
        for (const auto& [id, fs] : facts) {
          universe_set.insert(Term::constant(id));
          for (const auto& f : fs) {
            for (const auto& a : f.atom.args) subterms_of(a, universe_set);
          }
        }
        for (const auto& r : rules) {
          for (const auto& l : r.body) {
            if (l.modality == Modality::Equality) {
              subterms_of(l.lhs, universe_set);
              subterms_of(l.rhs, universe_set);
            } else {
              for (const auto& a : l.atom.args) subterms_of(a, universe_set);
              subterms_of(l.situation, universe_set);
            }
          }
          for (const auto& a : r.head.atom.args) subterms_of(a, universe_set);
          subterms_of(r.head.situation, universe_set);
        }
        std::vector<Term> universe(universe_set.begin(), universe_set.end());

        for (const auto& rule : rules) {
          if (rule.stratum != stratum) continue;
          std::vector<std::string> vars;
          collect_rule_vars(rule, vars);
          std::vector<std::size_t> odo(vars.size(), 0);
          while (true) {
            std::map<std::string, Term> assign;
            for (std::size_t i = 0; i < vars.size(); ++i) {
              assign[vars[i]] = universe[odo[i]];
            }
            Substitution theta;
            bool ok = true;
            for (const auto& [v, t] : assign) {
              if (!theta.bind(v, t)) {
                ok = false;
                break;
              }
            }
            if (ok) {
              for (const auto& l : rule.body) {
                if (!naive_literal_true(theta.apply(l), facts, chain)) {
                  ok = false;
                  break;
                }
              }
            }
            if (ok) {
              Atom head_atom = theta.apply(rule.head.atom);
              if (head_atom.is_ground()) {
                for (const auto& a : head_atom.args) {
                  check_no_skolem_nesting(a);
                }
                Term head_sit = theta.apply(rule.head.situation);
                if (head_sit.is_ground() &&
                    ground_sit_id(head_sit) == here) {
                  Literal fact =
                      Literal::holds(head_atom, Term::constant(here));
                  if (mine.insert(fact).second) changed = true;
                }
              }
            }
            // odometer
            std::size_t i = 0;
            for (; i < odo.size(); ++i) {
              if (++odo[i] < universe.size()) break;
              odo[i] = 0;
            }
            if (i == odo.size()) break;
          }
        }
      }
    }
  }

  std::set<Literal> out;
  std::set<Literal> layer = base_with_rigids(store, sit_id);
  for (const auto& f : facts[sit_id]) {
    if (layer.count(f) == 0) out.insert(f);
  }
  return out;
}

// ---- queries -------------------------------------------------------------

std::vector<Answer> query(FactStore& store, const std::vector<Literal>& body) {
  if (body.empty()) engine_error("empty query");
  // ground situation terms must name known situations up front
  for (const auto& lit : body) {
    std::vector<const Term*> sits;
    if (lit.modality == Modality::Equality) {
      sits = {&lit.lhs, &lit.rhs};
    } else {
      sits = {&lit.situation};
    }
    for (const Term* t : sits) {
      if (t->is_ground()) {
        std::string id = ground_sit_id(*t);
        if (!store.has_situation(id)) {
          engine_error("unknown situation '" + id + "'");
        }
      }
    }
  }

  saturate_all(store);

  std::map<std::string, std::set<Literal>> all;
  for (const auto& id : store.situation_ids()) {
    all[id] = store.facts_in(id);
  }
  Evaluator ev(store);
  for (const auto& [id, fs] : all) ev.set_situation(id, &fs);

  std::vector<std::string> vars;
  {
    std::set<std::string> seen;
    for (const auto& l : body) {
      std::vector<std::string> vs;
      l.collect_variables(vs);
      for (const auto& v : vs) {
        if (seen.insert(v).second) vars.push_back(v);
      }
    }
  }

  std::map<std::string, Answer> unique;  // keyed by canonical binding text
  std::vector<Literal> ordered = join_order(body);
  ev.solve(ordered, Substitution(), -1, "", {}, [&](const Substitution& theta) {
    Answer a;
    a.bindings = theta.restricted_to(vars);
    const Literal& first = body.front();
    Term sit = first.modality == Modality::Equality
                   ? theta.apply(first.lhs)
                   : theta.apply(first.situation);
    if (sit.is_ground()) a.situation = ground_sit_id(sit);
    unique.emplace(a.bindings.text() + " @ " + a.situation, a);
  });

  std::vector<Answer> out;
  for (const auto& [key, a] : unique) out.push_back(a);
  return out;
}

// ---- proofs --------------------------------------------------------------

namespace {

std::optional<ProofNode> build_proof(const FactStore& store,
                                     const Literal& goal,
                                     const std::string& sit_id) {
  Literal lit = goal;
  lit.situation = Term::constant(sit_id);
  ProofNode node;
  node.conclusion = lit;
  node.situation = sit_id;

  if (lit.modality == Modality::Holds) {
    const Declaration* d =
        store.ontology().find_declaration(lit.atom.predicate);
    if (d != nullptr && d->kind == PredicateKind::Rigid &&
        store.rigid_facts().count(lit.atom) > 0) {
      node.rule = "base-fact";
      return node;
    }
  }
  if (store.base_facts(sit_id).count(lit) > 0) {
    node.rule = "base-fact";
    return node;
  }
  const Derivation* how = store.find_derivation(sit_id, lit);
  if (how == nullptr) return std::nullopt;

  node.rule = how->rule;
  node.bindings = how->theta;
  for (const auto& [premise, at] : how->premises) {
    if (premise.negated) {
      ProofNode leaf;
      leaf.conclusion = premise;
      leaf.situation = at;
      leaf.rule = "negation-as-failure";
      node.premises.push_back(std::move(leaf));
      continue;
    }
    if (premise.modality == Modality::Equality) {
      ProofNode leaf;
      leaf.conclusion = premise;
      leaf.situation = at;
      leaf.rule = "equality";
      node.premises.push_back(std::move(leaf));
      continue;
    }
    std::optional<ProofNode> sub = build_proof(store, premise, at);
    if (!sub) return std::nullopt;  // derivation index out of sync
    node.premises.push_back(std::move(*sub));
  }
  return node;
}

}  // namespace

std::optional<ProofNode> prove(FactStore& store, const Literal& goal,
                               const std::string& sit_id) {
  if (goal.negated || goal.modality == Modality::Equality) {
    engine_error("only positive holds/occurs facts can be proven");
  }
  if (!goal.atom.is_ground()) {
    engine_error("proof goals must be ground: " + goal.atom.text());
  }
  saturate(store, sit_id);
  return build_proof(store, goal, sit_id);
}

bool replay_proof(const FactStore& store, const ProofNode& proof) {
  const Literal& c = proof.conclusion;
  if (proof.rule == "base-fact") {
    if (!proof.premises.empty()) return false;
    if (c.negated) return false;
    if (c.modality == Modality::Holds) {
      const Declaration* d =
          store.ontology().find_declaration(c.atom.predicate);
      if (d != nullptr && d->kind == PredicateKind::Rigid) {
        return store.rigid_facts().count(c.atom) > 0;
      }
    }
    return store.base_facts(proof.situation).count(c) > 0;
  }
  if (proof.rule == "negation-as-failure") {
    if (!proof.premises.empty() || !c.negated) return false;
    Literal positive = c;
    positive.negated = false;
    return store.facts_in(proof.situation).count(positive) == 0;
  }
  if (proof.rule == "equality") {
    if (!proof.premises.empty() || c.modality != Modality::Equality) {
      return false;
    }
    if (!c.lhs.is_ground() || !c.rhs.is_ground()) return false;
    std::string l = ground_sit_id(c.lhs);
    std::string r = ground_sit_id(c.rhs);
    return l == r && store.has_situation(l);
  }
  if (proof.rule == "frame") {
    if (proof.premises.size() != 2) return false;
    const Situation& s = store.situation(proof.situation);
    if (s.is_base) return false;
    const ProofNode& carried = proof.premises[0];
    const ProofNode& naf = proof.premises[1];
    if (carried.situation != s.parent_id) return false;
    if (!(carried.conclusion.atom == c.atom)) return false;
    Literal expected_block =
        clips_literal(s.action, c.atom.predicate, s.parent_id);
    expected_block.negated = true;
    if (!(naf.conclusion == expected_block)) return false;
    return replay_proof(store, carried) && replay_proof(store, naf);
  }

  // an axiom instance: re-run the rule under the recorded bindings
  const Axiom* source = nullptr;
  for (const auto& ax : store.ontology().axioms()) {
    if (ax.name == proof.rule) {
      source = &ax;
      break;
    }
  }
  if (source == nullptr) return false;
  Axiom sk = skolemize(*source);
  std::vector<Literal> ordered = join_order(sk.body);
  if (ordered.size() != proof.premises.size()) return false;

  const Substitution& theta = proof.bindings;
  Atom head_atom = theta.apply(sk.head.atom);
  if (!(head_atom == c.atom)) return false;
  Term head_sit = theta.apply(sk.head.situation);
  if (!head_sit.is_ground() || ground_sit_id(head_sit) != proof.situation) {
    return false;
  }
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    Literal expected = theta.apply(ordered[i]);
    const ProofNode& premise = proof.premises[i];
    if (expected.modality == Modality::Equality) {
      if (!(premise.conclusion == expected)) return false;
    } else {
      std::string at = ground_sit_id(expected.situation);
      expected.situation = Term::constant(at);
      if (!(premise.conclusion == expected)) return false;
      if (premise.situation != at) return false;
    }
    if (!replay_proof(store, premise)) return false;
  }
  return true;
}

// ---- serialization -------------------------------------------------------

nlohmann::json proof_to_json(const ProofNode& proof) {
  nlohmann::json j;
  j["fact"] = proof.conclusion.text();
  j["situation"] = proof.situation;
  j["rule"] = proof.rule;
  nlohmann::json bindings = nlohmann::json::object();
  for (const auto& [var, value] : proof.bindings.bindings()) {
    bindings[var] = value.text();
  }
  j["bindings"] = bindings;
  nlohmann::json premises = nlohmann::json::array();
  for (const auto& p : proof.premises) premises.push_back(proof_to_json(p));
  j["premises"] = premises;
  return j;
}

ProofNode proof_from_json(const nlohmann::json& j) {
  ProofNode node;
  node.conclusion =
      dsl::parse_literal_text(j.at("fact").get<std::string>(), true);
  node.situation = j.at("situation").get<std::string>();
  node.rule = j.at("rule").get<std::string>();
  if (j.contains("bindings")) {
    std::map<std::string, Term> raw;
    for (const auto& [var, value] : j.at("bindings").items()) {
      raw[var] = dsl::parse_term_text(value.get<std::string>(), true);
    }
    node.bindings = Substitution::from_bindings(std::move(raw));
  }
  for (const auto& p : j.at("premises")) {
    node.premises.push_back(proof_from_json(p));
  }
  return node;
}

nlohmann::json answers_to_json(const std::vector<Answer>& answers) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : answers) {
    nlohmann::json entry;
    nlohmann::json bindings = nlohmann::json::object();
    for (const auto& [var, value] : a.bindings.bindings()) {
      bindings[var] = value.text();
    }
    entry["bindings"] = bindings;
    entry["situation"] = a.situation;
    arr.push_back(entry);
  }
  nlohmann::json j;
  j["answers"] = arr;
  return j;
}

std::vector<Answer> answers_from_json(const nlohmann::json& j) {
  std::vector<Answer> out;
  for (const auto& entry : j.at("answers")) {
    Answer a;
    std::map<std::string, Term> raw;
    for (const auto& [var, value] : entry.at("bindings").items()) {
      raw[var] = dsl::parse_term_text(value.get<std::string>(), true);
    }
    a.bindings = Substitution::from_bindings(std::move(raw));
    a.situation = entry.at("situation").get<std::string>();
    out.push_back(std::move(a));
  }
  return out;
}

// ---- competency ----------------------------------------------------------

bool CompetencyReport::all_passed() const {
  for (const auto& e : entries) {
    if (!e.passed) return false;
  }
  return true;
}

CompetencyReport check_competency(FactStore& store) {
  CompetencyReport report;
  for (const auto& q : store.ontology().queries()) {
    CompetencyEntry entry;
    entry.name = q.name;
    entry.expect = q.expect;
    try {
      std::vector<Answer> answers = query(store, q.body);
      entry.answer_count = answers.size();
      entry.satisfied = !answers.empty();
      switch (q.expect) {
        case NamedQuery::Expect::Sat:
          entry.passed = entry.satisfied;
          break;
        case NamedQuery::Expect::Unsat:
          entry.passed = !entry.satisfied;
          break;
        case NamedQuery::Expect::None:
          entry.passed = true;
          break;
      }
    } catch (const Error& e) {
      entry.error = e.what();
      entry.passed = false;
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace theoria
