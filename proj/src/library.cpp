#include "theoria/library.hpp"

#include <initializer_list>
#include <utility>

#include "theoria/dsl.hpp"
#include "theoria/engine.hpp"
#include "theoria/error.hpp"

namespace theoria {

namespace {

// The embedded texts are the source of truth; the files shipped under
// ontologies/ mirror them byte for byte (a test holds the two together).

const std::string kBdiOnto = R"ONTO(% Belief-desire-intention bridge: situated terminology induces deliberate
% theory references, desires, and evidence-backed beliefs.
%
% Quantifier conventions fixed by this formalization:
%   - a variable that appears only in an axiom's body is read universally;
%     an existential premise under an implication whose head omits the
%     variable is equivalent, and the universal form is what a forward
%     chainer can use. In particular the desire axiom ranges over every
%     auditor rather than one witness auditor.
%   - the believing state B is the one genuinely existential head variable;
%     a fresh witness is generated per client, treatment, and situation.

decl deliberate_theory_reference/1.
decl desire/1.
decl belief/1.
decl has_evidence/3.

% shared terminology this bridge reads
decl accounting_standard/1.
decl has_auditor_orientation/2.
decl client_preferred_treatment/2.

axiom bridge_standard: forall As, S:
  holds(accounting_standard(As), S)
  -> holds(deliberate_theory_reference(As), S).

axiom bridge_orientation: forall A, Ao, S:
  holds(has_auditor_orientation(A, Ao), S)
  -> holds(desire(Ao), S).

axiom bridge_preference: forall C, Cpt, S:
  holds(client_preferred_treatment(C, Cpt), S)
  -> exists B: holds(has_evidence(B, client_preferred_treatment, Cpt), S).
)ONTO";

const std::string kAuditorOnto = R"ONTO(% Auditor decision-making terminology and the enforcement axiom: an
% engagement where a principles-oriented auditor applies a principles-based
% standard enforces a nonopportunistic treatment on an opportunistic client.
%
% The engagement transition is the situation term do(audits(A, C), Sc); the
% corresponding action record occurs(audits(A, C), Sc) is kept by the store.

decl accounting_standard/1.
decl accounting_standard_type/2.
decl auditor/1.
decl has_auditor_orientation/2.
decl client_preferred_treatment/2.
decl enforces_preferred_treatment/2.
decl audits/2 kind action.

% shared with the belief-desire bridge
decl deliberate_theory_reference/1.
decl desire/1.
decl has_evidence/3.

axiom h1b: forall A, As, C, S, Sc:
  holds(accounting_standard(As), S) &
  holds(accounting_standard_type(As, principles_based), S) &
  holds(auditor(A), S) &
  holds(has_auditor_orientation(A, principles_oriented), S) &
  holds(client_preferred_treatment(C, opportunistic), Sc) &
  S = do(audits(A, C), Sc)
  -> holds(enforces_preferred_treatment(A, nonopportunistic), S).

query cq_standard_in_force expect sat:
  holds(accounting_standard(ifrs), S).
query cq_nonopportunistic_enforced expect sat:
  holds(enforces_preferred_treatment(A, nonopportunistic), S).
query cq_deliberate_reference expect sat:
  holds(deliberate_theory_reference(As), S).
query cq_orientation_desired expect sat:
  holds(desire(Ao), S).
query cq_evidence_of_preference expect sat:
  holds(has_evidence(B, client_preferred_treatment, Cpt), S).
)ONTO";

[[noreturn]] void library_error(const std::string& msg) {
  throw Error(Error::Kind::Validation, msg);
}

void check_enum(const std::string& value,
                std::initializer_list<const char*> allowed,
                const std::string& what) {
  std::string expected;
  for (const char* a : allowed) {
    if (value == a) return;
    if (!expected.empty()) expected += " or ";
    expected += a;
  }
  library_error("unknown " + what + " '" + value + "' (expected " + expected +
                ")");
}

Literal scenario_fact(const std::string& predicate,
                      std::vector<std::string> args,
                      const std::string& sit) {
  Atom a{predicate, {}};
  for (auto& x : args) a.args.push_back(Term::constant(std::move(x)));
  return Literal::holds(std::move(a), Term::constant(sit));
}

}  // namespace

const std::string& builtin_text(const std::string& name) {
  if (name == "bdi") return kBdiOnto;
  if (name == "auditor") return kAuditorOnto;
  library_error("unknown bundle '" + name + "' (expected bdi or auditor)");
}

Ontology load_builtin(const std::string& name) {
  if (name == "bdi") {
    return dsl::build_ontology({dsl::parse_program(kBdiOnto, "bdi.onto")});
  }
  if (name == "auditor") {
    return dsl::build_ontology(
        {dsl::parse_program(kBdiOnto, "bdi.onto"),
         dsl::parse_program(kAuditorOnto, "auditor.onto")});
  }
  library_error("unknown bundle '" + name + "' (expected bdi or auditor)");
}

FactStore build_scenario(const Scenario& s, Ontology ontology) {
  check_enum(s.standard_type, {"rules_based", "principles_based"},
             "standard type");
  check_enum(s.auditor_orientation,
             {"rules_oriented", "principles_oriented", "client_oriented"},
             "auditor orientation");
  check_enum(s.client_preference, {"opportunistic", "nonopportunistic"},
             "client preference");

  FactStore store(std::move(ontology));
  store.add_base_situation("sc");
  store.assert_fact(scenario_fact("client_preferred_treatment",
                                  {"client1", s.client_preference}, "sc"),
                    "sc");
  std::string sit = store.successor(
      Atom{"audits", {Term::constant("auditor1"), Term::constant("client1")}},
      "sc");
  store.assert_fact(scenario_fact("accounting_standard", {"ifrs"}, sit), sit);
  store.assert_fact(scenario_fact("accounting_standard_type",
                                  {"ifrs", s.standard_type}, sit),
                    sit);
  store.assert_fact(scenario_fact("auditor", {"auditor1"}, sit), sit);
  store.assert_fact(scenario_fact("has_auditor_orientation",
                                  {"auditor1", s.auditor_orientation}, sit),
                    sit);
  return store;
}

FactStore build_scenario(const Scenario& s) {
  return build_scenario(s, load_builtin("auditor"));
}

std::vector<DesignRow> run_design(const Ontology& ontology,
                                  const std::string& client_preference) {
  static const std::vector<std::string> kStandards = {"rules_based",
                                                      "principles_based"};
  static const std::vector<std::string> kOrientations = {
      "rules_oriented", "principles_oriented", "client_oriented"};

  std::vector<DesignRow> rows;
  for (const auto& standard : kStandards) {
    for (const auto& orientation : kOrientations) {
      DesignRow row;
      row.scenario = Scenario{standard + "_x_" + orientation, standard,
                              orientation, client_preference};
      try {
        FactStore store = build_scenario(row.scenario, ontology);
        std::string sit = canonical_situation_id(
            Atom{"audits",
                 {Term::constant("auditor1"), Term::constant("client1")}},
            "sc");
        saturate(store, sit);
        Literal goal = scenario_fact("enforces_preferred_treatment",
                                     {"auditor1", "nonopportunistic"}, sit);
        row.enforces_nonopportunistic = store.facts_in(sit).count(goal) > 0;
      } catch (const Error&) {
        row.enforces_nonopportunistic = false;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace theoria
