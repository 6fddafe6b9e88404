#include "theoria/dsl.hpp"

#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "support.hpp"
#include "theoria/error.hpp"

using namespace theoria;
using namespace theoria::dsl;

namespace {

const char* kAuditorDecls = R"(
decl accounting_standard/1.
decl accounting_standard_type/2.
decl auditor/1.
decl has_auditor_orientation/2.
decl client_preferred_treatment/2.
decl enforces_preferred_treatment/2.
decl audits/2 kind action.
)";

std::string with_decls(const std::string& rest) {
  return std::string(kAuditorDecls) + rest;
}

Error capture(const std::string& text) {
  try {
    parse_program(text, "test.onto");
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected a parse/validation error");
  return Error(Error::Kind::Parse, "unreachable");
}

}  // namespace

TEST_CASE("empty input parses to zero items") {
  SourceProgram p = parse_program("", "empty.onto");
  CHECK(p.items.empty());
  CHECK(parse_program("  % only a comment\n").items.empty());
}

TEST_CASE("a ground holds fact parses") {
  SourceProgram p = parse_program(
      with_decls("fact holds(accounting_standard(ifrs), sigma0).\n"));
  REQUIRE(p.items.size() == 8);
  const SourceItem& item = p.items.back();
  REQUIRE(item.kind == SourceItem::Kind::Fact);
  CHECK(item.fact.modality == Modality::Holds);
  CHECK(item.fact.atom.predicate == "accounting_standard");
  CHECK(item.fact.atom.args == std::vector<Term>{Term::constant("ifrs")});
  CHECK(item.fact.situation == Term::constant("sigma0"));
  CHECK_FALSE(item.fact.negated);
}

TEST_CASE("occurs facts and do situations parse") {
  SourceProgram p = parse_program(with_decls(
      "fact occurs(audits(john_jones, acme), sigma0).\n"
      "fact holds(auditor(john_jones), do(audits(john_jones, acme), sigma0)).\n"));
  const SourceItem& occ = p.items[7];
  REQUIRE(occ.kind == SourceItem::Kind::Fact);
  CHECK(occ.fact.modality == Modality::Occurs);
  const SourceItem& in_do = p.items[8];
  CHECK(in_do.fact.situation.symbol == "do");
  CHECK(in_do.fact.situation.args.size() == 2);
}

TEST_CASE("the auditor enforcement axiom parses to the expected shape") {
  std::string text = with_decls(
      "axiom h1b: forall A, As, S, C, Sc:\n"
      "  holds(accounting_standard(As), S) &\n"
      "  holds(accounting_standard_type(As, principles_based), S) &\n"
      "  holds(auditor(A), S) &\n"
      "  holds(has_auditor_orientation(A, principles_oriented), S) &\n"
      "  holds(client_preferred_treatment(C, opportunistic), Sc) &\n"
      "  S = do(audits(A, C), Sc)\n"
      "  -> holds(enforces_preferred_treatment(A, nonopportunistic), S).\n");
  SourceProgram p = parse_program(text);
  const SourceItem& item = p.items.back();
  REQUIRE(item.kind == SourceItem::Kind::Axiom);
  const Axiom& ax = item.axiom;
  CHECK(ax.name == "h1b");
  CHECK(ax.universals == std::vector<std::string>{"A", "As", "S", "C", "Sc"});
  CHECK(ax.head_existentials.empty());
  REQUIRE(ax.body.size() == 6);
  int holds_count = 0;
  int eq_count = 0;
  for (const auto& l : ax.body) {
    if (l.modality == Modality::Holds) ++holds_count;
    if (l.modality == Modality::Equality) ++eq_count;
  }
  CHECK(holds_count == 5);
  CHECK(eq_count == 1);
  CHECK(ax.head.modality == Modality::Holds);
  CHECK(ax.head.atom.predicate == "enforces_preferred_treatment");
  CHECK(ax.head.atom.args[1] == Term::constant("nonopportunistic"));
  CHECK(ax.head.situation == Term::variable("S"));
}

TEST_CASE("head existentials parse and print with an exists prefix") {
  std::string text =
      "decl p/1.\n"
      "decl q/1.\n"
      "axiom mk: forall X, S: holds(p(X), S) -> exists B: holds(q(B), S).\n";
  SourceProgram p = parse_program(text);
  const Axiom& ax = p.items.back().axiom;
  CHECK(ax.head_existentials == std::vector<std::string>{"B"});
  std::string printed = print_program(p);
  CHECK(printed.find("exists B: holds(q(B), S)") != std::string::npos);
}

TEST_CASE("queries parse with and without expectations") {
  SourceProgram p = parse_program(with_decls(
      "query q1: holds(accounting_standard(As), S).\n"
      "query q2 expect sat: holds(auditor(A), S).\n"
      "query q3 expect unsat: holds(auditor(nobody), sigma_none).\n"));
  CHECK(p.items[7].query.expect == NamedQuery::Expect::None);
  CHECK(p.items[8].query.expect == NamedQuery::Expect::Sat);
  CHECK(p.items[9].query.expect == NamedQuery::Expect::Unsat);
  CHECK(p.items[8].query.name == "q2");
}

TEST_CASE("a one-fact program prints as a single canonical line") {
  SourceProgram p = parse_program_syntax(
      "fact   holds( accounting_standard( ifrs ) ,  sigma0 )  .");
  std::string printed = print_program(p);
  CHECK(printed == "fact holds(accounting_standard(ifrs), sigma0).\n");
}

TEST_CASE("round-trip: parse(print(parse(p))) == parse(p)") {
  std::string text = with_decls(
      "decl belief/1.\n"
      "fact holds(accounting_standard(ifrs), sigma0).\n"
      "fact occurs(audits(john_jones, acme), sigma0).\n"
      "axiom frame_demo: forall X, S: holds(auditor(X), S) & "
      "not holds(client_preferred_treatment(X, opportunistic), S) "
      "-> holds(enforces_preferred_treatment(X, nonopportunistic), S).\n"
      "axiom mk_belief: forall C, S: holds(client_preferred_treatment(C, "
      "opportunistic), S) -> exists B: holds(belief(B), S).\n"
      "query cq1 expect sat: holds(auditor(A), S) & S = do(audits(A, C), Sc).\n");
  SourceProgram once = parse_program(text);
  SourceProgram twice = parse_program(print_program(once));
  CHECK(once == twice);
  // and printing is a fixpoint
  CHECK(print_program(once) == print_program(twice));
}

TEST_CASE("declaration order does not matter within or across files") {
  SourceProgram uses = parse_program_syntax(
      "fact holds(p(a), s0).\n", "uses.onto");
  SourceProgram decls = parse_program_syntax("decl p/1.\n", "decls.onto");
  Ontology onto = build_ontology({uses, decls});
  CHECK(onto.ground_facts().size() == 1);

  // same file, fact first
  SourceProgram p = parse_program("fact holds(p(a), s0).\ndecl p/1.\n");
  CHECK(p.items.size() == 2);
}

TEST_CASE("comments are ignored anywhere outside tokens") {
  SourceProgram p = parse_program(
      "% leading\n"
      "decl p/1. % trailing\n"
      "%% another\n"
      "fact holds(p(a), s0).\n");
  CHECK(p.items.size() == 2);
}

TEST_CASE("syntax errors carry position and expected tokens") {
  Error e = capture("bogus stuff.");
  CHECK(e.kind() == Error::Kind::Parse);
  CHECK(e.line() == 1);
  CHECK(e.column() == 1);
  CHECK(std::string(e.what()).find("expected 'decl', 'axiom', 'fact', or "
                                   "'query'") != std::string::npos);
  CHECK(std::string(e.what()).find("test.onto:1:1") != std::string::npos);
}

TEST_CASE("a variable where a fact needs a constant is rejected at the token") {
  Error e = capture(with_decls("fact holds(auditor(Who), sigma0).\n"));
  CHECK(e.kind() == Error::Kind::Parse);
  CHECK(e.line() == 9);
  CHECK(e.column() == 20);
  CHECK(std::string(e.what()).find("variables are not allowed in facts") !=
        std::string::npos);
}

TEST_CASE("the reserved skolem prefix is rejected") {
  Error e = capture("decl sk_thing/1.\n");
  CHECK(e.kind() == Error::Kind::Parse);
  CHECK(std::string(e.what()).find("sk_") != std::string::npos);
}

TEST_CASE("undeclared predicates are validation errors with position") {
  Error e = capture("fact holds(mystery(a), s0).\n");
  CHECK(e.kind() == Error::Kind::Validation);
  CHECK(e.line() == 1);
  CHECK(std::string(e.what()).find("undeclared predicate 'mystery'") !=
        std::string::npos);
}

TEST_CASE("arity mismatches against declarations are rejected") {
  Error e = capture("decl p/2.\nfact holds(p(a), s0).\n");
  CHECK(e.kind() == Error::Kind::Validation);
  CHECK(e.line() == 2);
  CHECK(std::string(e.what()).find("declared with 2") != std::string::npos);
}

TEST_CASE("duplicate axiom names are rejected") {
  std::string ax =
      "axiom same: forall X, S: holds(p(X), S) -> holds(p(X), S).\n";
  Error e = capture("decl p/1.\n" + ax + ax);
  CHECK(e.kind() == Error::Kind::Validation);
  CHECK(e.line() == 3);
  CHECK(std::string(e.what()).find("duplicate axiom name 'same'") !=
        std::string::npos);
}

TEST_CASE("duplicate query names are rejected") {
  Error e = capture(
      "decl p/1.\n"
      "query q: holds(p(X), S).\n"
      "query q: holds(p(a), S).\n");
  CHECK(std::string(e.what()).find("duplicate query name 'q'") !=
        std::string::npos);
}

TEST_CASE("negation is restricted to holds literals") {
  Error e = capture(with_decls(
      "axiom bad: forall A, C, S: holds(auditor(A), S) & "
      "not occurs(audits(A, C), S) -> holds(auditor(A), S).\n"));
  CHECK(e.kind() == Error::Kind::Parse);
  CHECK(std::string(e.what()).find("negation applies to holds literals only") !=
        std::string::npos);
}

TEST_CASE("unquantified and misused variables are rejected") {
  Error free_var = capture(
      "decl p/1.\n"
      "axiom a1: forall X: holds(p(X), S) -> holds(p(X), S).\n");
  CHECK(std::string(free_var.what()).find("'S' is not quantified") !=
        std::string::npos);

  Error exist_in_body = capture(
      "decl p/1.\n"
      "decl q/1.\n"
      "axiom a2: forall X, S: holds(p(X), S) & holds(q(B), S) "
      "-> exists B: holds(q(B), S).\n");
  CHECK(std::string(exist_in_body.what())
            .find("existential variable 'B' may appear only in the head") !=
        std::string::npos);

  Error unused = capture(
      "decl p/1.\n"
      "axiom a3: forall X, S, Z: holds(p(X), S) -> holds(p(X), S).\n");
  CHECK(std::string(unused.what()).find("'Z' does not occur") !=
        std::string::npos);
}

TEST_CASE("range restriction: negated or head variables need a positive home") {
  Error head_only = capture(
      "decl p/1.\n"
      "decl q/1.\n"
      "axiom a1: forall X, Y, S: holds(p(X), S) -> holds(q(Y), S).\n");
  CHECK(std::string(head_only.what()).find("range restriction") !=
        std::string::npos);

  Error neg_only = capture(
      "decl p/1.\n"
      "decl q/1.\n"
      "axiom a2: forall X, Y, S: holds(p(X), S) & not holds(q(Y), S) "
      "-> holds(p(X), S).\n");
  CHECK(std::string(neg_only.what()).find("range restriction") !=
        std::string::npos);
}

TEST_CASE("kind mismatches are rejected") {
  Error holds_on_action = capture(
      "decl act/1 kind action.\n"
      "fact holds(act(a), s0).\n");
  CHECK(std::string(holds_on_action.what()).find("cannot appear in holds") !=
        std::string::npos);

  Error occurs_on_fluent = capture(
      "decl p/1.\n"
      "fact occurs(p(a), s0).\n");
  CHECK(std::string(occurs_on_fluent.what()).find("is not one") !=
        std::string::npos);

  Error do_on_fluent = capture(
      "decl p/1.\n"
      "fact holds(p(a), do(p(a), s0)).\n");
  CHECK(std::string(do_on_fluent.what()).find("action predicate") !=
        std::string::npos);
}

TEST_CASE("axiom heads must be declared fluents") {
  Error rigid_head = capture(
      "decl p/1.\n"
      "decl r/1 kind rigid.\n"
      "axiom a1: forall X, S: holds(p(X), S) -> holds(r(X), S).\n");
  CHECK(std::string(rigid_head.what()).find("must be fluent") !=
        std::string::npos);

  Error clips_head = capture(
      "decl act/1 kind action.\n"
      "decl p/1.\n"
      "axiom a2: forall X, S: holds(p(X), S) -> holds(clips(act(X), p, S), S).\n");
  CHECK(std::string(clips_head.what()).find("clips") != std::string::npos);
}

TEST_CASE("conflicting declarations across files are rejected") {
  SourceProgram a = parse_program_syntax("decl p/1.\n", "a.onto");
  SourceProgram b = parse_program_syntax("decl p/2.\n", "b.onto");
  CHECK_THROWS_AS(build_ontology({a, b}), Error);

  // identical re-declaration across files is fine
  SourceProgram c = parse_program_syntax("decl p/1.\n", "c.onto");
  CHECK_NOTHROW(build_ontology({a, c}));
}

TEST_CASE("fuzz: an injected illegal token is reported at its position") {
  std::string base = with_decls(
      "fact holds(accounting_standard(ifrs), sigma0).\n"
      "axiom a1: forall A, S: holds(auditor(A), S) -> "
      "holds(auditor(A), S).\n"
      "query q1: holds(auditor(A), S).\n");
  std::mt19937 rng(4242);
  std::vector<size_t> spots;
  for (size_t i = 0; i < base.size(); ++i) {
    if (base[i] == ' ' || base[i] == '\n') spots.push_back(i);
  }
  for (int round = 0; round < 120; ++round) {
    size_t at = spots[rng() % spots.size()];
    std::string mutated = base.substr(0, at) + "]" + base.substr(at);
    int line = 1;
    int col = 1;
    for (size_t i = 0; i < at; ++i) {
      if (mutated[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    try {
      parse_program(mutated, "fuzz.onto");
      FAIL("illegal token was accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == Error::Kind::Parse);
      CHECK(e.line() == line);
      CHECK(e.column() == col);
    }
  }
}

TEST_CASE("query lines for interactive use") {
  NamedQuery named = parse_query_line("cq expect unsat: holds(p(X), S).", "q0");
  CHECK(named.name == "cq");
  CHECK(named.expect == NamedQuery::Expect::Unsat);

  NamedQuery anon = parse_query_line("holds(p(X), S) & X = do(a, s0).", "q0");
  CHECK(anon.name == "q0");
  REQUIRE(anon.body.size() == 2);
  CHECK(anon.body[1].modality == Modality::Equality);

  NamedQuery named_plain = parse_query_line("mine: not holds(p(a), s0) & holds(p(b), s0).", "q0");
  CHECK(named_plain.name == "mine");
  CHECK(named_plain.body[0].negated);
}

TEST_CASE("query body validation catches unsafe negation") {
  Ontology onto = build_ontology({parse_program_syntax("decl p/1.\n")});
  auto body = parse_query_body("not holds(p(X), S).");
  CHECK_THROWS_AS(validate_query_body(onto, body), Error);
  auto safe = parse_query_body("holds(p(X), S) & not holds(p(X), s0).");
  CHECK_NOTHROW(validate_query_body(onto, safe));
}

TEST_CASE("terms and literals parse standalone for tool plumbing") {
  Term t = parse_term_text("f(a, g(b, c))");
  CHECK(t.args.size() == 2);
  CHECK_THROWS_AS(parse_term_text("sk_x(a)"), Error);
  CHECK_NOTHROW(parse_term_text("sk_x(a)", true));

  Literal l = parse_literal_text("holds(p(a), do(m(b), s0))");
  CHECK(l.modality == Modality::Holds);
  Term s = parse_sitterm_text("do(m(b), s0)");
  CHECK(s.symbol == "do");
}
