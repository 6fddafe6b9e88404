#include "theoria/cli.hpp"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "theoria/dsl.hpp"
#include "theoria/engine.hpp"
#include "theoria/error.hpp"
#include "theoria/library.hpp"
#include "theoria/store.hpp"

namespace theoria::cli {
namespace {

constexpr int kOk = 0;
constexpr int kExpectationFailed = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

int code_for(const Error& e) {
  return e.kind() == Error::Kind::Io ? kIo : kUsage;
}

// Styling is confined to real terminals; captured streams and pipes get
// plain bytes so output stays byte-deterministic.
struct Style {
  bool on = false;
  const char* green() const { return on ? "\x1b[32m" : ""; }
  const char* red() const { return on ? "\x1b[31m" : ""; }
  const char* reset() const { return on ? "\x1b[0m" : ""; }
};

Style style_for(const std::ostream& os) {
  int fd = -1;
  if (&os == &std::cout) fd = STDOUT_FILENO;
  if (&os == &std::cerr) fd = STDERR_FILENO;
  Style s;
  s.on = fd >= 0 && ::isatty(fd) != 0 &&
         std::getenv("THEORIA_NO_COLOR") == nullptr;
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Error::Kind::Io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) throw Error(Error::Kind::Io, "cannot read '" + path + "'");
  return ss.str();
}

std::string file_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<dsl::SourceProgram> parse_files(
    const std::vector<std::string>& paths) {
  std::vector<dsl::SourceProgram> out;
  out.reserve(paths.size());
  for (const auto& p : paths) {
    out.push_back(dsl::parse_program_syntax(read_file(p), p));
  }
  return out;
}

// Everything needed to stand up a fact store: programs, an optional built
// scenario cell, and optional CSV ingestion.
struct StoreOptions {
  std::vector<std::string> programs;
  std::string standard;
  std::string orientation;
  std::string preference = "opportunistic";
  std::vector<std::string> facts_files;
  std::vector<std::string> map_files;
  std::string situation;
};

bool wants_scenario(const StoreOptions& o) {
  return !o.standard.empty() || !o.orientation.empty();
}

Ontology load_ontology(const StoreOptions& o) {
  std::vector<dsl::SourceProgram> programs;
  if (wants_scenario(o)) {
    programs.push_back(
        dsl::parse_program_syntax(builtin_text("bdi"), "<builtin:bdi>"));
    programs.push_back(dsl::parse_program_syntax(builtin_text("auditor"),
                                                 "<builtin:auditor>"));
  }
  for (auto& p : parse_files(o.programs)) programs.push_back(std::move(p));
  return dsl::build_ontology(programs);
}

void ingest(FactStore& store, const StoreOptions& o) {
  if (o.facts_files.empty()) return;
  std::vector<IngestionMapping> mappings;
  for (const auto& m : o.map_files) {
    auto parsed = parse_mapping_text(read_file(m), m);
    mappings.insert(mappings.end(), parsed.begin(), parsed.end());
  }
  if (mappings.empty()) {
    throw Error(Error::Kind::Validation,
                "--facts needs --map with at least one mapping line");
  }
  for (const auto& f : o.facts_files) {
    Csv csv = parse_csv(read_file(f), f);
    std::string stem = file_stem(f);
    bool matched = false;
    for (IngestionMapping m : mappings) {
      if (m.table != stem) continue;
      matched = true;
      if (!m.situation_column) {
        if (o.situation.empty()) {
          throw Error(Error::Kind::Validation,
                      "mapping for table '" + stem +
                          "' has no situation column; pass --situation");
        }
        m.default_situation = o.situation;
      }
      ingest_table(store, csv, m);
    }
    if (!matched) {
      throw Error(Error::Kind::Validation,
                  "no mapping for table '" + stem + "' (from '" + f + "')");
    }
  }
}

FactStore build_store(const StoreOptions& o) {
  Ontology onto = load_ontology(o);
  std::optional<FactStore> store;
  if (wants_scenario(o)) {
    if (o.standard.empty() || o.orientation.empty()) {
      throw Error(Error::Kind::Validation,
                  "--standard and --auditor must be given together");
    }
    Scenario cell;
    cell.name = o.standard + "_x_" + o.orientation;
    cell.standard_type = o.standard;
    cell.auditor_orientation = o.orientation;
    cell.client_preference = o.preference;
    store.emplace(build_scenario(cell, std::move(onto)));
  } else {
    store.emplace(std::move(onto));
  }
  if (!o.situation.empty() && !store->has_situation(o.situation)) {
    store->add_base_situation(o.situation);
  }
  for (const Literal& f : store->ontology().ground_facts()) {
    store->materialize(f);
  }
  ingest(*store, o);
  return std::move(*store);
}

std::string answer_line(const Answer& a) {
  std::string s;
  if (a.bindings.empty()) {
    s = "sat";
  } else {
    bool first = true;
    for (const auto& [var, term] : a.bindings.bindings()) {
      if (!first) s += ", ";
      s += var + " = " + term.text();
      first = false;
    }
  }
  if (!a.situation.empty()) s += "  @ " + a.situation;
  return s;
}

void print_proof(std::ostream& out, const ProofNode& n, int depth) {
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ')
      << n.conclusion.text() << "  [" << n.rule << "]\n";
  for (const ProofNode& p : n.premises) print_proof(out, p, depth + 1);
}

// Proofs accompanying one answer: every positive holds/occurs body literal
// under the answer's bindings.
std::vector<ProofNode> prove_body(FactStore& store,
                                  const std::vector<Literal>& body,
                                  const Answer& a) {
  std::vector<ProofNode> out;
  for (const Literal& lit : body) {
    if (lit.negated || lit.modality == Modality::Equality) continue;
    Literal g = a.bindings.apply(lit);
    std::string sit = store.resolve_sitterm(g.situation, false);
    if (auto p = prove(store, g, sit)) out.push_back(std::move(*p));
  }
  return out;
}

int exit_for_expect(const std::string& expect, bool sat) {
  if (expect.empty()) return kOk;
  if (expect == "sat") return sat ? kOk : kExpectationFailed;
  return sat ? kExpectationFailed : kOk;
}

const char* expect_text(NamedQuery::Expect e) {
  switch (e) {
    case NamedQuery::Expect::Sat: return "sat";
    case NamedQuery::Expect::Unsat: return "unsat";
    case NamedQuery::Expect::None: return "none";
  }
  return "none";
}

// -- subcommands -----------------------------------------------------------

int cmd_check(const std::vector<std::string>& paths, std::ostream& out) {
  auto programs = parse_files(paths);
  Ontology onto = dsl::build_ontology(programs);
  compile(onto);
  out << "ok: declarations=" << onto.declarations().size()
      << " axioms=" << onto.axioms().size()
      << " facts=" << onto.ground_facts().size()
      << " queries=" << onto.queries().size() << "\n";
  return kOk;
}

struct QueryArgs {
  StoreOptions store;
  std::string text;
  std::string expect;
  bool json = false;
  bool proofs = false;
};

int cmd_query(const QueryArgs& a, std::ostream& out) {
  std::vector<Literal> body = dsl::parse_query_body(a.text, "<query>");
  FactStore store = build_store(a.store);
  dsl::validate_query_body(store.ontology(), body);
  std::vector<Answer> answers = query(store, body);

  std::vector<std::vector<ProofNode>> proofs;
  if (a.proofs) {
    proofs.reserve(answers.size());
    for (const Answer& ans : answers) {
      proofs.push_back(prove_body(store, body, ans));
    }
  }

  if (a.json) {
    nlohmann::json j = answers_to_json(answers);
    if (a.proofs) {
      for (std::size_t i = 0; i < answers.size(); ++i) {
        nlohmann::json arr = nlohmann::json::array();
        for (const ProofNode& p : proofs[i]) arr.push_back(proof_to_json(p));
        j["answers"][i]["proofs"] = std::move(arr);
      }
    }
    out << j.dump(2) << "\n";
  } else {
    if (answers.empty()) out << "no answers\n";
    for (std::size_t i = 0; i < answers.size(); ++i) {
      out << answer_line(answers[i]) << "\n";
      if (a.proofs) {
        for (const ProofNode& p : proofs[i]) print_proof(out, p, 1);
      }
    }
  }
  return exit_for_expect(a.expect, !answers.empty());
}

struct ScenarioArgs {
  bool all = false;
  std::string standard;
  std::string orientation;
  std::string preference = "opportunistic";
  bool json = false;
};

int cmd_scenario(const ScenarioArgs& a, std::ostream& out, const Style& st) {
  if (!a.all && (a.standard.empty() || a.orientation.empty())) {
    throw Error(Error::Kind::Validation,
                "pass --all, or both --standard and --auditor");
  }
  // run_design reports unbuildable cells as plain false, so flag values are
  // vetted here by building one probe cell.
  Scenario probe;
  probe.name = "probe";
  probe.standard_type = a.all ? "rules_based" : a.standard;
  probe.auditor_orientation = a.all ? "rules_oriented" : a.orientation;
  probe.client_preference = a.preference;
  build_scenario(probe);

  std::vector<DesignRow> rows = run_design(load_builtin("auditor"), a.preference);
  if (!a.all) {
    std::vector<DesignRow> keep;
    for (const DesignRow& r : rows) {
      if (r.scenario.standard_type == a.standard &&
          r.scenario.auditor_orientation == a.orientation) {
        keep.push_back(r);
      }
    }
    rows = std::move(keep);
  }

  if (a.json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const DesignRow& r : rows) {
      arr.push_back({{"standard", r.scenario.standard_type},
                     {"orientation", r.scenario.auditor_orientation},
                     {"preference", r.scenario.client_preference},
                     {"enforces_nonopportunistic", r.enforces_nonopportunistic}});
    }
    nlohmann::json j;
    j["design"] = std::move(arr);
    out << j.dump(2) << "\n";
  } else {
    out << std::left << std::setw(18) << "standard" << std::setw(22)
        << "orientation" << std::setw(18) << "preference"
        << "enforces_nonopportunistic\n";
    for (const DesignRow& r : rows) {
      out << std::left << std::setw(18) << r.scenario.standard_type
          << std::setw(22) << r.scenario.auditor_orientation << std::setw(18)
          << r.scenario.client_preference
          << (r.enforces_nonopportunistic ? st.green() : "")
          << (r.enforces_nonopportunistic ? "true" : "false") << st.reset()
          << "\n";
    }
  }
  return kOk;
}

int cmd_competency(const StoreOptions& o, bool json, std::ostream& out,
                   const Style& st) {
  FactStore store = build_store(o);
  CompetencyReport report = check_competency(store);

  if (json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const CompetencyEntry& e : report.entries) {
      arr.push_back({{"name", e.name},
                     {"expect", expect_text(e.expect)},
                     {"satisfied", e.satisfied},
                     {"answers", e.answer_count},
                     {"passed", e.passed},
                     {"error", e.error}});
    }
    nlohmann::json j;
    j["all_passed"] = report.all_passed();
    j["entries"] = std::move(arr);
    out << j.dump(2) << "\n";
  } else {
    std::size_t passed = 0;
    for (const CompetencyEntry& e : report.entries) {
      if (e.passed) {
        ++passed;
        out << st.green() << "pass" << st.reset();
      } else {
        out << st.red() << "fail" << st.reset();
      }
      out << "  " << e.name << "  expect=" << expect_text(e.expect)
          << "  answers=" << e.answer_count;
      if (!e.error.empty()) out << "  error=" << e.error;
      out << "\n";
    }
    out << "passed " << passed << "/" << report.entries.size() << "\n";
  }
  return report.all_passed() ? kOk : kExpectationFailed;
}

int cmd_export(std::vector<std::string> names, const std::string& dir,
               std::ostream& out) {
  if (names.empty()) names = {"bdi", "auditor"};
  for (const auto& n : names) {
    const std::string& text = builtin_text(n);
    std::filesystem::path p = std::filesystem::path(dir) / (n + ".onto");
    std::ofstream f(p, std::ios::binary);
    f << text;
    f.flush();
    if (!f) {
      throw Error(Error::Kind::Io, "cannot write '" + p.string() + "'");
    }
    out << "wrote " << p.string() << "\n";
  }
  return kOk;
}

// -- repl ------------------------------------------------------------------

constexpr const char* kReplHelp =
    "commands:\n"
    "  decl <name>/<arity> [kind ...] .   declare a predicate\n"
    "  axiom <name>: ... -> ... .         add an axiom\n"
    "  fact holds(...)|occurs(...) .      assert a ground base fact\n"
    "  query <body> .                     evaluate a conjunctive query\n"
    "  trace <literal> @ <situation>      print a proof tree\n"
    "  situations                         list situation ids\n"
    "  quit                               leave\n";

class Repl {
 public:
  Repl(std::vector<std::string> paths, std::istream& in, std::ostream& out,
       std::ostream& err)
      : in_(in), out_(out), err_(err) {
    interactive_ = (&in == &std::cin) && ::isatty(STDIN_FILENO) != 0;
    programs_ = parse_files(paths);
    session_.path = "<repl>";
    store_.emplace(rebuild());
  }

  int run() {
    if (interactive_) {
      out_ << "interactive session; 'help' lists commands\n";
    }
    std::string line;
    while (true) {
      if (interactive_) out_ << "theoria> " << std::flush;
      if (!std::getline(in_, line)) return kOk;
      std::string t = trim(line);
      if (t.empty() || t[0] == '%') continue;
      if (t == "quit" || t == "exit") return kOk;
      try {
        handle(t);
      } catch (const Error& e) {
        err_ << "error: " << e.what() << "\n";
      }
    }
  }

 private:
  FactStore rebuild() {
    std::vector<dsl::SourceProgram> all = programs_;
    all.push_back(session_);
    FactStore store(dsl::build_ontology(all));
    for (const Literal& f : store.ontology().ground_facts()) {
      store.materialize(f);
    }
    return store;
  }

  void handle(const std::string& t) {
    std::string first = t.substr(0, t.find_first_of(" \t"));
    if (t == "help") {
      out_ << kReplHelp;
    } else if (t == "situations") {
      for (const auto& id : store_->situation_ids()) out_ << id << "\n";
    } else if (first == "query") {
      run_query(trim(t.substr(5)));
    } else if (first == "trace") {
      run_trace(trim(t.substr(5)));
    } else if (first == "decl" || first == "axiom" || first == "fact") {
      add_items(t);
    } else {
      throw Error(Error::Kind::Validation,
                  "unknown command '" + first +
                      "' (decl, axiom, fact, query, trace, situations, quit)");
    }
  }

  static std::string dotted(std::string text) {
    if (text.empty() || text.back() != '.') text += " .";
    return text;
  }

  void add_items(const std::string& line) {
    dsl::SourceProgram parsed =
        dsl::parse_program_syntax(dotted(line), "<repl>");
    std::size_t added = parsed.items.size();
    for (auto& item : parsed.items) session_.items.push_back(std::move(item));
    try {
      store_.emplace(rebuild());
    } catch (...) {
      session_.items.resize(session_.items.size() - added);
      throw;
    }
    out_ << "ok\n";
  }

  void run_query(const std::string& text) {
    auto body = dsl::parse_query_body(dotted(text), "<repl>");
    dsl::validate_query_body(store_->ontology(), body);
    auto answers = query(*store_, body);
    if (answers.empty()) out_ << "no answers\n";
    for (const Answer& a : answers) out_ << answer_line(a) << "\n";
  }

  void run_trace(const std::string& text) {
    std::size_t at = text.rfind(" @ ");
    if (at == std::string::npos) {
      throw Error(Error::Kind::Validation,
                  "trace expects '<literal> @ <situation>'");
    }
    Literal goal = dsl::parse_literal_text(trim(text.substr(0, at)));
    std::string sit_text = trim(text.substr(at + 3));
    std::string sit =
        store_->has_situation(sit_text)
            ? sit_text
            : store_->resolve_sitterm(dsl::parse_sitterm_text(sit_text), false);
    if (auto p = prove(*store_, goal, sit)) {
      print_proof(out_, *p, 0);
    } else {
      out_ << "not derivable\n";
    }
  }

  std::istream& in_;
  std::ostream& out_;
  std::ostream& err_;
  bool interactive_ = false;
  std::vector<dsl::SourceProgram> programs_;
  dsl::SourceProgram session_;
  std::optional<FactStore> store_;
};

void add_store_flags(CLI::App* sub, StoreOptions& o) {
  sub->add_option("--standard", o.standard,
                  "standard type of a built scenario cell");
  sub->add_option("--auditor", o.orientation,
                  "auditor orientation of a built scenario cell");
  sub->add_option("--preference", o.preference,
                  "client preference of a built scenario cell")
      ->capture_default_str();
  sub->add_option("--facts", o.facts_files, "CSV fact table (repeatable)");
  sub->add_option("--map", o.map_files,
                  "table:predicate:col1,col2[:sitcol] mapping file "
                  "(repeatable)");
  sub->add_option("--situation", o.situation,
                  "default situation for ingested rows (created if absent)");
}

}  // namespace

int run_main(const std::vector<std::string>& args, std::istream& in,
             std::ostream& out, std::ostream& err) {
  Style st_out = style_for(out);
  Style st_err = style_for(err);

  CLI::App app{"situation-calculus ontology toolkit"};
  app.name("theoria");
  app.require_subcommand(1);

  auto* check = app.add_subcommand(
      "check", "parse and validate program files as one ontology");
  std::vector<std::string> check_paths;
  check->add_option("paths", check_paths, "program files")->required();

  auto* qry = app.add_subcommand(
      "query", "evaluate a conjunctive query against a populated model");
  QueryArgs qa;
  qry->add_option("query", qa.text, "query body, e.g. 'holds(p(X), S)'")
      ->required();
  qry->add_option("programs", qa.store.programs, "ontology program files");
  add_store_flags(qry, qa.store);
  qry->add_option("--expect", qa.expect, "fail the exit code unless sat/unsat")
      ->check(CLI::IsMember({"sat", "unsat"}));
  qry->add_flag("--json", qa.json, "emit JSON instead of one line per answer");
  qry->add_flag("--proofs", qa.proofs, "attach proof trees to each answer");

  auto* scen = app.add_subcommand(
      "scenario", "build manipulation cells and report the derived outcome");
  ScenarioArgs sa;
  scen->add_flag("--all", sa.all, "run the full standard x orientation design");
  scen->add_option("--standard", sa.standard, "standard type of one cell");
  scen->add_option("--auditor", sa.orientation, "auditor orientation of one cell");
  scen->add_option("--preference", sa.preference, "client preference")
      ->capture_default_str();
  scen->add_flag("--json", sa.json, "emit JSON instead of a table");

  auto* comp = app.add_subcommand(
      "competency", "run every named query bundled with the ontology");
  StoreOptions co;
  bool comp_json = false;
  comp->add_option("programs", co.programs, "ontology program files");
  add_store_flags(comp, co);
  comp->add_flag("--json", comp_json, "emit JSON instead of a line per query");

  auto* repl = app.add_subcommand("repl", "interactive session");
  std::vector<std::string> repl_paths;
  repl->add_option("programs", repl_paths, "ontology program files");

  auto* expo = app.add_subcommand(
      "export-builtin", "write bundled ontology files out verbatim");
  std::vector<std::string> expo_names;
  std::string expo_dir = ".";
  expo->add_option("names", expo_names, "bundle names (default: bdi auditor)");
  expo->add_option("--dir", expo_dir, "output directory")->capture_default_str();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (check->parsed()) return cmd_check(check_paths, out);
    if (qry->parsed()) return cmd_query(qa, out);
    if (scen->parsed()) return cmd_scenario(sa, out, st_out);
    if (comp->parsed()) return cmd_competency(co, comp_json, out, st_out);
    if (repl->parsed()) return Repl(repl_paths, in, out, err).run();
    if (expo->parsed()) return cmd_export(expo_names, expo_dir, out);
  } catch (const Error& e) {
    err << st_err.red() << "error: " << st_err.reset() << e.what() << "\n";
    return code_for(e);
  } catch (const std::exception& e) {
    err << st_err.red() << "error: " << st_err.reset() << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace theoria::cli
