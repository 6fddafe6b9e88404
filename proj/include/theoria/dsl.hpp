#ifndef THEORIA_DSL_HPP
#define THEORIA_DSL_HPP

#include <string>
#include <vector>

#include "theoria/kernel.hpp"

namespace theoria::dsl {

// One parsed top-level item. Exactly one payload is meaningful per kind;
// source position is kept for diagnostics and excluded from equality.
struct SourceItem {
  enum class Kind { Decl, Axiom, Fact, Query };

  Kind kind = Kind::Decl;
  Declaration decl;
  Axiom axiom;
  Literal fact;
  NamedQuery query;
  int line = 0;
  int column = 0;

  friend bool operator==(const SourceItem& a, const SourceItem& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::Decl: return a.decl == b.decl;
      case Kind::Axiom: return a.axiom == b.axiom;
      case Kind::Fact: return a.fact == b.fact;
      case Kind::Query: return a.query == b.query;
    }
    return false;
  }
};

struct SourceProgram {
  std::string path;
  std::vector<SourceItem> items;

  friend bool operator==(const SourceProgram& a, const SourceProgram& b) {
    return a.items == b.items;
  }
};

// Syntax-only pass: lexical rules, grammar, ground facts, the reserved
// sk_ prefix. Declaration-level checking happens in build_ontology.
SourceProgram parse_program_syntax(const std::string& text,
                                   const std::string& path = "<input>");

// Full per-program contract: syntax plus validation of the program against
// its own declarations. Throws theoria::Error with file/line/column.
SourceProgram parse_program(const std::string& text,
                            const std::string& path = "<input>");

// Merges programs (in order) into one validated ontology: two-pass
// declaration collection, then per-item checks, so declaration order
// across files does not matter.
Ontology build_ontology(const std::vector<SourceProgram>& programs);

// Canonical text; parse(print(parse(p))) == parse(p).
std::string print_program(const SourceProgram& program);
std::string print_item(const SourceItem& item);

// Helpers for query text, REPL lines, and JSON round-trips. These are
// syntax-only; validate against an ontology separately.
std::vector<Literal> parse_query_body(const std::string& text,
                                      const std::string& path = "<query>");
Term parse_term_text(const std::string& text, bool allow_skolem = false);
Literal parse_literal_text(const std::string& text, bool allow_skolem = false);
Term parse_sitterm_text(const std::string& text);

// `NAME [expect sat|unsat] : body .` or a bare `body .`; anonymous queries
// get the provided fallback name.
NamedQuery parse_query_line(const std::string& text,
                            const std::string& fallback_name);

// Validation of a query body against an ontology (declarations, kinds,
// negation safety). Throws theoria::Error.
void validate_query_body(const Ontology& ontology,
                         const std::vector<Literal>& body);

}  // namespace theoria::dsl

#endif  // THEORIA_DSL_HPP
