#include "theoria/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "theoria/error.hpp"

namespace theoria::dsl {

namespace {

enum class TokKind {
  Ident,
  Variable,
  Integer,
  Dot,
  Colon,
  Comma,
  LParen,
  RParen,
  Amp,
  Arrow,
  Equals,
  Slash,
  End,
};

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

const char* tok_name(TokKind k) {
  switch (k) {
    case TokKind::Ident: return "identifier";
    case TokKind::Variable: return "variable";
    case TokKind::Integer: return "integer";
    case TokKind::Dot: return "'.'";
    case TokKind::Colon: return "':'";
    case TokKind::Comma: return "','";
    case TokKind::LParen: return "'('";
    case TokKind::RParen: return "')'";
    case TokKind::Amp: return "'&'";
    case TokKind::Arrow: return "'->'";
    case TokKind::Equals: return "'='";
    case TokKind::Slash: return "'/'";
    case TokKind::End: return "end of input";
  }
  return "token";
}

class Lexer {
 public:
  Lexer(const std::string& text, std::string path, bool allow_skolem)
      : text_(text), path_(std::move(path)), allow_skolem_(allow_skolem) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      Token t = next_token();
      out.push_back(t);
      if (t.kind == TokKind::End) break;
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, int line, int column) const {
    throw Error(Error::Kind::Parse, msg, path_, line, column);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '%') {
        while (pos_ < text_.size() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token next_token() {
    if (pos_ >= text_.size()) return {TokKind::End, "", line_, col_};
    int line = line_;
    int col = col_;
    char c = peek();

    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string word;
      while (pos_ < text_.size()) {
        char d = peek();
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
          word.push_back(advance());
        } else {
          break;
        }
      }
      if (std::isupper(static_cast<unsigned char>(c))) {
        if (!is_variable_name(word)) {
          fail("invalid variable name '" + word + "'", line, col);
        }
        return {TokKind::Variable, word, line, col};
      }
      if (word.rfind("sk_", 0) == 0) {
        if (!allow_skolem_) {
          fail("the 'sk_' prefix is reserved for generated symbols", line,
               col);
        }
        if (!is_skolem_symbol(word)) {
          fail("invalid identifier '" + word + "'", line, col);
        }
      } else if (!is_constant_symbol(word)) {
        fail("invalid identifier '" + word + "'", line, col);
      }
      return {TokKind::Ident, word, line, col};
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(peek()))) {
        digits.push_back(advance());
      }
      return {TokKind::Integer, digits, line, col};
    }

    advance();
    switch (c) {
      case '.': return {TokKind::Dot, ".", line, col};
      case ':': return {TokKind::Colon, ":", line, col};
      case ',': return {TokKind::Comma, ",", line, col};
      case '(': return {TokKind::LParen, "(", line, col};
      case ')': return {TokKind::RParen, ")", line, col};
      case '&': return {TokKind::Amp, "&", line, col};
      case '=': return {TokKind::Equals, "=", line, col};
      case '/': return {TokKind::Slash, "/", line, col};
      case '-':
        if (peek() == '>') {
          advance();
          return {TokKind::Arrow, "->", line, col};
        }
        fail("stray '-' (expected '->')", line, col);
      default: {
        std::string shown(1, c);
        if (!std::isprint(static_cast<unsigned char>(c))) shown = "?";
        fail("unexpected character '" + shown + "'", line, col);
      }
    }
  }

  const std::string& text_;
  std::string path_;
  bool allow_skolem_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string path)
      : tokens_(std::move(tokens)), path_(std::move(path)) {}

  SourceProgram program() {
    SourceProgram prog;
    prog.path = path_;
    while (!at(TokKind::End)) {
      prog.items.push_back(item());
    }
    return prog;
  }

  std::vector<Literal> bare_body() {
    std::vector<Literal> lits = body();
    expect(TokKind::Dot);
    expect(TokKind::End);
    return lits;
  }

  NamedQuery query_line(const std::string& fallback_name) {
    NamedQuery q;
    q.name = fallback_name;
    // Named form iff an identifier is followed by ':' or 'expect'.
    if (at(TokKind::Ident) && !is_keyword(cur().text) &&
        (peek_is(1, TokKind::Colon) || peek_word(1, "expect"))) {
      q.name = expect(TokKind::Ident).text;
      parse_expect_clause(q);
      expect(TokKind::Colon);
    }
    q.body = body();
    expect(TokKind::Dot);
    expect(TokKind::End);
    return q;
  }

  Term bare_term() {
    Term t = term();
    expect(TokKind::End);
    return t;
  }

  Term bare_sitterm() {
    Term t = sitterm();
    expect(TokKind::End);
    return t;
  }

  Literal bare_literal() {
    // canonical reparse also accepts ground equalities (`id = do(...)`);
    // the program grammar writes equalities with a variable lhs only
    Literal l;
    if (!at_word("not") &&
        !(at_word("holds") && peek_is(1, TokKind::LParen)) &&
        !(at_word("occurs") && peek_is(1, TokKind::LParen))) {
      Term lhs = sitterm();
      expect(TokKind::Equals);
      Term rhs = sitterm();
      l = Literal::equality(lhs, rhs);
    } else {
      l = literal();
    }
    expect(TokKind::End);
    return l;
  }

 private:
  static bool is_keyword(const std::string& w) {
    static const std::set<std::string> kws = {
        "decl", "axiom", "fact", "query", "holds", "occurs",
        "not",  "forall", "exists", "do", "kind", "expect"};
    return kws.count(w) > 0;
  }

  const Token& cur() const { return tokens_[pos_]; }

  bool at(TokKind k) const { return cur().kind == k; }

  bool at_word(const std::string& w) const {
    return cur().kind == TokKind::Ident && cur().text == w;
  }

  bool peek_is(size_t ahead, TokKind k) const {
    size_t i = pos_ + ahead;
    return i < tokens_.size() && tokens_[i].kind == k;
  }

  bool peek_word(size_t ahead, const std::string& w) const {
    size_t i = pos_ + ahead;
    return i < tokens_.size() && tokens_[i].kind == TokKind::Ident &&
           tokens_[i].text == w;
  }

  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const {
    throw Error(Error::Kind::Parse, msg, path_, t.line, t.column);
  }

  Token expect(TokKind k) {
    if (!at(k)) {
      fail_at(cur(), std::string("expected ") + tok_name(k) + ", found " +
                         describe(cur()));
    }
    return tokens_[pos_++];
  }

  Token expect_word(const std::string& w) {
    if (!at_word(w)) {
      fail_at(cur(), "expected '" + w + "', found " + describe(cur()));
    }
    return tokens_[pos_++];
  }

  static std::string describe(const Token& t) {
    if (t.kind == TokKind::Ident || t.kind == TokKind::Variable ||
        t.kind == TokKind::Integer) {
      return std::string("'") + t.text + "'";
    }
    return tok_name(t.kind);
  }

  SourceItem item() {
    const Token& t = cur();
    SourceItem out;
    out.line = t.line;
    out.column = t.column;
    if (at_word("decl")) {
      out.kind = SourceItem::Kind::Decl;
      out.decl = decl();
    } else if (at_word("axiom")) {
      out.kind = SourceItem::Kind::Axiom;
      out.axiom = axiom();
    } else if (at_word("fact")) {
      out.kind = SourceItem::Kind::Fact;
      out.fact = fact();
    } else if (at_word("query")) {
      out.kind = SourceItem::Kind::Query;
      out.query = query();
    } else {
      fail_at(t, "expected 'decl', 'axiom', 'fact', or 'query', found " +
                     describe(t));
    }
    return out;
  }

  Declaration decl() {
    expect_word("decl");
    Declaration d;
    d.predicate = expect(TokKind::Ident).text;
    expect(TokKind::Slash);
    Token arity = expect(TokKind::Integer);
    try {
      d.arity = std::stoi(arity.text);
    } catch (const std::exception&) {
      fail_at(arity, "arity out of range");
    }
    d.kind = PredicateKind::Fluent;
    if (at_word("kind")) {
      expect_word("kind");
      Token k = expect(TokKind::Ident);
      if (k.text == "fluent") {
        d.kind = PredicateKind::Fluent;
      } else if (k.text == "action") {
        d.kind = PredicateKind::Action;
      } else if (k.text == "rigid") {
        d.kind = PredicateKind::Rigid;
      } else {
        fail_at(k, "expected 'fluent', 'action', or 'rigid', found " +
                       describe(k));
      }
    }
    expect(TokKind::Dot);
    return d;
  }

  std::vector<std::string> varlist() {
    std::vector<std::string> vars;
    vars.push_back(expect(TokKind::Variable).text);
    while (at(TokKind::Comma)) {
      expect(TokKind::Comma);
      Token v = expect(TokKind::Variable);
      if (std::find(vars.begin(), vars.end(), v.text) != vars.end()) {
        fail_at(v, "duplicate variable '" + v.text + "' in quantifier");
      }
      vars.push_back(v.text);
    }
    return vars;
  }

  Axiom axiom() {
    expect_word("axiom");
    Axiom ax;
    ax.name = expect(TokKind::Ident).text;
    expect(TokKind::Colon);
    expect_word("forall");
    ax.universals = varlist();
    expect(TokKind::Colon);
    ax.body = body();
    expect(TokKind::Arrow);
    if (at_word("exists")) {
      expect_word("exists");
      ax.head_existentials = varlist();
      for (const auto& v : ax.head_existentials) {
        if (std::find(ax.universals.begin(), ax.universals.end(), v) !=
            ax.universals.end()) {
          fail_at(cur(), "variable '" + v + "' is both universal and existential");
        }
      }
      expect(TokKind::Colon);
    }
    Token head_tok = cur();
    Literal head = literal();
    if (head.negated || head.modality != Modality::Holds) {
      fail_at(head_tok, "axiom head must be a positive holds literal");
    }
    ax.head = head;
    expect(TokKind::Dot);
    return ax;
  }

  Literal fact() {
    expect_word("fact");
    Token start = cur();
    in_fact_ = true;
    Literal l = literal();
    in_fact_ = false;
    if (l.negated || l.modality == Modality::Equality) {
      fail_at(start, "a fact must be a positive holds or occurs literal");
    }
    expect(TokKind::Dot);
    return l;
  }

  NamedQuery query() {
    expect_word("query");
    NamedQuery q;
    q.name = expect(TokKind::Ident).text;
    parse_expect_clause(q);
    expect(TokKind::Colon);
    q.body = body();
    expect(TokKind::Dot);
    return q;
  }

  void parse_expect_clause(NamedQuery& q) {
    q.expect = NamedQuery::Expect::None;
    if (at_word("expect")) {
      expect_word("expect");
      Token e = expect(TokKind::Ident);
      if (e.text == "sat") {
        q.expect = NamedQuery::Expect::Sat;
      } else if (e.text == "unsat") {
        q.expect = NamedQuery::Expect::Unsat;
      } else {
        fail_at(e, "expected 'sat' or 'unsat', found " + describe(e));
      }
    }
  }

  std::vector<Literal> body() {
    std::vector<Literal> lits;
    lits.push_back(literal());
    while (at(TokKind::Amp)) {
      expect(TokKind::Amp);
      lits.push_back(literal());
    }
    return lits;
  }

  Literal literal() {
    if (at_word("not")) {
      Token t = expect_word("not");
      Literal inner = positive_literal();
      if (inner.modality != Modality::Holds) {
        fail_at(t, "negation applies to holds literals only");
      }
      inner.negated = true;
      return inner;
    }
    return positive_literal();
  }

  Literal positive_literal() {
    if (at_word("holds") && peek_is(1, TokKind::LParen)) {
      expect_word("holds");
      expect(TokKind::LParen);
      Atom a = atom();
      expect(TokKind::Comma);
      Term s = sitterm();
      expect(TokKind::RParen);
      return Literal::holds(a, s);
    }
    if (at_word("occurs") && peek_is(1, TokKind::LParen)) {
      expect_word("occurs");
      expect(TokKind::LParen);
      Atom a = atom();
      expect(TokKind::Comma);
      Term s = sitterm();
      expect(TokKind::RParen);
      return Literal::occurs(a, s);
    }
    if (at(TokKind::Variable)) {
      Token v = expect(TokKind::Variable);
      expect(TokKind::Equals);
      Term rhs = sitterm();
      return Literal::equality(Term::variable(v.text), rhs);
    }
    fail_at(cur(),
            "expected 'holds', 'occurs', 'not', or a situation equality, "
            "found " +
                describe(cur()));
  }

  Atom atom() {
    Token name = expect(TokKind::Ident);
    Atom a;
    a.predicate = name.text;
    if (at(TokKind::LParen)) {
      expect(TokKind::LParen);
      a.args.push_back(term());
      while (at(TokKind::Comma)) {
        expect(TokKind::Comma);
        a.args.push_back(term());
      }
      expect(TokKind::RParen);
    }
    return a;
  }

  Term term() {
    if (at(TokKind::Variable)) {
      Token v = expect(TokKind::Variable);
      if (in_fact_) {
        fail_at(v, "variables are not allowed in facts");
      }
      return Term::variable(v.text);
    }
    Token name = expect(TokKind::Ident);
    if (name.text == "do") {
      fail_at(name, "'do' is reserved for situation terms");
    }
    if (!at(TokKind::LParen)) {
      return Term::constant(name.text);
    }
    expect(TokKind::LParen);
    std::vector<Term> args;
    args.push_back(term());
    while (at(TokKind::Comma)) {
      expect(TokKind::Comma);
      args.push_back(term());
    }
    expect(TokKind::RParen);
    return Term::compound(name.text, std::move(args));
  }

  Term sitterm() {
    if (at(TokKind::Variable)) {
      Token v = expect(TokKind::Variable);
      if (in_fact_) {
        fail_at(v, "variables are not allowed in facts");
      }
      return Term::variable(v.text);
    }
    Token name = expect(TokKind::Ident);
    if (name.text == "do") {
      expect(TokKind::LParen);
      Atom action = atom();
      expect(TokKind::Comma);
      Term parent = sitterm();
      expect(TokKind::RParen);
      return Term::compound("do", {atom_to_term(action), parent});
    }
    if (at(TokKind::LParen)) {
      fail_at(name, "a situation term is a name, a variable, or do(...)");
    }
    return Term::constant(name.text);
  }

  std::vector<Token> tokens_;
  std::string path_;
  size_t pos_ = 0;
  bool in_fact_ = false;
};

Parser make_parser(const std::string& text, const std::string& path,
                   bool allow_skolem) {
  Lexer lex(text, path, allow_skolem);
  return Parser(lex.run(), path);
}

// ---- validation ----------------------------------------------------------

void collect_literal_vars(const Literal& l, std::set<std::string>& out) {
  std::vector<std::string> vs;
  l.collect_variables(vs);
  out.insert(vs.begin(), vs.end());
}

class Validator {
 public:
  explicit Validator(Ontology& onto) : onto_(onto) {}

  void check_and_add(const SourceProgram& prog) {
    for (const auto& item : prog.items) {
      path_ = prog.path;
      line_ = item.line;
      column_ = item.column;
      try {
        switch (item.kind) {
          case SourceItem::Kind::Decl:
            break;  // handled in the declaration pass
          case SourceItem::Kind::Axiom:
            check_axiom(item.axiom);
            onto_.add_axiom(item.axiom);
            break;
          case SourceItem::Kind::Fact:
            check_fact(item.fact);
            onto_.add_ground_fact(item.fact);
            break;
          case SourceItem::Kind::Query:
            check_query(item.query);
            onto_.add_query(item.query);
            break;
        }
      } catch (const Error& e) {
        if (e.has_location()) throw;
        throw Error(e.kind(), e.what(), path_, line_, column_);
      }
    }
  }

  void check_body_literal(const Literal& l) {
    if (l.modality == Modality::Equality) {
      check_sitterm(l.rhs);
      if (l.lhs.kind != TermKind::Variable) {
        fail("the left side of a situation equality must be a variable");
      }
      return;
    }
    check_atom(l.atom, l.modality);
    check_sitterm(l.situation);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Error::Kind::Validation, msg, path_, line_, column_);
  }

  const Declaration& lookup(const std::string& predicate) const {
    const Declaration* d = onto_.find_declaration(predicate);
    if (d == nullptr) {
      fail("undeclared predicate '" + predicate + "'");
    }
    return *d;
  }

  void check_term(const Term& t) {
    if (t.kind != TermKind::Compound) return;
    if (t.symbol == "do") {
      fail("'do' terms may appear only in situation position");
    }
    const Declaration* d = onto_.find_declaration(t.symbol);
    if (d != nullptr && d->arity != t.args.size()) {
      fail("'" + t.symbol + "' used with " +
           std::to_string(t.args.size()) + " arguments but declared with " +
           std::to_string(d->arity));
    }
    for (const auto& a : t.args) check_term(a);
  }

  void check_atom(const Atom& a, Modality modality) {
    const Declaration& d = lookup(a.predicate);
    if (d.arity != a.args.size()) {
      fail("'" + a.predicate + "' used with " +
           std::to_string(a.args.size()) + " arguments but declared with " +
           std::to_string(d.arity));
    }
    if (modality == Modality::Holds &&
        d.kind == PredicateKind::Action) {
      fail("action predicate '" + a.predicate + "' cannot appear in holds");
    }
    if (modality == Modality::Occurs && d.kind != PredicateKind::Action) {
      fail("occurs expects an action predicate, and '" + a.predicate +
           "' is not one");
    }
    for (const auto& t : a.args) check_term(t);
  }

  void check_sitterm(const Term& s) {
    if (s.kind == TermKind::Variable) return;
    if (s.kind == TermKind::Constant) return;
    if (s.symbol == "do" && s.args.size() == 2) {
      std::optional<Atom> action_opt = term_to_atom(s.args[0]);
      if (!action_opt) {
        fail("malformed action inside do(...)");
      }
      const Atom& action = *action_opt;
      const Declaration& d = lookup(action.predicate);
      if (d.kind != PredicateKind::Action) {
        fail("do(...) expects an action predicate, and '" + action.predicate +
             "' is not one");
      }
      if (d.arity != action.args.size()) {
        fail("'" + action.predicate + "' used with " +
             std::to_string(action.args.size()) +
             " arguments but declared with " + std::to_string(d.arity));
      }
      for (const auto& t : action.args) check_term(t);
      check_sitterm(s.args[1]);
      return;
    }
    fail("malformed situation term");
  }

  void check_axiom(const Axiom& ax) {
    for (const auto& l : ax.body) check_body_literal(l);
    check_atom(ax.head.atom, Modality::Holds);
    check_sitterm(ax.head.situation);
    const Declaration& head_decl = lookup(ax.head.atom.predicate);
    if (head_decl.kind != PredicateKind::Fluent) {
      fail("axiom heads must be fluent predicates, and '" +
           ax.head.atom.predicate + "' is not one");
    }
    if (ax.head.atom.predicate == "clips") {
      fail("'clips' may not appear in axiom heads");
    }

    std::set<std::string> universals(ax.universals.begin(),
                                     ax.universals.end());
    std::set<std::string> existentials(ax.head_existentials.begin(),
                                       ax.head_existentials.end());

    std::set<std::string> body_vars;
    std::set<std::string> positive_vars;
    for (const auto& l : ax.body) {
      collect_literal_vars(l, body_vars);
      if (!l.negated && l.modality != Modality::Equality) {
        collect_literal_vars(l, positive_vars);
      }
    }
    std::set<std::string> head_vars;
    collect_literal_vars(ax.head, head_vars);

    for (const auto& v : body_vars) {
      if (!universals.count(v)) {
        if (existentials.count(v)) {
          fail("existential variable '" + v + "' may appear only in the head");
        }
        fail("variable '" + v + "' is not quantified");
      }
    }
    for (const auto& v : head_vars) {
      if (!universals.count(v) && !existentials.count(v)) {
        fail("variable '" + v + "' is not quantified");
      }
    }
    for (const auto& v : existentials) {
      if (!head_vars.count(v)) {
        fail("existential variable '" + v + "' does not occur in the head");
      }
    }
    std::vector<std::string> head_sit_vars;
    ax.head.situation.collect_variables(head_sit_vars);
    for (const auto& v : head_sit_vars) {
      if (existentials.count(v)) {
        fail("the head situation cannot be existential");
      }
    }

    for (const auto& v : ax.universals) {
      if (!body_vars.count(v) && !head_vars.count(v)) {
        fail("universal variable '" + v + "' does not occur in the axiom");
      }
      bool needs_positive = head_vars.count(v) > 0;
      if (!needs_positive) {
        for (const auto& l : ax.body) {
          if (!l.negated && l.modality != Modality::Equality) continue;
          std::set<std::string> vs;
          collect_literal_vars(l, vs);
          if (vs.count(v)) {
            needs_positive = true;
            break;
          }
        }
      }
      if (needs_positive && !positive_vars.count(v)) {
        fail("range restriction violated: variable '" + v +
             "' needs a positive body occurrence");
      }
    }
  }

  void check_fact(const Literal& fact) {
    check_atom(fact.atom, fact.modality);
    check_sitterm(fact.situation);
    // groundness is enforced by the parser; keep a backstop for
    // programmatically built items
    std::set<std::string> vars;
    collect_literal_vars(fact, vars);
    if (!vars.empty()) {
      fail("facts must be ground");
    }
  }

  void check_query(const NamedQuery& q) { check_query_body(q.body); }

 public:
  void check_query_body(const std::vector<Literal>& body) {
    if (body.empty()) {
      fail("a query needs at least one literal");
    }
    std::set<std::string> bindable;
    for (const auto& l : body) {
      check_body_literal(l);
      if (!l.negated) collect_literal_vars(l, bindable);
    }
    for (const auto& l : body) {
      if (!l.negated) continue;
      std::set<std::string> vs;
      collect_literal_vars(l, vs);
      for (const auto& v : vs) {
        if (!bindable.count(v)) {
          fail("unsafe query: variable '" + v +
               "' appears only under negation");
        }
      }
    }
  }

 private:
  Ontology& onto_;
  std::string path_;
  int line_ = 0;
  int column_ = 0;
};

}  // namespace

SourceProgram parse_program_syntax(const std::string& text,
                                   const std::string& path) {
  Parser p = make_parser(text, path, false);
  return p.program();
}

SourceProgram parse_program(const std::string& text, const std::string& path) {
  SourceProgram prog = parse_program_syntax(text, path);
  build_ontology({prog});
  return prog;
}

Ontology build_ontology(const std::vector<SourceProgram>& programs) {
  Ontology onto;
  // Pass 1: declarations from every program, so use before declaration
  // across files is fine.
  for (const auto& prog : programs) {
    for (const auto& item : prog.items) {
      if (item.kind != SourceItem::Kind::Decl) continue;
      try {
        onto.declare(item.decl);
      } catch (const Error& e) {
        if (e.has_location()) throw;
        throw Error(e.kind(), e.what(), prog.path, item.line, item.column);
      }
    }
  }
  // Pass 2: everything else, in order.
  Validator v(onto);
  for (const auto& prog : programs) {
    v.check_and_add(prog);
  }
  return onto;
}

std::string print_item(const SourceItem& item) {
  std::ostringstream os;
  switch (item.kind) {
    case SourceItem::Kind::Decl: {
      const char* kind = "fluent";
      if (item.decl.kind == PredicateKind::Action) kind = "action";
      if (item.decl.kind == PredicateKind::Rigid) kind = "rigid";
      os << "decl " << item.decl.predicate << "/" << item.decl.arity
         << " kind " << kind << ".";
      break;
    }
    case SourceItem::Kind::Axiom:
      os << item.axiom.text();
      break;
    case SourceItem::Kind::Fact:
      os << "fact " << item.fact.text() << ".";
      break;
    case SourceItem::Kind::Query: {
      os << "query " << item.query.name;
      if (item.query.expect == NamedQuery::Expect::Sat) os << " expect sat";
      if (item.query.expect == NamedQuery::Expect::Unsat) os << " expect unsat";
      os << ": ";
      for (size_t i = 0; i < item.query.body.size(); ++i) {
        if (i > 0) os << " & ";
        os << item.query.body[i].text();
      }
      os << ".";
      break;
    }
  }
  return os.str();
}

std::string print_program(const SourceProgram& program) {
  std::ostringstream os;
  for (const auto& item : program.items) {
    os << print_item(item) << "\n";
  }
  return os.str();
}

std::vector<Literal> parse_query_body(const std::string& text,
                                      const std::string& path) {
  Parser p = make_parser(text, path, false);
  return p.bare_body();
}

Term parse_term_text(const std::string& text, bool allow_skolem) {
  Parser p = make_parser(text, "<term>", allow_skolem);
  return p.bare_term();
}

Literal parse_literal_text(const std::string& text, bool allow_skolem) {
  Parser p = make_parser(text, "<literal>", allow_skolem);
  return p.bare_literal();
}

Term parse_sitterm_text(const std::string& text) {
  Parser p = make_parser(text, "<situation>", false);
  return p.bare_sitterm();
}

NamedQuery parse_query_line(const std::string& text,
                            const std::string& fallback_name) {
  Parser p = make_parser(text, "<repl>", false);
  return p.query_line(fallback_name);
}

void validate_query_body(const Ontology& ontology,
                         const std::vector<Literal>& body) {
  // read-only use: check_query_body never adds to the ontology
  Validator v(const_cast<Ontology&>(ontology));
  v.check_query_body(body);
}

}  // namespace theoria::dsl
