#include "theoria/store.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "theoria/error.hpp"

namespace theoria {

namespace {

[[noreturn]] void store_error(const std::string& msg) {
  throw Error(Error::Kind::Store, msg);
}

}  // namespace

FactStore::FactStore(Ontology ontology) : ontology_(std::move(ontology)) {
  for (const auto& fact : ontology_.ground_facts()) {
    materialize(fact);
  }
}

bool FactStore::has_situation(const std::string& id) const {
  return situations_.count(id) > 0;
}

const Situation& FactStore::situation(const std::string& id) const {
  auto it = situations_.find(id);
  if (it == situations_.end()) {
    store_error("unknown situation '" + id + "'");
  }
  return it->second;
}

std::vector<std::string> FactStore::situation_ids() const {
  std::vector<std::string> ids;
  ids.reserve(situations_.size());
  for (const auto& [id, s] : situations_) ids.push_back(id);
  return ids;  // map order: already sorted
}

std::string FactStore::add_base_situation(const std::string& name) {
  auto it = situations_.find(name);
  if (it != situations_.end()) {
    if (!it->second.is_base) {
      store_error("situation '" + name + "' already exists as a successor");
    }
    return name;
  }
  Situation s = Situation::base(name);
  situations_.emplace(s.id, s);
  ++version_;
  return name;
}

std::string FactStore::successor(const Atom& action,
                                 const std::string& parent_id) {
  if (!action.is_ground()) {
    store_error("successor action must be ground: " + action.text());
  }
  const Declaration* d = ontology_.find_declaration(action.predicate);
  if (d == nullptr) {
    store_error("undeclared predicate '" + action.predicate + "'");
  }
  if (d->kind != PredicateKind::Action) {
    store_error("'" + action.predicate + "' is not an action predicate");
  }
  if (d->arity != action.args.size()) {
    store_error("'" + action.predicate + "' used with " +
                std::to_string(action.args.size()) +
                " arguments but declared with " + std::to_string(d->arity));
  }
  situation(parent_id);  // existence check
  std::string id = canonical_situation_id(action, parent_id);
  auto it = situations_.find(id);
  if (it != situations_.end()) {
    const Situation& s = it->second;
    // the id encoding flattens underscores, so structurally different
    // situations can collide textually; refuse rather than conflate
    if (s.is_base || !(s.action == action) || s.parent_id != parent_id) {
      store_error("situation id collision on '" + id + "'");
    }
  } else {
    Situation s = Situation::successor(action, situation(parent_id));
    situations_.emplace(s.id, s);
    invalidate(parent_id);
    ++version_;
  }
  Literal occ = Literal::occurs(action, Term::constant(parent_id));
  if (base_[parent_id].insert(occ).second) {
    invalidate(parent_id);
    ++version_;
  }
  return id;
}

std::string FactStore::resolve_sitterm(const Term& sitterm, bool create) {
  if (!sitterm.is_ground()) {
    store_error("situation term must be ground: " + sitterm.text());
  }
  if (sitterm.is_constant()) {
    if (has_situation(sitterm.symbol)) return sitterm.symbol;
    if (!create) {
      store_error("unknown situation '" + sitterm.symbol + "'");
    }
    return add_base_situation(sitterm.symbol);
  }
  if (sitterm.is_compound() && sitterm.symbol == "do" &&
      sitterm.args.size() == 2) {
    std::optional<Atom> action = term_to_atom(sitterm.args[0]);
    if (!action) {
      store_error("malformed action in situation term: " + sitterm.text());
    }
    std::string parent = resolve_sitterm(sitterm.args[1], create);
    if (!create) {
      std::string id = canonical_situation_id(*action, parent);
      situation(id);  // existence check
      return id;
    }
    return successor(*action, parent);
  }
  store_error("malformed situation term: " + sitterm.text());
}

bool FactStore::is_descendant(const std::string& id,
                              const std::string& ancestor) const {
  std::string cur = id;
  while (true) {
    const Situation& s = situation(cur);
    if (s.is_base) return false;
    if (s.parent_id == ancestor) return true;
    cur = s.parent_id;
  }
}

void FactStore::check_fact_shape(const Literal& lit) const {
  if (lit.negated || lit.modality == Modality::Equality) {
    store_error("only positive holds/occurs facts can be stored");
  }
  if (!lit.atom.is_ground()) {
    store_error("fact must be ground: " + lit.atom.text());
  }
  for (const Term& arg : lit.atom.args) {
    if (arg.mentions_skolem()) {
      store_error("the 'sk_' prefix is reserved for derived witnesses: " +
                  arg.text());
    }
  }
  const Declaration* d = ontology_.find_declaration(lit.atom.predicate);
  if (d == nullptr) {
    store_error("undeclared predicate '" + lit.atom.predicate + "'");
  }
  if (d->arity != lit.atom.args.size()) {
    store_error("'" + lit.atom.predicate + "' used with " +
                std::to_string(lit.atom.args.size()) +
                " arguments but declared with " + std::to_string(d->arity));
  }
  if (lit.modality == Modality::Holds && d->kind == PredicateKind::Action) {
    store_error("action predicate '" + lit.atom.predicate +
                "' cannot appear in holds");
  }
  if (lit.modality == Modality::Occurs && d->kind != PredicateKind::Action) {
    store_error("occurs expects an action predicate, and '" +
                lit.atom.predicate + "' is not one");
  }
}

void FactStore::assert_fact(const Literal& lit, const std::string& sit_id) {
  check_fact_shape(lit);
  situation(sit_id);  // existence check
  if (lit.modality == Modality::Occurs) {
    successor(lit.atom, sit_id);
    return;
  }
  const Declaration& d = ontology_.declaration(lit.atom.predicate);
  if (d.kind == PredicateKind::Rigid) {
    if (rigid_.insert(lit.atom).second) {
      invalidate_all();
      ++version_;
    }
    return;
  }
  Literal stored = Literal::holds(lit.atom, Term::constant(sit_id));
  if (base_[sit_id].insert(stored).second) {
    invalidate(sit_id);
    ++version_;
  }
}

void FactStore::materialize(const Literal& ground_fact) {
  std::string sit = resolve_sitterm(ground_fact.situation, true);
  assert_fact(ground_fact, sit);
}

const std::set<Literal>& FactStore::base_facts(const std::string& sit_id) const {
  situation(sit_id);
  static const std::set<Literal> empty;
  auto it = base_.find(sit_id);
  return it == base_.end() ? empty : it->second;
}

std::set<Literal> FactStore::facts_in(const std::string& sit_id) const {
  situation(sit_id);
  std::set<Literal> out;
  if (auto it = base_.find(sit_id); it != base_.end()) {
    out.insert(it->second.begin(), it->second.end());
  }
  if (auto it = derived_.find(sit_id); it != derived_.end()) {
    out.insert(it->second.begin(), it->second.end());
  }
  Term here = Term::constant(sit_id);
  for (const auto& atom : rigid_) {
    out.insert(Literal::holds(atom, here));
  }
  return out;
}

bool FactStore::is_saturated(const std::string& sit_id) const {
  return saturated_.count(sit_id) > 0;
}

void FactStore::mark_saturated(const std::string& sit_id) {
  situation(sit_id);
  saturated_.insert(sit_id);
}

void FactStore::add_derived(const std::string& sit_id, const Literal& lit,
                            Derivation how) {
  situation(sit_id);
  if (auto it = base_.find(sit_id);
      it != base_.end() && it->second.count(lit) > 0) {
    return;  // keep base and derived disjoint
  }
  derived_[sit_id].insert(lit);
  derivations_[sit_id].emplace(lit, std::move(how));
}

const std::set<Literal>& FactStore::derived_facts(
    const std::string& sit_id) const {
  situation(sit_id);
  static const std::set<Literal> empty;
  auto it = derived_.find(sit_id);
  return it == derived_.end() ? empty : it->second;
}

const Derivation* FactStore::find_derivation(const std::string& sit_id,
                                             const Literal& lit) const {
  auto it = derivations_.find(sit_id);
  if (it == derivations_.end()) return nullptr;
  auto jt = it->second.find(lit);
  return jt == it->second.end() ? nullptr : &jt->second;
}

void FactStore::invalidate(const std::string& sit_id) {
  std::vector<std::string> hit = {sit_id};
  for (const auto& [id, s] : situations_) {
    if (id != sit_id && is_descendant(id, sit_id)) hit.push_back(id);
  }
  for (const auto& id : hit) {
    derived_.erase(id);
    derivations_.erase(id);
    saturated_.erase(id);
  }
}

void FactStore::invalidate_all() {
  derived_.clear();
  derivations_.clear();
  saturated_.clear();
}

// ---- csv -----------------------------------------------------------------

Csv parse_csv(const std::string& text, const std::string& path) {
  Csv csv;
  std::vector<std::string> row;
  std::string cell;
  bool in_quotes = false;
  bool row_has_data = false;
  int line = 1;

  auto end_cell = [&]() {
    row.push_back(cell);
    cell.clear();
  };
  auto end_row = [&](int at_line) {
    end_cell();
    if (csv.header.empty()) {
      csv.header = row;
    } else {
      if (row.size() != csv.header.size()) {
        throw Error(Error::Kind::Parse,
                    "row " + std::to_string(csv.rows.size() + 1) + " has " +
                        std::to_string(row.size()) + " cells, header has " +
                        std::to_string(csv.header.size()),
                    path, at_line, 1);
      }
      csv.rows.push_back(row);
    }
    row.clear();
    row_has_data = false;
  };

  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        cell.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_data = true;
        break;
      case ',':
        end_cell();
        row_has_data = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_has_data || !cell.empty() || !row.empty()) end_row(line);
        ++line;
        break;
      default:
        cell.push_back(c);
        row_has_data = true;
        break;
    }
  }
  if (in_quotes) {
    throw Error(Error::Kind::Parse, "unterminated quoted cell", path, line, 1);
  }
  if (row_has_data || !cell.empty() || !row.empty()) end_row(line);
  if (csv.header.empty()) {
    throw Error(Error::Kind::Parse, "missing header row", path, 1, 1);
  }
  return csv;
}

std::string normalize_cell(const std::string& cell) {
  std::string out;
  bool pending_sep = false;
  for (char raw : cell) {
    char c = static_cast<char>(
        std::tolower(static_cast<unsigned char>(raw)));
    bool keep = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    if (keep) {
      if (pending_sep && !out.empty()) out.push_back('_');
      pending_sep = false;
      out.push_back(c);
    } else {
      pending_sep = true;
    }
  }
  if (!is_constant_symbol(out)) {
    store_error("cell '" + cell + "' does not normalize to a constant");
  }
  return out;
}

std::vector<IngestionMapping> parse_mapping_text(const std::string& text,
                                                 const std::string& path) {
  std::vector<IngestionMapping> out;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto pos = line.find('%'); pos != std::string::npos) {
      line.erase(pos);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.pop_back();
    }
    size_t start = 0;
    while (start < line.size() &&
           std::isspace(static_cast<unsigned char>(line[start]))) {
      ++start;
    }
    line.erase(0, start);
    if (line.empty()) continue;

    std::vector<std::string> parts;
    std::string part;
    for (char c : line) {
      if (c == ':') {
        parts.push_back(part);
        part.clear();
      } else {
        part.push_back(c);
      }
    }
    parts.push_back(part);
    if (parts.size() < 3 || parts.size() > 4) {
      throw Error(Error::Kind::Parse,
                  "expected table:predicate:col1,col2[:sitcol]", path, line_no,
                  1);
    }
    IngestionMapping m;
    m.table = parts[0];
    m.predicate = parts[1];
    std::string col;
    for (char c : parts[2]) {
      if (c == ',') {
        m.columns.push_back(col);
        col.clear();
      } else {
        col.push_back(c);
      }
    }
    m.columns.push_back(col);
    if (parts.size() == 4) m.situation_column = parts[3];
    if (m.table.empty() || m.predicate.empty() ||
        std::any_of(m.columns.begin(), m.columns.end(),
                    [](const std::string& s) { return s.empty(); })) {
      throw Error(Error::Kind::Parse,
                  "expected table:predicate:col1,col2[:sitcol]", path, line_no,
                  1);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::size_t ingest_table(FactStore& store, const Csv& csv,
                         const IngestionMapping& mapping) {
  const Declaration* d =
      store.ontology().find_declaration(mapping.predicate);
  if (d == nullptr) {
    store_error("undeclared predicate '" + mapping.predicate + "'");
  }
  if (d->kind == PredicateKind::Action) {
    store_error("cannot ingest rows into action predicate '" +
                mapping.predicate + "'");
  }
  if (mapping.columns.size() != d->arity) {
    store_error("mapping for '" + mapping.predicate + "' lists " +
                std::to_string(mapping.columns.size()) +
                " columns but the predicate is declared with " +
                std::to_string(d->arity));
  }

  auto column_index = [&](const std::string& name) -> size_t {
    auto it = std::find(csv.header.begin(), csv.header.end(), name);
    if (it == csv.header.end()) {
      store_error("table '" + mapping.table + "' has no column '" + name +
                  "'");
    }
    return static_cast<size_t>(it - csv.header.begin());
  };

  std::vector<size_t> arg_cols;
  for (const auto& c : mapping.columns) arg_cols.push_back(column_index(c));
  std::optional<size_t> sit_col;
  if (mapping.situation_column) {
    sit_col = column_index(*mapping.situation_column);
  }

  std::size_t asserted = 0;
  for (size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    try {
      Atom atom;
      atom.predicate = mapping.predicate;
      for (size_t ci : arg_cols) {
        atom.args.push_back(Term::constant(normalize_cell(row[ci])));
      }
      std::string sit = mapping.default_situation;
      if (sit_col) sit = normalize_cell(row[*sit_col]);
      std::size_t before = store.version();
      store.assert_fact(Literal::holds(atom, Term::constant(sit)), sit);
      if (store.version() != before) ++asserted;
    } catch (const Error& e) {
      store_error("row " + std::to_string(r + 1) + ": " + e.what());
    }
  }
  return asserted;
}

}  // namespace theoria
