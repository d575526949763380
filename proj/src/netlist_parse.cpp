#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "tbl/netlist.hpp"
#include "tbl/netlist_keys.hpp"

namespace tbl {

Dimension dimension_of(Unit u) {
  switch (u) {
    case Unit::None: return Dimension::None;
    case Unit::KPa: return Dimension::Pressure;
    case Unit::ML: return Dimension::Volume;
    case Unit::Cm:
    case Unit::Mm:
    case Unit::M: return Dimension::Length;
    case Unit::S: return Dimension::Time;
  }
  return Dimension::None;
}

std::string_view unit_suffix(Unit u) {
  switch (u) {
    case Unit::None: return "";
    case Unit::KPa: return "kPa";
    case Unit::ML: return "mL";
    case Unit::Cm: return "cm";
    case Unit::Mm: return "mm";
    case Unit::M: return "m";
    case Unit::S: return "s";
  }
  return "";
}

std::optional<Unit> parse_unit(std::string_view suffix) {
  for (Unit u : {Unit::None, Unit::KPa, Unit::ML, Unit::Cm, Unit::Mm, Unit::M, Unit::S}) {
    if (unit_suffix(u) == suffix) return u;
  }
  return std::nullopt;
}

namespace {

// Exponent shift from the unit to the dimension's reference unit
// (kPa, mL, mm, s), and from the reference unit to SI.
int to_reference(Unit u) {
  switch (u) {
    case Unit::Cm: return 1;
    case Unit::M: return 3;
    default: return 0;
  }
}

int reference_to_si(Dimension d) {
  switch (d) {
    case Dimension::Pressure: return 3;   // kPa -> Pa
    case Dimension::Volume: return -6;    // mL -> m^3
    case Dimension::Length: return -3;    // mm -> m
    default: return 0;
  }
}

}  // namespace

double Quantity::si() const {
  const Dimension d = dimension_of(unit);
  return value.shifted(to_reference(unit) + reference_to_si(d)).to_double();
}

Quantity Quantity::normalized() const {
  if (dimension_of(unit) != Dimension::Length) return *this;
  const Decimal mm = value.shifted(to_reference(unit));
  const Decimal cm = mm.shifted(-1);
  if (cm.is_zero() || cm.magnitude_at_least_one()) return Quantity{cm, Unit::Cm};
  return Quantity{mm, Unit::Mm};
}

bool operator==(const Quantity& a, const Quantity& b) {
  if (dimension_of(a.unit) != dimension_of(b.unit)) return false;
  return a.value.shifted(to_reference(a.unit)) == b.value.shifted(to_reference(b.unit));
}

std::string_view keyword(StatementKind kind) {
  switch (kind) {
    case StatementKind::Source: return "source";
    case StatementKind::Atm: return "atm";
    case StatementKind::Tube: return "tube";
    case StatementKind::Balloon: return "balloon";
    case StatementKind::Valve: return "valve";
    case StatementKind::Gate: return "gate";
    case StatementKind::Ring: return "ring";
    case StatementKind::Probe: return "probe";
  }
  return "";
}

std::string_view keyword(GateType type) {
  switch (type) {
    case GateType::Not: return "NOT";
    case GateType::Nor: return "NOR";
    case GateType::Nand: return "NAND";
    case GateType::And: return "AND";
    case GateType::Or: return "OR";
  }
  return "";
}

const Value* Statement::find(const std::string& key) const {
  auto it = params.find(key);
  return it == params.end() ? nullptr : &it->second;
}

namespace {

constexpr std::array kKinds{StatementKind::Source, StatementKind::Atm,  StatementKind::Tube,
                            StatementKind::Balloon, StatementKind::Valve, StatementKind::Gate,
                            StatementKind::Ring,   StatementKind::Probe};
constexpr std::array kGateTypes{GateType::Not, GateType::Nor, GateType::Nand, GateType::And,
                                GateType::Or};

std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::Pressure: return "pressure (kPa)";
    case Dimension::Volume: return "volume (mL)";
    case Dimension::Length: return "length (m, cm, mm)";
    case Dimension::Time: return "time (s)";
    case Dimension::None: return "plain number";
  }
  return "";
}

struct Token {
  std::string_view text;
  int column = 0;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    out.push_back(Token{line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

std::string scope_of(StatementKind kind) {
  switch (kind) {
    case StatementKind::Gate:
    case StatementKind::Ring: return "instance";
    default: return std::string(keyword(kind));
  }
}

}  // namespace

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  const auto first = static_cast<unsigned char>(s.front());
  if (!(std::isalpha(first) || first == '_')) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-';
  });
}

Value parse_value(StatementKind kind, std::string_view key, std::string_view text, TextLocation where) {
  const KeySpec* spec = find_key(kind, key);
  if (!spec) {
    throw Error(ErrorCode::UnknownKeyword,
                "unknown key '" + std::string(key) + "' for " + std::string(keyword(kind)), where);
  }
  if (text.empty()) throw Error(ErrorCode::SyntaxError, "empty value for '" + std::string(key) + "'", where);

  if (spec->shape == ValueShape::Number) {
    // Longest numeric prefix, then the unit suffix.
    std::size_t end = 0;
    if (end < text.size() && (text[end] == '+' || text[end] == '-')) ++end;
    while (end < text.size() && (std::isdigit(static_cast<unsigned char>(text[end])) || text[end] == '.')) ++end;
    if (end < text.size() && (text[end] == 'e' || text[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < text.size() && (text[e] == '+' || text[e] == '-')) ++e;
      if (e < text.size() && std::isdigit(static_cast<unsigned char>(text[e]))) {
        while (e < text.size() && std::isdigit(static_cast<unsigned char>(text[e]))) ++e;
        end = e;
      }
    }
    const auto number = Decimal::parse(text.substr(0, end));
    if (!number) {
      throw Error(ErrorCode::SyntaxError,
                  "'" + std::string(text) + "' is not a number for '" + std::string(key) + "'", where);
    }
    const std::string_view suffix = text.substr(end);
    const auto unit = parse_unit(suffix);
    if (!unit) {
      TextLocation at = where;
      at.column += static_cast<int>(end);
      throw Error(ErrorCode::UnknownUnit, "unknown unit '" + std::string(suffix) + "' in '" +
                                              std::string(text) + "'", at);
    }
    if (dimension_of(*unit) != spec->dimension) {
      throw Error(ErrorCode::SyntaxError,
                  "'" + std::string(key) + "' expects a " +
                      std::string(dimension_name(spec->dimension)) + ", got '" + std::string(text) + "'",
                  where);
    }
    if (spec->integer && !number->is_integer()) {
      throw Error(ErrorCode::SyntaxError,
                  "'" + std::string(key) + "' expects an integer, got '" + std::string(text) + "'", where);
    }
    if (spec->non_negative && number->coefficient() < 0) {
      throw Error(ErrorCode::SyntaxError,
                  "'" + std::string(key) + "' must not be negative, got '" + std::string(text) + "'", where);
    }
    return Quantity{*number, *unit};
  }

  IdentList idents;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    const std::string_view part = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (!is_identifier(part)) {
      TextLocation at = where;
      at.column += static_cast<int>(start);
      throw Error(ErrorCode::SyntaxError,
                  "'" + std::string(part) + "' is not a valid identifier in '" + std::string(key) + "'", at);
    }
    idents.emplace_back(part);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (spec->shape == ValueShape::Ident && idents.size() != 1) {
    throw Error(ErrorCode::SyntaxError, "'" + std::string(key) + "' takes a single identifier", where);
  }
  if (!spec->choices.empty() &&
      std::find(spec->choices.begin(), spec->choices.end(), idents.front()) == spec->choices.end()) {
    std::string allowed;
    for (auto c : spec->choices) allowed += (allowed.empty() ? "" : "|") + std::string(c);
    throw Error(ErrorCode::SyntaxError,
                "'" + std::string(key) + "' must be one of " + allowed + ", got '" + idents.front() + "'",
                where);
  }
  return idents;
}

CircuitAst parse(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  CircuitAst ast;
  std::set<std::pair<std::string, std::string>> ids;
  bool atm_seen = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    auto at = [&](const Token& t) { return TextLocation{line_no, t.column}; };

    Statement st;
    st.where = at(tokens[0]);
    const auto kind_it = std::find_if(kKinds.begin(), kKinds.end(),
                                      [&](StatementKind k) { return keyword(k) == tokens[0].text; });
    if (kind_it == kKinds.end()) {
      throw Error(ErrorCode::UnknownKeyword, "unknown statement '" + std::string(tokens[0].text) + "'",
                  at(tokens[0]));
    }
    st.kind = *kind_it;
    std::size_t next = 1;
    if (st.kind == StatementKind::Gate) {
      if (tokens.size() < 2) {
        throw Error(ErrorCode::SyntaxError, "gate needs a type (NOT, NOR, NAND, AND, OR)",
                    TextLocation{line_no, static_cast<int>(line.size()) + 1});
      }
      const auto type_it = std::find_if(kGateTypes.begin(), kGateTypes.end(),
                                        [&](GateType g) { return keyword(g) == tokens[1].text; });
      if (type_it == kGateTypes.end()) {
        throw Error(ErrorCode::UnknownKeyword, "unknown gate type '" + std::string(tokens[1].text) + "'",
                    at(tokens[1]));
      }
      st.gate = *type_it;
      next = 2;
    }
    if (tokens.size() <= next || tokens[next].text.find('=') != std::string_view::npos) {
      const TextLocation where = tokens.size() > next ? at(tokens[next])
                                                      : TextLocation{line_no, static_cast<int>(line.size()) + 1};
      throw Error(ErrorCode::SyntaxError, std::string(keyword(st.kind)) + " needs an identifier", where);
    }
    if (!is_identifier(tokens[next].text)) {
      throw Error(ErrorCode::SyntaxError, "'" + std::string(tokens[next].text) + "' is not a valid identifier",
                  at(tokens[next]));
    }
    st.id = std::string(tokens[next].text);
    if (!ids.emplace(scope_of(st.kind), st.id).second) {
      throw Error(ErrorCode::DuplicateId,
                  "duplicate " + scope_of(st.kind) + " id '" + st.id + "'", at(tokens[next]));
    }
    if (st.kind == StatementKind::Atm) {
      if (atm_seen) {
        throw Error(ErrorCode::DuplicateId, "a second atm statement ('" + st.id + "')", at(tokens[next]));
      }
      atm_seen = true;
    }
    ++next;

    for (; next < tokens.size(); ++next) {
      const Token& tok = tokens[next];
      const std::size_t eq = tok.text.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw Error(ErrorCode::SyntaxError, "expected key=value, got '" + std::string(tok.text) + "'", at(tok));
      }
      const std::string key(tok.text.substr(0, eq));
      TextLocation value_at = at(tok);
      value_at.column += static_cast<int>(eq) + 1;
      if (st.params.count(key)) {
        throw Error(ErrorCode::SyntaxError, "duplicate key '" + key + "'", at(tok));
      }
      if (!find_key(st.kind, key)) {
        throw Error(ErrorCode::UnknownKeyword,
                    "unknown key '" + key + "' for " + std::string(keyword(st.kind)), at(tok));
      }
      st.params.emplace(key, parse_value(st.kind, key, tok.text.substr(eq + 1), value_at));
    }

    for (const auto& spec : keys_for(st.kind)) {
      if (spec.required && !st.params.count(std::string(spec.key))) {
        throw Error(ErrorCode::SyntaxError,
                    std::string(keyword(st.kind)) + " '" + st.id + "' is missing '" + std::string(spec.key) + "'",
                    st.where);
      }
    }
    ast.statements.push_back(std::move(st));
  }
  return ast;
}

}  // namespace tbl
