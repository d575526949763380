#pragma once

// Line-oriented netlist language for tube-balloon circuits.
//
//   source SUP pressure=145kPa
//   gate NOT g1 in=a out=q supply=SUP
//   probe q
//
// Each statement is `kind [gate-type] ident key=value...`. Values are a number
// with an optional unit suffix (kPa, mL, cm, mm, m, s) or a comma-separated
// list of identifiers. `#` starts a comment.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tbl/decimal.hpp"
#include "tbl/error.hpp"
#include "tbl/macros.hpp"
#include "tbl/network.hpp"

namespace tbl {

enum class Unit { None, KPa, ML, Cm, Mm, M, S };
enum class Dimension { None, Pressure, Volume, Length, Time };

Dimension dimension_of(Unit u);
std::string_view unit_suffix(Unit u);
std::optional<Unit> parse_unit(std::string_view suffix);

/// A number as written, with its unit. Equality is by physical value, so
/// `0.075m == 7.5cm`.
struct Quantity {
  Decimal value;
  Unit unit = Unit::None;

  /// SI magnitude (Pa, m^3, m, s) or the bare number.
  double si() const;
  /// Same value expressed in the canonical display unit.
  Quantity normalized() const;

  friend bool operator==(const Quantity& a, const Quantity& b);
};

using IdentList = std::vector<std::string>;
using Value = std::variant<Quantity, IdentList>;

enum class StatementKind { Source, Atm, Tube, Balloon, Valve, Gate, Ring, Probe };

std::string_view keyword(StatementKind kind);
std::string_view keyword(GateType type);

struct Statement {
  StatementKind kind = StatementKind::Probe;
  std::optional<GateType> gate;
  std::string id;
  std::map<std::string, Value> params;
  TextLocation where;  // not part of equality

  const Value* find(const std::string& key) const;

  friend bool operator==(const Statement& a, const Statement& b) {
    return a.kind == b.kind && a.gate == b.gate && a.id == b.id && a.params == b.params;
  }
};

struct CircuitAst {
  std::vector<Statement> statements;

  friend bool operator==(const CircuitAst&, const CircuitAst&) = default;
};

/// Throws SyntaxError, DuplicateId, UnknownUnit or UnknownKeyword, each with
/// the line and column of the offending token.
CircuitAst parse(std::string_view text);

/// Canonical text: one statement per line, keys sorted, units normalized,
/// LF line endings.
std::string format(const CircuitAst& ast);

/// Parses one `value` token in the context of `key` for statement `kind`.
Value parse_value(StatementKind kind, std::string_view key, std::string_view text,
                  TextLocation where = {});

/// Builds the network. Throws EvenRing, UnboundPort, SupplyMissing.
Network expand(const CircuitAst& ast, const Defaults& defaults = {});

/// Probe node names in declaration order.
std::vector<std::string> declared_probes(const CircuitAst& ast);

// ---------------------------------------------------------------------------
// Bill of materials

struct BomLine {
  std::string item;
  std::string supplier;
  double quantity = 0.0;   // in `unit`
  std::string unit;
  long cost_cents = 0;
};

struct BillOfMaterials {
  std::size_t device_count = 0;
  std::vector<BomLine> lines;
  long total_cents = 0;
};

inline constexpr long kDeviceCostCents = 45;

BillOfMaterials bom(const CircuitAst& ast, const Defaults& defaults = {});
std::string format_usd(long cents);

}  // namespace tbl
