#pragma once

// Per-statement key tables shared by the parser, formatter and expander.

#include <span>
#include <string_view>
#include <vector>

#include "tbl/netlist.hpp"

namespace tbl {

enum class ValueShape { Number, Ident, IdentList };

struct KeySpec {
  std::string_view key;
  ValueShape shape = ValueShape::Number;
  Dimension dimension = Dimension::None;
  bool required = false;  // checked at parse time; ports are checked at expansion
  bool integer = false;
  bool non_negative = false;
  std::vector<std::string_view> choices = {};
};

std::span<const KeySpec> keys_for(StatementKind kind);
const KeySpec* find_key(StatementKind kind, std::string_view key);
bool is_identifier(std::string_view s);

}  // namespace tbl
