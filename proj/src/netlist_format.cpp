
#include "tbl/netlist.hpp"

namespace tbl {

namespace {

std::string render(const Value& value) {
  if (const auto* q = std::get_if<Quantity>(&value)) {
    const Quantity n = q->normalized();
    return n.value.to_string() + std::string(unit_suffix(n.unit));
  }
  const auto& idents = std::get<IdentList>(value);
  std::string out;
  for (const auto& id : idents) {
    if (!out.empty()) out += ',';
    out += id;
  }
  return out;
}

}  // namespace

std::string format(const CircuitAst& ast) {
  std::string out;
  for (const auto& st : ast.statements) {
    out += keyword(st.kind);
    if (st.gate) {
      out += ' ';
      out += keyword(*st.gate);
    }
    out += ' ';
    out += st.id;
    for (const auto& [key, value] : st.params) {  // std::map: sorted keys
      out += ' ';
      out += key;
      out += '=';
      out += render(value);
    }
    out += '\n';
  }
  return out;
}

}  // namespace tbl
