#include "crasplab/program.hpp"

#include <set>

namespace crasplab {

bool op_kind_is_bool(OpKind kind) {
  switch (kind) {
    case OpKind::InitialQ:
    case OpKind::BoolNot:
    case OpKind::BoolAnd:
    case OpKind::ConstTrue:
    case OpKind::Positional:
    case OpKind::Compare:
      return true;
    default:
      return false;
  }
}

const char* op_kind_name(OpKind kind) {
  switch (kind) {
    case OpKind::InitialQ: return "Q";
    case OpKind::BoolNot: return "NOT";
    case OpKind::BoolAnd: return "AND";
    case OpKind::ConstTrue: return "TRUE";
    case OpKind::Positional: return "POS";
    case OpKind::Compare: return "LE";
    case OpKind::CountAll: return "COUNT[all]";
    case OpKind::CountDist: return "COUNT[dist]";
    case OpKind::Conditional: return "IF";
    case OpKind::Add: return "ADD";
    case OpKind::Sub: return "SUB";
    case OpKind::ConstOne: return "ONE";
  }
  return "?";
}

std::vector<Symbol> Program::alphabet() const {
  std::vector<Symbol> out;
  std::set<std::string> seen;
  auto add = [&](const Symbol& s) {
    if (s.text().empty() || s.is_special()) return;
    if (seen.insert(s.text()).second) out.push_back(s);
  };
  for (const Symbol& s : declared_alphabet) add(s);
  for (const Op& op : ops) {
    if (op.kind == OpKind::InitialQ) add(op.symbol);
  }
  for (const auto& [sym, idx] : next_ops) add(sym);
  return out;
}

int Program::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace crasplab
