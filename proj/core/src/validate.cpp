#include "crasplab/validate.hpp"

#include <set>
#include <string>

namespace crasplab {

namespace {

struct Checker {
  const Program& p;
  std::vector<Diagnostic> diags;

  void fail(const Op& op, const std::string& msg) {
    diags.push_back({op.line, 0, "operation '" + op.name + "': " + msg});
  }

  // True when the reference exists, points backwards, and has the wanted kind.
  void check_ref(const Op& op, int self, std::int32_t ref, bool want_bool, const char* slot) {
    if (ref < 0 || ref >= static_cast<int>(p.ops.size())) {
      fail(op, std::string(slot) + " argument is missing or out of range");
      return;
    }
    if (ref >= self) {
      fail(op, std::string(slot) + " argument '" + p.ops[ref].name +
                   "' is not defined earlier in the program");
      return;
    }
    if (op_kind_is_bool(p.ops[ref].kind) != want_bool) {
      fail(op, std::string(slot) + " argument '" + p.ops[ref].name + "' must be " +
                   (want_bool ? "boolean" : "count") + "-valued");
    }
  }
};

}  // namespace

std::vector<Diagnostic> validate_program(const Program& program) {
  Checker c{program, {}};

  std::set<std::string> names;
  for (int i = 0; i < static_cast<int>(program.ops.size()); ++i) {
    const Op& op = program.ops[i];
    if (!names.insert(op.name).second) c.fail(op, "duplicate operation name");
    if (op.declared_bool != op_kind_is_bool(op.kind)) {
      c.fail(op, std::string("declared ") + (op.declared_bool ? "bool" : "count") +
                     " but the expression is " + (op_kind_is_bool(op.kind) ? "boolean" : "count") +
                     "-valued");
    }
    switch (op.kind) {
      case OpKind::InitialQ:
        if (op.symbol.text().empty()) c.fail(op, "missing symbol");
        break;
      case OpKind::BoolNot:
        c.check_ref(op, i, op.arg0, true, "first");
        break;
      case OpKind::BoolAnd:
        c.check_ref(op, i, op.arg0, true, "first");
        c.check_ref(op, i, op.arg1, true, "second");
        break;
      case OpKind::ConstTrue:
      case OpKind::ConstOne:
        break;
      case OpKind::Positional: {
        if (op.period <= 0) c.fail(op, "period must be a positive integer");
        if (op.residues.empty()) c.fail(op, "residue set may not be empty");
        for (std::int64_t r : op.residues) {
          if (r < 0 || (op.period > 0 && r >= op.period)) {
            c.fail(op, "residue " + std::to_string(r) + " outside [0, period)");
          }
        }
        break;
      }
      case OpKind::Compare:
        c.check_ref(op, i, op.arg0, false, "first");
        c.check_ref(op, i, op.arg1, false, "second");
        break;
      case OpKind::CountAll:
        c.check_ref(op, i, op.arg0, true, "first");
        break;
      case OpKind::CountDist: {
        c.check_ref(op, i, op.arg0, true, "first");
        for (std::int64_t d : op.distances) {
          if (d < 0) {
            c.fail(op, "invalid predicate: distance " + std::to_string(d) +
                           " is negative; distances are i-j with j <= i");
          }
        }
        break;
      }
      case OpKind::Conditional:
        c.check_ref(op, i, op.arg0, true, "first");
        c.check_ref(op, i, op.arg1, false, "second");
        c.check_ref(op, i, op.arg2, false, "third");
        break;
      case OpKind::Add:
      case OpKind::Sub:
        c.check_ref(op, i, op.arg0, false, "first");
        c.check_ref(op, i, op.arg1, false, "second");
        break;
    }
  }

  std::set<std::string> next_syms;
  for (const auto& [sym, idx] : program.next_ops) {
    if (!next_syms.insert(sym.text()).second) {
      c.diags.push_back({0, 0, "duplicate next directive for symbol '" + sym.text() + "'"});
    }
    if (idx < 0 || idx >= static_cast<int>(program.ops.size())) {
      c.diags.push_back({0, 0, "next directive for '" + sym.text() + "' targets a missing operation"});
    } else if (!op_kind_is_bool(program.ops[idx].kind)) {
      c.diags.push_back(
          {program.ops[idx].line, 0,
           "next directive for '" + sym.text() + "' must target a boolean-valued operation"});
    }
  }
  return c.diags;
}

}  // namespace crasplab
