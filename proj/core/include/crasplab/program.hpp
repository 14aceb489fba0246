#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crasplab/symbol.hpp"

namespace crasplab {

// The core operation set. Disjunction and existentials exist only as surface
// sugar; by the time a Program exists they are lowered to these kinds.
enum class OpKind : std::uint8_t {
  InitialQ,    // bool:  input[i] == symbol
  BoolNot,     // bool:  !a0
  BoolAnd,     // bool:  a0 && a1
  ConstTrue,   // bool:  true
  Positional,  // bool:  (i mod period) in residues
  Compare,     // bool:  a0 <= a1        (both counts)
  CountAll,    // count: |{ j <= i : a0(j) }|
  CountDist,   // count: |{ j <= i : a0(j) and i-j in distances }|
  Conditional, // count: a0 ? a1 : a2    (a0 bool, a1/a2 counts)
  Add,         // count: a0 + a1
  Sub,         // count: a0 - a1         (may go negative)
  ConstOne,    // count: 1
};

bool op_kind_is_bool(OpKind kind);
const char* op_kind_name(OpKind kind);

struct Op {
  std::string name;
  OpKind kind = OpKind::ConstTrue;
  bool declared_bool = true;        // the kind the source declared
  std::int32_t arg0 = -1;           // indices of earlier ops
  std::int32_t arg1 = -1;
  std::int32_t arg2 = -1;
  Symbol symbol;                    // InitialQ
  std::int64_t period = 0;          // Positional
  std::vector<std::int64_t> residues;   // Positional
  std::vector<std::int64_t> distances;  // CountDist; validated non-negative
  int line = 0;                     // source line when parsed, else 0
};

// An ordered operation list P_1..P_k plus the NEXT directive table. Programs
// are immutable after construction; evaluation never mutates them.
struct Program {
  std::vector<Op> ops;
  std::vector<std::pair<Symbol, std::int32_t>> next_ops;  // symbol -> op index
  // Extra content symbols the program admits in inputs beyond the ones its
  // operations mention. The DSL has no declaration syntax; callers set this
  // when a program should run on a wider alphabet.
  std::vector<Symbol> declared_alphabet;

  // The effective alphabet: declared symbols plus every content symbol the
  // operations and NEXT directives mention, in first-reference order.
  std::vector<Symbol> alphabet() const;

  int index_of(const std::string& name) const;  // -1 when absent
};

}  // namespace crasplab
