#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "crasplab/errors.hpp"
#include "crasplab/program.hpp"

namespace crasplab {

// Per-position values of every named operation. Booleans are stored as 0/1.
struct Valuation {
  std::vector<std::string> names;
  std::vector<bool> bool_valued;
  std::vector<std::vector<std::int64_t>> values;  // [op][position]
  std::size_t length = 0;

  const std::vector<std::int64_t>& of(const std::string& name) const;
};

// Reference evaluator: dense, unoptimized, records everything. Used by the
// trace view and as the differential-testing baseline for Runtime.
Valuation evaluate(const Program& program, std::span<const Symbol> input);

// Incremental engine with O(ops) state. Appending a symbol computes the new
// position only, which keeps autoregressive generation at O(n * |ops|)
// overall. Internally the operation list is split into slots that counting
// operations depend on (updated every position) and slots only ever read at
// the final position (computed on decide()); single-use NOT/AND/NOT chains
// produced by OR lowering run as one disjunction slot. Both rewrites are
// behavior-preserving and are cross-checked against evaluate() in tests.
// The program must outlive the Runtime.
class Runtime {
 public:
  explicit Runtime(const Program& program);

  void reset();
  void push(const Symbol& symbol);
  std::size_t position() const { return pos_; }

  // NEXT decision at the last pushed position: the unique symbol whose NEXT
  // operation holds, std::nullopt when none does (Halt).
  std::optional<Symbol> decide();

  // Value of a named operation at the last pushed position.
  std::int64_t value_at_last(const std::string& name);

 private:
  struct Slot {
    std::uint8_t kind;  // TapeKind
    std::int32_t a0 = -1, a1 = -1, a2 = -1;
    std::int64_t imm = 0;
    std::int32_t aux = 0, aux2 = 0;
  };
  struct Ring {
    std::int32_t src;     // slot whose history is kept
    std::int32_t window;  // max distance + 1
    std::int64_t offset;  // into ring_buf_
  };
  struct NextEntry {
    Symbol symbol;
    std::int32_t slot;
    std::int32_t symbol_id;
  };

  void compile(const Program& program);
  void eval_lazy();
  std::int64_t eval_slot(const Slot& s, std::size_t at_pos) const;
  void push_id(std::int32_t id);

  const Program* program_ = nullptr;
  std::vector<Slot> always_;
  std::vector<Slot> lazy_;
  std::vector<std::int32_t> dist_pool_;
  std::vector<std::uint8_t> residue_pool_;
  std::vector<Ring> rings_;
  std::vector<NextEntry> next_;
  std::vector<std::int32_t> slot_of_;
  std::unordered_map<std::string, std::int32_t> symbol_ids_;

  std::vector<std::int64_t> cur_;
  std::vector<std::int64_t> ring_buf_;
  std::int32_t last_id_ = -1;
  std::size_t pos_ = 0;
  std::size_t lazy_pos_ = static_cast<std::size_t>(-1);

  friend std::vector<Symbol> generate(const Program&, std::span<const Symbol>, int);
};

// NEXT decision after feeding the whole prefix. std::nullopt means Halt.
std::optional<Symbol> next_token(const Program& program, std::span<const Symbol> prefix);

// Autoregressive continuation: append next_token output until Halt. Returns
// the generated suffix only. Throws StepBudgetError if a (max_steps+1)-th
// token would be produced.
std::vector<Symbol> generate(const Program& program, std::span<const Symbol> prefix,
                             int max_steps);

}  // namespace crasplab
