#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "crasplab/errors.hpp"
#include "crasplab/symbol.hpp"

namespace crasplab {

enum class TaskKind {
  UL,       // unique retrieval, token left of the query occurrence
  UR,       // unique retrieval, token right of the query occurrence
  NLFirst,  // non-unique, left of the first occurrence
  NRFirst,  // non-unique, right of the first occurrence
  NLLast,   // non-unique, left of the last occurrence
  NRLast,   // non-unique, right of the last occurrence
  UF,       // copy forward, all-distinct source
  UB,       // copy backward, all-distinct source
  NF,       // copy forward, unconstrained source
  NB,       // copy backward, unconstrained source
  WordReverse,
};

const char* task_name(TaskKind kind);
std::optional<TaskKind> task_from_name(const std::string& name);

bool task_is_retrieval(TaskKind kind);
bool task_is_copy(TaskKind kind);
bool task_is_unique(TaskKind kind);   // UL/UR/UF/UB
bool task_uses_first_occurrence(TaskKind kind);
bool task_answer_is_left(TaskKind kind);

// Shortest well-formed instance length for the task.
int task_min_length(TaskKind kind);

// Context plus query; occurrence indices are derived once and cached.
struct RetrievalInstance {
  std::vector<Symbol> context;
  Symbol query;
  std::vector<int> occurrences;  // 0-based, sorted

  static RetrievalInstance make(std::vector<Symbol> context, Symbol query);
};

struct CopyInstance {
  std::vector<Symbol> source;
};

using TaskInstance = std::variant<RetrievalInstance, CopyInstance>;

// Constraint names of all instance invariants violated for the kind; empty
// means the instance is valid.
std::vector<std::string> validate_instance(TaskKind kind, const TaskInstance& instance);

// Ground-truth answers by direct index arithmetic. Throw InvalidInstanceError
// when the kind's invariants fail.
Symbol oracle_retrieval(TaskKind kind, const RetrievalInstance& instance);
std::vector<Symbol> oracle_copy(TaskKind kind, const CopyInstance& instance);

// Chunk-level reversal of a separator-delimited sequence. The token list must
// match (w+ sep)* w+ with no leading, trailing, or doubled separators.
std::vector<Symbol> oracle_word_reverse(std::span<const Symbol> tokens, const Symbol& separator);

}  // namespace crasplab
