#include "crasplab/tasks.hpp"

#include <algorithm>
#include <set>

namespace crasplab {

const char* task_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::UL: return "UL";
    case TaskKind::UR: return "UR";
    case TaskKind::NLFirst: return "NLFirst";
    case TaskKind::NRFirst: return "NRFirst";
    case TaskKind::NLLast: return "NLLast";
    case TaskKind::NRLast: return "NRLast";
    case TaskKind::UF: return "UF";
    case TaskKind::UB: return "UB";
    case TaskKind::NF: return "NF";
    case TaskKind::NB: return "NB";
    case TaskKind::WordReverse: return "WordReverse";
  }
  return "?";
}

std::optional<TaskKind> task_from_name(const std::string& name) {
  static const TaskKind all[] = {TaskKind::UL,      TaskKind::UR,      TaskKind::NLFirst,
                                 TaskKind::NRFirst, TaskKind::NLLast,  TaskKind::NRLast,
                                 TaskKind::UF,      TaskKind::UB,      TaskKind::NF,
                                 TaskKind::NB,      TaskKind::WordReverse};
  for (TaskKind k : all) {
    if (name == task_name(k)) return k;
  }
  return std::nullopt;
}

bool task_is_retrieval(TaskKind kind) {
  switch (kind) {
    case TaskKind::UL:
    case TaskKind::UR:
    case TaskKind::NLFirst:
    case TaskKind::NRFirst:
    case TaskKind::NLLast:
    case TaskKind::NRLast:
      return true;
    default:
      return false;
  }
}

bool task_is_copy(TaskKind kind) {
  return kind == TaskKind::UF || kind == TaskKind::UB || kind == TaskKind::NF ||
         kind == TaskKind::NB;
}

bool task_is_unique(TaskKind kind) {
  return kind == TaskKind::UL || kind == TaskKind::UR || kind == TaskKind::UF ||
         kind == TaskKind::UB;
}

bool task_uses_first_occurrence(TaskKind kind) {
  return kind == TaskKind::UL || kind == TaskKind::UR || kind == TaskKind::NLFirst ||
         kind == TaskKind::NRFirst;
}

bool task_answer_is_left(TaskKind kind) {
  return kind == TaskKind::UL || kind == TaskKind::NLFirst || kind == TaskKind::NLLast;
}

int task_min_length(TaskKind kind) {
  if (task_is_copy(kind)) return 1;
  if (kind == TaskKind::WordReverse) return 1;
  // Unique retrieval needs one occurrence with both neighbors; non-unique
  // needs two occurrences, a left neighbor for the first and a right
  // neighbor for the last.
  return task_is_unique(kind) ? 3 : 4;
}

RetrievalInstance RetrievalInstance::make(std::vector<Symbol> context, Symbol query) {
  RetrievalInstance inst;
  inst.context = std::move(context);
  inst.query = std::move(query);
  for (int i = 0; i < static_cast<int>(inst.context.size()); ++i) {
    if (inst.context[i] == inst.query) inst.occurrences.push_back(i);
  }
  return inst;
}

namespace {

void validate_retrieval(TaskKind kind, const RetrievalInstance& inst,
                        std::vector<std::string>& out) {
  const int n = static_cast<int>(inst.context.size());
  const int t = static_cast<int>(inst.occurrences.size());
  if (task_is_unique(kind)) {
    if (t != 1) out.push_back("occurrence-count: unique kinds require exactly one occurrence");
  } else if (t < 2) {
    out.push_back("occurrence-count: non-unique kinds require at least two occurrences");
  }
  if (t == 0) return;
  const int relevant = task_uses_first_occurrence(kind) ? inst.occurrences.front()
                                                        : inst.occurrences.back();
  if (task_answer_is_left(kind)) {
    if (relevant == 0) out.push_back("boundary: relevant occurrence has no left neighbor");
  } else {
    if (relevant == n - 1) out.push_back("boundary: relevant occurrence has no right neighbor");
  }
}

void validate_copy(TaskKind kind, const CopyInstance& inst, std::vector<std::string>& out) {
  if (kind == TaskKind::UF || kind == TaskKind::UB) {
    std::set<std::string> seen;
    for (const Symbol& s : inst.source) {
      if (!seen.insert(s.text()).second) {
        out.push_back("duplicate-symbol: '" + s.text() + "' repeats in an all-distinct source");
        return;
      }
    }
  }
}

}  // namespace

std::vector<std::string> validate_instance(TaskKind kind, const TaskInstance& instance) {
  std::vector<std::string> out;
  if (task_is_retrieval(kind)) {
    if (const auto* r = std::get_if<RetrievalInstance>(&instance)) {
      validate_retrieval(kind, *r, out);
    } else {
      out.push_back("instance-kind: retrieval task given a copy instance");
    }
  } else if (task_is_copy(kind)) {
    if (const auto* c = std::get_if<CopyInstance>(&instance)) {
      validate_copy(kind, *c, out);
    } else {
      out.push_back("instance-kind: copy task given a retrieval instance");
    }
  } else {
    out.push_back("instance-kind: no instance form for " + std::string(task_name(kind)));
  }
  return out;
}

Symbol oracle_retrieval(TaskKind kind, const RetrievalInstance& instance) {
  auto problems = validate_instance(kind, instance);
  if (!problems.empty()) {
    throw InvalidInstanceError("invalid " + std::string(task_name(kind)) +
                               " instance: " + problems.front());
  }
  const int relevant = task_uses_first_occurrence(kind) ? instance.occurrences.front()
                                                        : instance.occurrences.back();
  const int answer = task_answer_is_left(kind) ? relevant - 1 : relevant + 1;
  return instance.context[answer];
}

std::vector<Symbol> oracle_copy(TaskKind kind, const CopyInstance& instance) {
  auto problems = validate_instance(kind, instance);
  if (!problems.empty()) {
    throw InvalidInstanceError("invalid " + std::string(task_name(kind)) +
                               " instance: " + problems.front());
  }
  std::vector<Symbol> out = instance.source;
  if (kind == TaskKind::UB || kind == TaskKind::NB) std::reverse(out.begin(), out.end());
  return out;
}

std::vector<Symbol> oracle_word_reverse(std::span<const Symbol> tokens, const Symbol& separator) {
  std::vector<std::vector<Symbol>> chunks(1);
  for (const Symbol& tok : tokens) {
    if (tok == separator) {
      if (chunks.back().empty()) {
        throw MalformedWordStringError("separator without a preceding chunk");
      }
      chunks.emplace_back();
    } else {
      chunks.back().push_back(tok);
    }
  }
  if (chunks.back().empty()) {
    throw MalformedWordStringError(tokens.empty() ? "empty token sequence"
                                                  : "trailing separator");
  }
  std::vector<Symbol> out;
  out.reserve(tokens.size());
  for (auto it = chunks.rbegin(); it != chunks.rend(); ++it) {
    if (it != chunks.rbegin()) out.push_back(separator);
    out.insert(out.end(), it->begin(), it->end());
  }
  return out;
}

}  // namespace crasplab
