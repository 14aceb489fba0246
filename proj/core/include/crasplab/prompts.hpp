#pragma once

#include <string>
#include <vector>

#include "crasplab/records.hpp"

namespace crasplab {

enum class SeparatorMode { SEP, NOSEP };
enum class FewshotMode { SMALL, SAME };
enum class InstructionTemplate {
  BARE,
  SIMPLE_RULE,
  SIMPLE_RULE_EXPLAINED,
  MATH_RULE,
  MATH_RULE_EXPLAINED,
};

struct PromptTemplate {
  SeparatorMode separator = SeparatorMode::SEP;
  FewshotMode fewshot = FewshotMode::SMALL;
  InstructionTemplate instruction = InstructionTemplate::BARE;
  int k = 5;  // demonstrations, one slot reserved for the worked example
              // in the *_EXPLAINED templates

  std::string name() const;
};

// The full 2 x 2 x 5 grid, in a fixed order.
std::vector<PromptTemplate> prompt_grid(int k = 5);

const char* separator_mode_name(SeparatorMode m);
const char* fewshot_mode_name(FewshotMode m);
const char* instruction_template_name(InstructionTemplate t);
PromptTemplate parse_prompt_template(const std::string& sep, const std::string& fewshot,
                                     const std::string& instruction, int k);

// Rule sentences injected by SIMPLE_RULE / MATH_RULE for each task.
std::string simple_rule(const std::string& task);
std::string math_rule(const std::string& task);

// Assembles the prompt: optional rule text, k demonstrations drawn from the
// pool (SMALL takes strictly shorter records, SAME takes records of the same
// length), and the unresolved query line. Throws Error("PoolTooSmall...")
// when the pool has fewer eligible demonstrations than needed.
std::string render_prompt(const PromptTemplate& tpl, const DatasetRecord& record,
                          const std::vector<DatasetRecord>& pool,
                          const std::string& separator = "||");

}  // namespace crasplab
