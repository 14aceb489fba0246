#include "crasplab/prompts.hpp"

#include <algorithm>

#include "crasplab/datagen.hpp"
#include "crasplab/errors.hpp"
#include "crasplab/symbol.hpp"
#include "crasplab/tasks.hpp"

namespace crasplab {

namespace {

bool is_copy_task(const std::string& task) {
  auto kind = task_from_name(task);
  return (kind.has_value() && task_is_copy(*kind)) || task == "lorem";
}

// Input as shown in a prompt line. SEP keeps the separator token, NOSEP
// drops it; copy lines carry begin/end markers.
std::string shown_input(const DatasetRecord& r, SeparatorMode mode, const std::string& sep) {
  std::vector<Symbol> tokens = parse_symbols(r.input);
  std::string out;
  for (const Symbol& t : tokens) {
    if (mode == SeparatorMode::NOSEP && t.text() == sep) continue;
    if (!out.empty()) out += ' ';
    out += t.text();
  }
  return out;
}

std::string demo_line(const DatasetRecord& r, SeparatorMode mode, const std::string& sep) {
  if (is_copy_task(r.task)) {
    return Symbol::bos().text() + " " + shown_input(r, mode, sep) + " : " + r.target + " " +
           Symbol::eos().text();
  }
  return shown_input(r, mode, sep) + " : " + r.target;
}

std::string query_line(const DatasetRecord& r, SeparatorMode mode, const std::string& sep) {
  if (is_copy_task(r.task)) {
    return Symbol::bos().text() + " " + shown_input(r, mode, sep) + " :";
  }
  return shown_input(r, mode, sep) + " :";
}

std::string worked_example(const DatasetRecord& demo, SeparatorMode mode,
                           const std::string& sep) {
  std::string line = "Worked example: for '" + shown_input(demo, mode, sep) + "'";
  auto kind = task_from_name(demo.task);
  if (kind.has_value() && task_is_retrieval(*kind)) {
    RetrievalInstance inst = parse_retrieval_input(demo.input, sep);
    const int occ = task_uses_first_occurrence(*kind) ? inst.occurrences.front()
                                                      : inst.occurrences.back();
    line += ", the query '" + inst.query.text() + "' " +
            (task_is_unique(*kind)
                 ? "occurs once"
                 : (task_uses_first_occurrence(*kind) ? "first occurs" : "last occurs")) +
            " at position " + std::to_string(occ + 1) + ", so the answer is the token to its " +
            (task_answer_is_left(*kind) ? "left" : "right") + ": '" + demo.target + "'.";
  } else {
    line += ", the answer is '" + demo.target + "'.";
  }
  return line;
}

}  // namespace

std::string PromptTemplate::name() const {
  return std::string(separator_mode_name(separator)) + "/" + fewshot_mode_name(fewshot) + "/" +
         instruction_template_name(instruction);
}

std::vector<PromptTemplate> prompt_grid(int k) {
  std::vector<PromptTemplate> grid;
  for (SeparatorMode sep : {SeparatorMode::SEP, SeparatorMode::NOSEP}) {
    for (FewshotMode few : {FewshotMode::SMALL, FewshotMode::SAME}) {
      for (InstructionTemplate ins :
           {InstructionTemplate::BARE, InstructionTemplate::SIMPLE_RULE,
            InstructionTemplate::SIMPLE_RULE_EXPLAINED, InstructionTemplate::MATH_RULE,
            InstructionTemplate::MATH_RULE_EXPLAINED}) {
        grid.push_back({sep, few, ins, k});
      }
    }
  }
  return grid;
}

const char* separator_mode_name(SeparatorMode m) {
  return m == SeparatorMode::SEP ? "sep" : "nosep";
}
const char* fewshot_mode_name(FewshotMode m) { return m == FewshotMode::SMALL ? "small" : "same"; }
const char* instruction_template_name(InstructionTemplate t) {
  switch (t) {
    case InstructionTemplate::BARE: return "bare";
    case InstructionTemplate::SIMPLE_RULE: return "simple_rule";
    case InstructionTemplate::SIMPLE_RULE_EXPLAINED: return "simple_rule_explained";
    case InstructionTemplate::MATH_RULE: return "math_rule";
    case InstructionTemplate::MATH_RULE_EXPLAINED: return "math_rule_explained";
  }
  return "?";
}

PromptTemplate parse_prompt_template(const std::string& sep, const std::string& fewshot,
                                     const std::string& instruction, int k) {
  PromptTemplate t;
  t.k = k;
  if (sep == "sep") {
    t.separator = SeparatorMode::SEP;
  } else if (sep == "nosep") {
    t.separator = SeparatorMode::NOSEP;
  } else {
    throw Error("unknown separator mode '" + sep + "'");
  }
  if (fewshot == "small") {
    t.fewshot = FewshotMode::SMALL;
  } else if (fewshot == "same") {
    t.fewshot = FewshotMode::SAME;
  } else {
    throw Error("unknown fewshot mode '" + fewshot + "'");
  }
  bool found = false;
  for (InstructionTemplate ins :
       {InstructionTemplate::BARE, InstructionTemplate::SIMPLE_RULE,
        InstructionTemplate::SIMPLE_RULE_EXPLAINED, InstructionTemplate::MATH_RULE,
        InstructionTemplate::MATH_RULE_EXPLAINED}) {
    if (instruction == instruction_template_name(ins)) {
      t.instruction = ins;
      found = true;
    }
  }
  if (!found) throw Error("unknown instruction template '" + instruction + "'");
  return t;
}

std::string simple_rule(const std::string& task) {
  if (task == "UL")
    return "The answer is the token immediately to the left of the single instance of the query "
           "token.";
  if (task == "UR")
    return "The answer is the token immediately to the right of the single instance of the query "
           "token.";
  if (task == "NLLast")
    return "When the query appears multiple times, the answer is the token just to the left of "
           "its last appearance.";
  if (task == "NRLast")
    return "When the query appears multiple times, the answer is the token just to the right of "
           "its last appearance.";
  if (task == "NLFirst")
    return "When the query appears multiple times, the answer is the token just to the left of "
           "its first appearance.";
  if (task == "NRFirst")
    return "When the query appears multiple times, the answer is the token just to the right of "
           "its first appearance.";
  if (task == "UF" || task == "NF" || task == "lorem")
    return "The output is exactly the same sequence as the input.";
  if (task == "UB" || task == "NB")
    return "The output is the input sequence written in reverse order.";
  throw Error("no simple rule for task '" + task + "'");
}

std::string math_rule(const std::string& task) {
  if (task == "UL") return "$t = 1$ and $x_{n+1} = x_{q_1-1}$";
  if (task == "UR") return "$t = 1$ and $x_{n+1} = x_{q_1+1}$";
  if (task == "NLLast") return "$t > 1$ and $x_{n+1} = x_{q_t-1}$";
  if (task == "NRLast") return "$t > 1$ and $x_{n+1} = x_{q_t+1}$";
  if (task == "NLFirst") return "$t > 1$ and $x_{n+1} = x_{q_1-1}$";
  if (task == "NRFirst") return "$t > 1$ and $x_{n+1} = x_{q_1+1}$";
  if (task == "UF" || task == "NF" || task == "lorem")
    return "$x_{n+i} = x_i$ for $1 \\le i \\le n$";
  if (task == "UB" || task == "NB") return "$x_{n+i} = x_{n+1-i}$ for $1 \\le i \\le n$";
  throw Error("no math rule for task '" + task + "'");
}

std::string render_prompt(const PromptTemplate& tpl, const DatasetRecord& record,
                          const std::vector<DatasetRecord>& pool, const std::string& separator) {
  const bool explained = tpl.instruction == InstructionTemplate::SIMPLE_RULE_EXPLAINED ||
                         tpl.instruction == InstructionTemplate::MATH_RULE_EXPLAINED;
  const int plain_needed = explained ? tpl.k - 1 : tpl.k;

  std::vector<const DatasetRecord*> eligible;
  for (const DatasetRecord& p : pool) {
    if (p.id == record.id) continue;
    if (tpl.fewshot == FewshotMode::SMALL ? p.length < record.length
                                          : p.length == record.length) {
      eligible.push_back(&p);
    }
  }
  const int needed = plain_needed + (explained ? 1 : 0);
  if (static_cast<int>(eligible.size()) < needed) {
    throw Error("PoolTooSmall: need " + std::to_string(needed) + " demonstrations, pool has " +
                std::to_string(eligible.size()) + " eligible records");
  }

  std::string out;
  std::size_t demo_at = 0;
  switch (tpl.instruction) {
    case InstructionTemplate::BARE:
      break;
    case InstructionTemplate::SIMPLE_RULE:
    case InstructionTemplate::SIMPLE_RULE_EXPLAINED:
      if (!is_copy_task(record.task)) {
        if (tpl.separator == SeparatorMode::SEP) {
          out += "Each line is written as 'context " + separator + " query: target'.\n";
          out += "The separator '" + separator +
                 "' separates the context from the query token.\n";
        } else {
          out += "Each line is written as 'context query: target'; the final token of the "
                 "string is the query token.\n";
        }
      }
      out += "All strings below follow this rule: " + simple_rule(record.task) + "\n";
      break;
    case InstructionTemplate::MATH_RULE:
    case InstructionTemplate::MATH_RULE_EXPLAINED:
      out += "Let $X = x_1 \\ldots x_n$ with $n \\ge 4$ and $x_i \\in \\Sigma$ (token "
             "vocabulary).\n";
      out += "The final token $x_n$ is the query token $q$. In the context $x_1 \\ldots "
             "x_{n-1}$,\n";
      out += "$q$ appears $t$ times at indices $q_1, \\ldots, q_t$ ($1 \\le q_1 \\le q_t \\le "
             "n-1$).\n";
      out += "Continuation token $x_{n+1}$ is defined by: " + math_rule(record.task) + "\n";
      break;
  }
  if (explained) {
    out += worked_example(*eligible[demo_at], tpl.separator, separator) + "\n";
    ++demo_at;
  }
  if (tpl.instruction == InstructionTemplate::MATH_RULE ||
      tpl.instruction == InstructionTemplate::MATH_RULE_EXPLAINED) {
    out += "Examples:\n";
  }
  for (int d = 0; d < plain_needed; ++d, ++demo_at) {
    out += demo_line(*eligible[demo_at], tpl.separator, separator) + "\n";
  }
  out += query_line(record, tpl.separator, separator);
  return out;
}

}  // namespace crasplab
