#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "crasplab/records.hpp"

namespace crasplab {

using Tokenizer = std::function<std::vector<std::string>(const std::string&)>;

std::vector<std::string> whitespace_tokenize(const std::string& text);

// Paragraph corpus for copy-fidelity experiments. Each paragraph is built to
// exactly `sentence_target` sentences from a bundled word list, with three
// seeded perturbations drawn in this order per sentence: repeat-sentence
// (p=0.3, up to four extra copies), duplicate-words (p=0.5), and a word
// shuffle that keeps the leading capitalized word (always). The finished
// paragraph is truncated to `token_budget` tokens under the tokenizer.
struct LoremSpec {
  int count = 1500;
  std::uint64_t seed = 0;
  int sentence_target = 45;
  int token_budget = 500;
  Tokenizer tokenizer;  // empty: whitespace
};

std::vector<DatasetRecord> gen_lorem(const LoremSpec& spec, int workers = 0);

// Synthetic commit-log snippets, newest to oldest. Each record stores the
// snippet, the same lines as `revert`, and the reversed lines as
// `cherrypick`. Hashes are seven lowercase hex characters, unique within a
// snippet; messages pair one of twelve verbs with one of ten subsystems.
struct GitSpec {
  std::vector<int> depths = {10, 15, 20, 25};
  std::vector<std::uint64_t> seeds = {0, 1, 2};
  int count_per_cell = 1500;
};

std::vector<DatasetRecord> gen_git_histories(const GitSpec& spec, int workers = 0);

const std::vector<std::string>& git_verbs();       // 12 entries
const std::vector<std::string>& git_subsystems();  // 10 entries

}  // namespace crasplab
