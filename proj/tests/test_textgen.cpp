#include <regex>
#include <set>
#include <sstream>

#include "crasplab/textgen.hpp"
#include "doctest.h"

using namespace crasplab;

namespace {

int count_sentences(const std::string& paragraph) {
  int n = 0;
  for (const std::string& tok : whitespace_tokenize(paragraph)) {
    n += tok.find('.') != std::string::npos;
  }
  return n;
}

}  // namespace

TEST_CASE("lorem paragraphs meet the sentence and token contracts") {
  LoremSpec spec;
  spec.count = 40;
  spec.seed = 5;
  auto records = gen_lorem(spec);
  REQUIRE(records.size() == 40);
  for (const auto& r : records) {
    CHECK(whitespace_tokenize(r.input).size() <= 500);
    CHECK(r.meta.at("sentences_pre_truncation") == "45");
    CHECK(r.target == r.input);
  }

  // Without a token budget the full paragraphs are visible: exactly 45
  // period-carrying tokens each, and truncation is a strict prefix.
  LoremSpec full = spec;
  full.token_budget = 1 << 20;
  auto full_records = gen_lorem(full);
  for (std::size_t i = 0; i < full_records.size(); ++i) {
    CHECK(count_sentences(full_records[i].input) == 45);
    CHECK(full_records[i].input.substr(0, records[i].input.size()) == records[i].input);
  }
}

TEST_CASE("lorem generation is seeded and perturbations fire") {
  LoremSpec spec;
  spec.count = 30;
  spec.seed = 9;
  auto a = gen_lorem(spec, 1);
  auto b = gen_lorem(spec, 8);
  CHECK(a == b);

  // Sentence repetition shows up as identical consecutive sentences in a
  // reasonable fraction of paragraphs.
  int with_repeat = 0;
  for (const auto& r : a) {
    auto toks = whitespace_tokenize(r.input);
    std::vector<std::string> sentences(1);
    for (const auto& t : toks) {
      sentences.back() += t + " ";
      if (t.find('.') != std::string::npos) sentences.emplace_back();
    }
    std::set<std::string> uniq(sentences.begin(), sentences.end());
    with_repeat += uniq.size() < sentences.size();
  }
  CHECK(with_repeat > 5);
}

TEST_CASE("custom tokenizer drives the budget") {
  LoremSpec spec;
  spec.count = 3;
  spec.token_budget = 40;
  spec.tokenizer = [](const std::string& text) {
    // Character-level tokens make the budget much tighter.
    std::vector<std::string> out;
    for (char c : text) out.emplace_back(1, c);
    return out;
  };
  for (const auto& r : gen_lorem(spec)) CHECK(r.input.size() <= 40);
}

TEST_CASE("git histories carry the documented keys and orders") {
  GitSpec spec;
  spec.depths = {6, 8};
  spec.seeds = {0, 1};
  spec.count_per_cell = 25;
  auto records = gen_git_histories(spec);
  REQUIRE(records.size() == 2 * 2 * 25);

  const std::regex hash_re("^[0-9a-f]{7}$");
  for (const auto& r : records) {
    const std::string& snippet = r.extras.at("snippet");
    CHECK(r.extras.at("revert") == snippet);
    CHECK(r.input == snippet);

    std::vector<std::string> lines;
    std::stringstream ss(snippet);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    CHECK(static_cast<int>(lines.size()) == r.length);

    std::set<std::string> hashes;
    for (const auto& l : lines) {
      std::string hash = l.substr(0, l.find(' '));
      CHECK(std::regex_match(hash, hash_re));
      hashes.insert(hash);
    }
    CHECK(hashes.size() == lines.size());

    std::string rebuilt;
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
      if (!rebuilt.empty()) rebuilt += '\n';
      rebuilt += *it;
    }
    CHECK(r.extras.at("cherrypick") == rebuilt);
  }
}

TEST_CASE("git vocabulary sizes are pinned") {
  CHECK(git_verbs().size() == 12);
  CHECK(git_subsystems().size() == 10);
}

TEST_CASE("git generation is worker-independent") {
  GitSpec spec;
  spec.depths = {5};
  spec.seeds = {7};
  spec.count_per_cell = 50;
  auto a = gen_git_histories(spec, 1);
  auto b = gen_git_histories(spec, 8);
  CHECK(a == b);
}
