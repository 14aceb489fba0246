#include "crasplab/textgen.hpp"

#include <algorithm>
#include <cctype>

#include "crasplab/parallel.hpp"
#include "crasplab/rng.hpp"

namespace crasplab {

namespace {

// The traditional filler vocabulary.
const std::vector<std::string>& lorem_words() {
  static const std::vector<std::string> words = {
      "lorem",      "ipsum",     "dolor",     "sit",        "amet",       "consectetur",
      "adipiscing", "elit",      "sed",       "do",         "eiusmod",    "tempor",
      "incididunt", "ut",        "labore",    "et",         "dolore",     "magna",
      "aliqua",     "enim",      "ad",        "minim",      "veniam",     "quis",
      "nostrud",    "exercitation", "ullamco", "laboris",   "nisi",       "aliquip",
      "ex",         "ea",        "commodo",   "consequat",  "duis",       "aute",
      "irure",      "in",        "reprehenderit", "voluptate", "velit",   "esse",
      "cillum",     "eu",        "fugiat",    "nulla",      "pariatur",   "excepteur",
      "sint",       "occaecat",  "cupidatat", "non",        "proident",   "sunt",
      "culpa",      "qui",       "officia",   "deserunt",   "mollit",     "anim",
      "id",         "est",       "laborum",   "neque",      "porro",      "quisquam",
  };
  return words;
}

std::string capitalize(std::string word) {
  if (!word.empty()) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
  return word;
}

std::vector<std::string> make_sentence(Rng& rng) {
  const auto& vocab = lorem_words();
  const int n_words = rng.range(5, 12);
  std::vector<std::string> words(n_words);
  for (int i = 0; i < n_words; ++i) words[i] = vocab[rng.below(vocab.size())];
  words[0] = capitalize(words[0]);
  return words;
}

void duplicate_random_words(std::vector<std::string>& words, Rng& rng) {
  const int n_dups = rng.range(1, 3);
  for (int d = 0; d < n_dups; ++d) {
    std::size_t at = rng.below(words.size());
    std::string copy = words[at];
    words.insert(words.begin() + at, copy);
  }
}

void shuffle_keep_lead(std::vector<std::string>& words, Rng& rng) {
  if (words.size() <= 2) return;
  for (std::size_t i = words.size() - 1; i > 1; --i) {
    std::size_t j = 1 + rng.below(i);
    std::swap(words[i], words[j]);
  }
}

std::string build_paragraph(const LoremSpec& spec, Rng& rng, int& sentences_out) {
  std::vector<std::vector<std::string>> sentences;
  while (static_cast<int>(sentences.size()) < spec.sentence_target) {
    // Draw order per fresh sentence: repeat decision, word duplication, shuffle.
    int copies = 1;
    if (rng.chance(0.3)) copies += rng.range(1, 4);
    std::vector<std::string> words = make_sentence(rng);
    if (rng.chance(0.5)) duplicate_random_words(words, rng);
    shuffle_keep_lead(words, rng);
    words.back() += ".";  // one period per sentence, after all word noise
    for (int rep = 0; rep < copies && static_cast<int>(sentences.size()) < spec.sentence_target;
         ++rep) {
      sentences.push_back(words);
    }
  }
  sentences_out = static_cast<int>(sentences.size());

  std::string paragraph;
  for (const auto& sentence : sentences) {
    for (const std::string& w : sentence) {
      if (!paragraph.empty()) paragraph += ' ';
      paragraph += w;
    }
  }
  return paragraph;
}

// Longest prefix of the text whose token count fits the budget, so the
// truncated paragraph stays a verbatim prefix under any tokenizer.
std::string truncate_tokens(const std::string& text, int budget, const Tokenizer& tok) {
  if (static_cast<int>(tok(text).size()) <= budget) return text;
  std::size_t lo = 0, hi = text.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi + 1) / 2;
    if (static_cast<int>(tok(text.substr(0, mid)).size()) <= budget) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  std::string out = text.substr(0, lo);
  while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
  return out;
}

}  // namespace

std::vector<std::string> whitespace_tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

std::vector<DatasetRecord> gen_lorem(const LoremSpec& spec, int workers) {
  const Tokenizer tok = spec.tokenizer ? spec.tokenizer : whitespace_tokenize;
  std::vector<DatasetRecord> records(spec.count);
  parallel_chunks(records.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = substream(spec.seed, {0x4C4F52454Dull /*LOREM*/, i});
      int sentences = 0;
      std::string full = build_paragraph(spec, rng, sentences);
      std::string truncated = truncate_tokens(full, spec.token_budget, tok);

      DatasetRecord& r = records[i];
      r.id = "lorem-s" + std::to_string(spec.seed) + "-" + std::to_string(i);
      r.task = "lorem";
      r.input = truncated;
      r.target = truncated;
      r.length = static_cast<int>(tok(truncated).size());
      r.seed = spec.seed;
      r.split = Split::test;
      r.meta["sentences_pre_truncation"] = std::to_string(sentences);
    }
  });
  return records;
}

const std::vector<std::string>& git_verbs() {
  static const std::vector<std::string> verbs = {
      "fix",  "add",     "update",   "remove", "refactor", "optimize",
      "test", "document", "simplify", "rework", "harden",  "extend",
  };
  return verbs;
}

const std::vector<std::string>& git_subsystems() {
  static const std::vector<std::string> subsystems = {
      "parser", "scheduler", "cache",  "logging", "network",
      "storage", "auth",     "metrics", "cli",     "build",
  };
  return subsystems;
}

std::vector<DatasetRecord> gen_git_histories(const GitSpec& spec, int workers) {
  struct Cell {
    int depth;
    std::uint64_t seed;
    std::int64_t index;
  };
  std::vector<Cell> cells;
  cells.reserve(spec.depths.size() * spec.seeds.size() * spec.count_per_cell);
  for (int depth : spec.depths) {
    for (std::uint64_t seed : spec.seeds) {
      for (std::int64_t k = 0; k < spec.count_per_cell; ++k) cells.push_back({depth, seed, k});
    }
  }

  std::vector<DatasetRecord> records(cells.size());
  parallel_chunks(cells.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Cell& cell = cells[i];
      Rng rng = substream(cell.seed, {0x474954ull /*GIT*/, static_cast<std::uint64_t>(cell.depth),
                                      static_cast<std::uint64_t>(cell.index)});
      std::vector<std::string> lines(cell.depth);
      std::vector<std::uint32_t> hashes;
      hashes.reserve(cell.depth);
      for (int c = 0; c < cell.depth; ++c) {
        std::uint32_t h;
        do {
          h = static_cast<std::uint32_t>(rng.below(1u << 28));  // 7 hex digits
        } while (std::find(hashes.begin(), hashes.end(), h) != hashes.end());
        hashes.push_back(h);
        char hex[8];
        std::snprintf(hex, sizeof(hex), "%07x", h);
        lines[c] = std::string(hex) + " " + git_verbs()[rng.below(git_verbs().size())] + " " +
                   git_subsystems()[rng.below(git_subsystems().size())];
      }
      std::string snippet;
      for (const std::string& l : lines) {
        if (!snippet.empty()) snippet += '\n';
        snippet += l;
      }
      std::string cherry;
      for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
        if (!cherry.empty()) cherry += '\n';
        cherry += *it;
      }

      DatasetRecord& r = records[i];
      r.id = "git-d" + std::to_string(cell.depth) + "-s" + std::to_string(cell.seed) + "-" +
             std::to_string(cell.index);
      r.task = "git";
      r.input = snippet;
      r.target = snippet;  // forward order, the revert answer
      r.length = cell.depth;
      r.seed = cell.seed;
      r.split = Split::test;
      r.meta["depth"] = std::to_string(cell.depth);
      r.extras["snippet"] = snippet;
      r.extras["revert"] = snippet;
      r.extras["cherrypick"] = cherry;
    }
  });
  return records;
}

}  // namespace crasplab
