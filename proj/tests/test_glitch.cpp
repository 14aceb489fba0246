#include <set>
#include <sstream>

#include "crasplab/errors.hpp"
#include "crasplab/glitch.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace crasplab;
using testutil::BruteForceAlignment;

namespace {

std::vector<std::string> toks(const std::string& spaced) {
  std::vector<std::string> out;
  std::stringstream ss(spaced);
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

std::vector<std::string> random_tokens(Rng& rng, int max_len, int alphabet = 3) {
  std::vector<std::string> out(rng.below(max_len + 1));
  for (auto& t : out) t = std::string(1, static_cast<char>('a' + rng.below(alphabet)));
  return out;
}

// The worked copy-fidelity pair: a fifteen-token source whose copy restarts
// after "am" and replays the tail.
const std::vector<std::string> kWorkedSrc = {
    "Ġne", "am",    "que", ".",   "ĠNon",  "Ġet", "inc", "idunt",
    "Ġdol", "orem", "Ġtemp", "ora", "Ġmagn", "am",  "."};
const std::vector<std::string> kWorkedOut = {
    "Ġne",  "am",   "que",   ".",   "ĠNon",  "Ġet", "inc", "idunt", "Ġdol", "orem",
    "Ġtemp", "ora", "Ġmagn", "am",  "Ġvelit", "Ġne", "que", ".",    "ĠNon", "Ġet",
    "inc",  "idunt", "Ġdol", "orem", "Ġtemp", "ora", "Ġmagn", "am",  "."};

}  // namespace

TEST_CASE("identity alignment is all matches") {
  auto src = toks("a b c a");
  auto ops = align(src, src);
  REQUIRE(ops.size() == 4);
  for (const auto& op : ops) CHECK(op.kind == AlignOpKind::Match);
  auto groups = group_spans(ops);
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].aligned);
}

TEST_CASE("the two-versus-three token example aligns match, insert, match") {
  auto src = toks("a b");
  auto out = toks("a c b");
  auto ops = align(src, out);
  REQUIRE(ops.size() == 3);
  CHECK(ops[0].kind == AlignOpKind::Match);
  CHECK(ops[1].kind == AlignOpKind::Insert);
  CHECK(ops[1].out_index == 1);
  CHECK(ops[2].kind == AlignOpKind::Match);

  auto brute = BruteForceAlignment::run(src, out);
  CHECK(alignment_score(ops) == brute.best_score);
  CHECK(brute.optimal_count == 1);  // unique optimum; no tie-break needed
  CHECK(brute.one_optimal == ops);
}

TEST_CASE("dynamic programming matches brute force exhaustively up to 4x4") {
  std::vector<std::vector<std::string>> all;
  all.push_back({});
  std::size_t begin = 0;
  for (int len = 1; len <= 4; ++len) {
    std::size_t end = all.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (char c : {'a', 'b', 'c'}) {
        auto next = all[i];
        next.emplace_back(1, c);
        all.push_back(std::move(next));
      }
    }
    begin = end;
  }
  REQUIRE(all.size() == 121);
  for (const auto& src : all) {
    for (const auto& out : all) {
      auto ops = align(src, out);
      auto brute = BruteForceAlignment::run(src, out);
      CHECK(alignment_score(ops) == brute.best_score);
    }
  }
}

TEST_CASE("dynamic programming matches brute force on random pairs up to 8x8") {
  Rng rng = substream(41, {1});
  for (int trial = 0; trial < 500; ++trial) {
    auto src = random_tokens(rng, 8);
    auto out = random_tokens(rng, 8);
    auto ops = align(src, out);
    CHECK(alignment_score(ops) == BruteForceAlignment::run(src, out).best_score);
  }
}

TEST_CASE("alignments reconstruct both index sequences") {
  Rng rng = substream(41, {2});
  for (int trial = 0; trial < 10000; ++trial) {
    auto src = random_tokens(rng, 12, 2 + static_cast<int>(rng.below(3)));
    auto out = random_tokens(rng, 12, 2 + static_cast<int>(rng.below(3)));
    auto ops = align(src, out);
    std::vector<std::int32_t> src_seen, out_seen;
    for (const auto& op : ops) {
      if (op.kind == AlignOpKind::Insert) {
        CHECK(op.src_index == -1);
      } else {
        src_seen.push_back(op.src_index);
      }
      if (op.kind == AlignOpKind::Delete) {
        CHECK(op.out_index == -1);
      } else {
        out_seen.push_back(op.out_index);
      }
    }
    REQUIRE(src_seen.size() == src.size());
    REQUIRE(out_seen.size() == out.size());
    for (std::size_t i = 0; i < src_seen.size(); ++i) CHECK(src_seen[i] == (std::int32_t)i);
    for (std::size_t i = 0; i < out_seen.size(); ++i) CHECK(out_seen[i] == (std::int32_t)i);
  }
}

TEST_CASE("maximality: alternating ops group one by one") {
  auto src = toks("a b c");
  auto out = toks("a x b y c");
  auto ops = align(src, out);
  auto groups = group_spans(ops);
  REQUIRE(groups.size() == 5);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    CHECK(groups[g].first_op == groups[g].last_op);
    CHECK(groups[g].aligned == (g % 2 == 0));
  }
}

TEST_CASE("token classification by successor sets") {
  auto map = classify_tokens(toks("a b a c"));
  CHECK(map.ambiguous("a"));       // successors {b, c}
  CHECK(!map.ambiguous("b"));      // successor {a}
  CHECK(!map.ambiguous("c"));      // final position only
  CHECK(map.ambiguous_types() == 1);
  CHECK(map.unambiguous_types() == 2);

  auto single = classify_tokens(toks("z"));
  CHECK(!single.ambiguous("z"));
  CHECK(single.unambiguous_types() == 1);
}

TEST_CASE("ambiguous plus unambiguous types partition the vocabulary") {
  Rng rng = substream(41, {3});
  for (int trial = 0; trial < 300; ++trial) {
    auto src = random_tokens(rng, 40, 2 + static_cast<int>(rng.below(5)));
    auto map = classify_tokens(src);
    std::set<std::string> types(src.begin(), src.end());
    CHECK(map.ambiguous_types() + map.unambiguous_types() ==
          static_cast<std::int64_t>(types.size()));
  }
}

TEST_CASE("the worked pair reports spans, transition 13, and an ambiguous token") {
  TransitionReport report = analyze(kWorkedSrc, kWorkedOut);
  REQUIRE(report.ops.size() == 29);  // the paper prints 28 and leaves the
                                     // final source period unconsumed; the
                                     // optimal alignment matches it
  for (int k = 0; k <= 13; ++k) CHECK(report.ops[k].kind == AlignOpKind::Match);
  for (int k = 14; k <= 27; ++k) {
    CHECK(report.ops[k].kind == AlignOpKind::Insert);
    CHECK(report.ops[k].out_index == k);
  }
  CHECK(report.ops[28].kind == AlignOpKind::Match);

  REQUIRE(report.groups.size() == 3);
  CHECK(report.groups[0] == SpanGroup{true, 0, 13});
  CHECK(report.groups[1] == SpanGroup{false, 14, 27});
  CHECK(report.groups[2] == SpanGroup{true, 28, 28});

  REQUIRE(report.transitions.size() == 1);
  CHECK(report.transitions[0].src_index == 13);
  CHECK(report.transitions[0].token == "am");
  CHECK(report.transitions[0].ambiguous);
  CHECK(report.length_ok);
  CHECK(!report.leading_misalignment);
}

TEST_CASE("perfect copies have no transitions; short outputs fail the filter") {
  auto src = toks("a b c d");
  TransitionReport perfect = analyze(src, src);
  CHECK(perfect.transitions.empty());
  CHECK(perfect.length_ok);

  TransitionReport tiny = analyze(src, toks("a"));
  CHECK(!tiny.length_ok);

  GlitchAggregate agg;
  agg.add(perfect);
  agg.add(tiny);
  CHECK(agg.pairs == 2);
  CHECK(agg.eligible_pairs == 1);
  CHECK(agg.perfect_copies == 1);
  CHECK(agg.transitions == 0);
}

TEST_CASE("a leading misalignment is tallied separately") {
  TransitionReport report = analyze(toks("a b c"), toks("x a b c"));
  CHECK(report.leading_misalignment);
  CHECK(report.transitions.empty());
  GlitchAggregate agg;
  agg.add(report);
  CHECK(agg.leading_misalignments == 1);
}

TEST_CASE("a corpus diverging only after repeated bigrams is fully ambiguous") {
  Rng rng = substream(41, {4});
  GlitchAggregate agg;
  for (int trial = 0; trial < 100; ++trial) {
    // Source: distinct prefix, then X a ... X b. Output: copy through the
    // first X, then fresh tokens. The only transition lands on X, whose
    // successor set is {a, b}.
    const int prefix_len = 2 + static_cast<int>(rng.below(4));
    std::vector<std::string> src;
    for (int i = 0; i < prefix_len; ++i) src.push_back("d" + std::to_string(i));
    src.push_back("X");
    const std::size_t first_x = src.size() - 1;
    src.push_back("a");
    src.push_back("d" + std::to_string(prefix_len));
    src.push_back("X");
    src.push_back("b");

    std::vector<std::string> out(src.begin(), src.begin() + first_x + 1);
    while (out.size() < src.size()) out.push_back("z" + std::to_string(out.size()));

    TransitionReport report = analyze(src, out);
    REQUIRE(report.transitions.size() == 1);
    CHECK(report.transitions[0].src_index == static_cast<std::int32_t>(first_x));
    CHECK(report.transitions[0].token == "X");
    agg.add(report);
  }
  CHECK(agg.transitions == 100);
  CHECK(agg.ambiguous_transitions == 100);
  CHECK(agg.unambiguous_transitions == 0);
}

TEST_CASE("appending an identical suffix never adds transitions") {
  Rng rng = substream(41, {5});
  for (int trial = 0; trial < 300; ++trial) {
    auto src = random_tokens(rng, 6);
    auto out = random_tokens(rng, 6);
    auto suffix = random_tokens(rng, 4);
    const auto before = analyze(src, out, {}, 0.0).transitions.size();
    src.insert(src.end(), suffix.begin(), suffix.end());
    out.insert(out.end(), suffix.begin(), suffix.end());
    const auto after = analyze(src, out, {}, 0.0).transitions.size();
    CHECK(after <= before);
  }
}

TEST_CASE("scoring: exact match per bin, missing and duplicate handling") {
  std::vector<DatasetRecord> records;
  for (int i = 0; i < 8; ++i) {
    DatasetRecord r;
    r.id = "r" + std::to_string(i);
    r.task = i < 4 ? "UR" : "UL";
    r.length = i % 2 == 0 ? 10 : 20;
    r.target = "t" + std::to_string(i);
    records.push_back(r);
  }
  std::map<std::string, std::string> preds;
  for (int i = 0; i < 7; ++i) {
    preds["r" + std::to_string(i)] = i % 2 == 0 ? "t" + std::to_string(i) : "wrong";
  }
  ScoreTable table = score_outputs(records, preds);
  REQUIRE(table.rows.size() == 4);
  for (const ScoreRow& row : table.rows) {
    if (row.min_len == 10) {
      CHECK(row.accuracy() == 1.0);
    } else if (row.task == "UR") {
      CHECK(row.accuracy() == 0.0);
    } else {
      CHECK(row.missing == 1);
      CHECK(row.accuracy() == 0.0);
    }
  }
  REQUIRE(table.missing_ids.size() == 1);
  CHECK(table.missing_ids[0] == "r7");

  std::stringstream dup("{\"id\":\"a\",\"output\":\"x\"}\n{\"id\":\"a\",\"output\":\"y\"}\n");
  CHECK_THROWS_AS((void)parse_predictions(dup, "test"), DuplicatePredictionKeyError);
  std::stringstream bad("not json\n");
  CHECK_THROWS_WITH_AS((void)parse_predictions(bad, "test"), doctest::Contains("test:1"),
                       IoError);
}

TEST_CASE("half correct at one length scores one half in that bin") {
  std::vector<DatasetRecord> records;
  std::map<std::string, std::string> preds;
  for (int i = 0; i < 10; ++i) {
    DatasetRecord r;
    r.id = "h" + std::to_string(i);
    r.task = "NRLast";
    r.length = 30;
    r.target = "t";
    records.push_back(r);
    preds[r.id] = i < 5 ? "t" : "wrong";
  }
  ScoreTable table = score_outputs(records, preds);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].accuracy() == 0.5);
  CHECK(table.rows[0].missing == 0);
}

TEST_CASE("explicit score bins group lengths") {
  std::vector<DatasetRecord> records;
  for (int len : {5, 15, 25, 35}) {
    DatasetRecord r;
    r.id = "L" + std::to_string(len);
    r.task = "UR";
    r.length = len;
    r.target = "x";
    records.push_back(r);
  }
  std::map<std::string, std::string> preds{{"L5", "x"}, {"L15", "x"}, {"L25", "y"}, {"L35", "y"}};
  ScoreTable table = score_outputs(records, preds, {{1, 20}, {21, 40}});
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].accuracy() == 1.0);
  CHECK(table.rows[1].accuracy() == 0.0);
}
