#include <set>
#include <sstream>

#include "crasplab/datagen.hpp"
#include "crasplab/prompts.hpp"
#include "doctest.h"

using namespace crasplab;

namespace {

// A record set with one evaluation record (length 10), five same-length
// records, and five shorter ones, so every grid cell can render.
struct Fixture {
  DatasetRecord record;
  std::vector<DatasetRecord> pool;

  explicit Fixture(TaskKind task) {
    GenSpec spec;
    spec.task = task;
    spec.lengths = {5, 10};
    spec.count = 6;
    spec.seed = 42;
    auto records = task_is_copy(task) ? gen_copy(spec) : gen_retrieval(spec);
    record = records[6];  // first length-10 record
    pool.assign(records.begin(), records.end());
  }
};

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("the grid enumerates exactly twenty distinct renderings") {
  Fixture fx(TaskKind::NRFirst);
  auto grid = prompt_grid();
  REQUIRE(grid.size() == 20);
  std::set<std::string> renderings;
  std::set<std::string> names;
  for (const PromptTemplate& tpl : grid) {
    renderings.insert(render_prompt(tpl, fx.record, fx.pool));
    names.insert(tpl.name());
  }
  CHECK(renderings.size() == 20);
  CHECK(names.size() == 20);
}

TEST_CASE("bare prompts are demonstration lines plus the unresolved query") {
  Fixture fx(TaskKind::UF);
  PromptTemplate tpl;
  tpl.instruction = InstructionTemplate::BARE;
  tpl.separator = SeparatorMode::SEP;
  tpl.fewshot = FewshotMode::SMALL;
  std::string prompt = render_prompt(tpl, fx.record, fx.pool);
  auto lines = lines_of(prompt);
  REQUIRE(lines.size() == 6);  // five demonstrations, one query line
  for (int i = 0; i < 5; ++i) {
    CAPTURE(lines[i]);
    CHECK(lines[i].find(" : ") != std::string::npos);
    CHECK(lines[i].find("⟨bos⟩ ") == 0);
    CHECK(lines[i].rfind("⟨eos⟩") == lines[i].size() - std::string("⟨eos⟩").size());
  }
  CHECK(lines[5].rfind(" :") == lines[5].size() - 2);

  // For retrieval the unresolved line must not leak the answer.
  Fixture ur(TaskKind::UR);
  PromptTemplate bare;
  auto ur_lines = lines_of(render_prompt(bare, ur.record, ur.pool));
  CHECK(ur_lines.back().find(" : " + ur.record.target) == std::string::npos);
}

TEST_CASE("separator mode controls the separator token") {
  Fixture fx(TaskKind::UR);
  PromptTemplate sep;
  sep.separator = SeparatorMode::SEP;
  PromptTemplate nosep;
  nosep.separator = SeparatorMode::NOSEP;
  std::string with = render_prompt(sep, fx.record, fx.pool);
  std::string without = render_prompt(nosep, fx.record, fx.pool);
  CHECK(with.find("||") != std::string::npos);
  CHECK(without.find("||") == std::string::npos);
}

TEST_CASE("fewshot modes pick different demonstration lengths") {
  Fixture fx(TaskKind::UR);
  PromptTemplate small;
  small.fewshot = FewshotMode::SMALL;
  PromptTemplate same;
  same.fewshot = FewshotMode::SAME;
  auto small_lines = lines_of(render_prompt(small, fx.record, fx.pool));
  auto same_lines = lines_of(render_prompt(same, fx.record, fx.pool));
  // Shorter demonstrations have fewer tokens than the query line.
  CHECK(small_lines[0].size() < small_lines.back().size());
  CHECK(same_lines[0].size() > small_lines[0].size());
}

TEST_CASE("rule templates inject the task's rule text") {
  Fixture fx(TaskKind::NRLast);
  PromptTemplate simple;
  simple.instruction = InstructionTemplate::SIMPLE_RULE;
  std::string s = render_prompt(simple, fx.record, fx.pool);
  CHECK(s.find("just to the right of its last appearance") != std::string::npos);

  PromptTemplate math;
  math.instruction = InstructionTemplate::MATH_RULE;
  std::string m = render_prompt(math, fx.record, fx.pool);
  CHECK(m.find("$t > 1$ and $x_{n+1} = x_{q_t+1}$") != std::string::npos);
  CHECK(m.find("Examples:") != std::string::npos);
  CHECK(m.find("token vocabulary") != std::string::npos);
}

TEST_CASE("explained templates reserve one slot for the worked example") {
  Fixture fx(TaskKind::NLFirst);
  PromptTemplate tpl;
  tpl.instruction = InstructionTemplate::SIMPLE_RULE_EXPLAINED;
  std::string prompt = render_prompt(tpl, fx.record, fx.pool);
  CHECK(prompt.find("Worked example:") != std::string::npos);
  int demos = 0;
  for (const auto& line : lines_of(prompt)) demos += line.find(" : ") != std::string::npos;
  CHECK(demos == 4);  // k-1 plain demonstrations
}

TEST_CASE("a pool without enough eligible records is an error") {
  Fixture fx(TaskKind::UR);
  std::vector<DatasetRecord> tiny(fx.pool.begin(), fx.pool.begin() + 3);
  PromptTemplate tpl;
  CHECK_THROWS_WITH_AS((void)render_prompt(tpl, fx.record, tiny), doctest::Contains("PoolTooSmall"),
                       Error);
  // The record itself never serves as its own demonstration.
  std::vector<DatasetRecord> self_only(5, fx.record);
  PromptTemplate same;
  same.fewshot = FewshotMode::SAME;
  CHECK_THROWS_WITH_AS((void)render_prompt(same, fx.record, self_only),
                       doctest::Contains("PoolTooSmall"), Error);
}

TEST_CASE("copy rules share wording across unique and repeated variants") {
  CHECK(simple_rule("UF") == simple_rule("NF"));
  CHECK(simple_rule("UB") == simple_rule("NB"));
  CHECK(simple_rule("UB").find("reverse order") != std::string::npos);
  CHECK_THROWS_AS((void)simple_rule("nope"), Error);
}
