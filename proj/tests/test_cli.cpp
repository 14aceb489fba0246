#include <filesystem>
#include <fstream>

#include "cli_app.hpp"
#include "crasplab/records.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using crasplab::read_records;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "crasplab_cli_test") {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("every flag and subcommand carries help text") {
  CHECK(crasplab::cli::undocumented_options().empty());
}

TEST_CASE("gen writes records and exits zero") {
  TempDir tmp;
  std::string out = tmp.file("nrlast.jsonl");
  int rc = crasplab::cli::run({"gen", "--task", "NRLast", "--lengths", "10,20", "--count", "25",
                               "--seed", "3", "--out", out});
  CHECK(rc == 0);
  auto records = read_records(out);
  CHECK(records.size() == 50);

  // The header comment logs the resolved semantic configuration.
  std::ifstream in(out);
  std::string first;
  std::getline(in, first);
  CHECK(first.find("# config") == 0);
  CHECK(first.find("\"seed\":3") != std::string::npos);
  CHECK(first.find("workers") == std::string::npos);
}

TEST_CASE("gen produces count-per-length records over the five paper lengths") {
  TempDir tmp;
  std::string out = tmp.file("grid.jsonl");
  int rc = crasplab::cli::run({"gen", "--task", "NRLast", "--lengths", "10,20,30,40,50",
                               "--count", "1500", "--seed", "3", "--out", out});
  CHECK(rc == 0);
  CHECK(read_records(out).size() == 7500);
}

TEST_CASE("gen rejects infeasible requests with exit code 2") {
  TempDir tmp;
  int rc = crasplab::cli::run({"gen", "--task", "NRLast", "--lengths", "3", "--count", "5",
                               "--out", tmp.file("x.jsonl")});
  CHECK(rc == 2);
  rc = crasplab::cli::run({"gen", "--task", "UF", "--lengths", "80", "--count", "5", "--out",
                           tmp.file("y.jsonl")});
  CHECK(rc == 2);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(crasplab::cli::run({"frobnicate"}) == 2);
  CHECK(crasplab::cli::run({"gen", "--task", "UR", "--count", "5", "--out", "/tmp/x"}) == 2);
  CHECK(crasplab::cli::run({"run", "--program", "/nonexistent.crasp", "--input", "a"}) == 3);
}

TEST_CASE("verify exits 1 for tasks without a construction") {
  CHECK(crasplab::cli::run({"verify", "--task", "NF"}) == 1);
  CHECK(crasplab::cli::run({"verify", "--task", "NLLast"}) == 1);
}

TEST_CASE("verify passes on a small expressible run") {
  CHECK(crasplab::cli::run({"verify", "--task", "UL", "--bins", "3:12", "--samples", "20",
                            "--seed", "5"}) == 0);
}

TEST_CASE("verify --all-expressible covers all six constructions") {
  CHECK(crasplab::cli::run({"verify", "--all-expressible", "--bins", "4:16", "--samples", "8",
                            "--seed", "5"}) == 0);
}

TEST_CASE("score and analyze run end to end on generated data") {
  TempDir tmp;
  std::string recs = tmp.file("recs.jsonl");
  REQUIRE(crasplab::cli::run({"gen", "--task", "NF", "--lengths", "8", "--count", "10", "--out",
                              recs}) == 0);
  auto records = read_records(recs);

  std::string preds = tmp.file("preds.jsonl");
  {
    std::ofstream out(preds);
    for (std::size_t i = 0; i < records.size(); ++i) {
      // Half exact, half with a dropped token.
      std::string output = records[i].target;
      if (i % 2 == 1) output = output.substr(0, output.size() - 2);
      out << "{\"id\":\"" << records[i].id << "\",\"output\":\"" << output << "\"}\n";
    }
  }
  CHECK(crasplab::cli::run({"score", "--records", recs, "--preds", preds, "--out",
                            tmp.file("score.jsonl")}) == 0);
  CHECK(crasplab::cli::run({"analyze", "--records", recs, "--preds", preds, "--out",
                            tmp.file("report.jsonl")}) == 0);
  CHECK(fs::exists(tmp.file("report.jsonl")));

  std::string dup = tmp.file("dup.jsonl");
  {
    std::ofstream out(dup);
    out << "{\"id\":\"a\",\"output\":\"x\"}\n{\"id\":\"a\",\"output\":\"x\"}\n";
  }
  CHECK(crasplab::cli::run({"score", "--records", recs, "--preds", dup}) == 1);
}

TEST_CASE("prompt renders against a pool file") {
  TempDir tmp;
  std::string recs = tmp.file("eval.jsonl");
  REQUIRE(crasplab::cli::run({"gen", "--task", "UR", "--lengths", "6,12", "--count", "8", "--out",
                              recs}) == 0);
  std::string out = tmp.file("prompts.jsonl");
  CHECK(crasplab::cli::run({"prompt", "--records", recs, "--template", "math_rule", "--fewshot",
                            "same", "--out", out, "--limit", "4"}) == 0);
  std::ifstream in(out);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 5);  // header + 4 prompts
}

TEST_CASE("config files supply defaults that flags override") {
  TempDir tmp;
  std::string cfg = tmp.file("gen.ini");
  {
    std::ofstream out(cfg);
    out << "[gen]\ntask=NRLast\nlengths=10\ncount=5\nseed=9\nout=" << tmp.file("cfg.jsonl")
        << "\n";
  }
  CHECK(crasplab::cli::run({"--config", cfg, "gen", "--count", "7"}) == 0);
  CHECK(read_records(tmp.file("cfg.jsonl")).size() == 7);
}
