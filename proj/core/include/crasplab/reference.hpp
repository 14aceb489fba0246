#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crasplab/program.hpp"
#include "crasplab/tasks.hpp"

namespace crasplab {

// Which tasks ship with a bundled construction. For the others no program
// exists in this operation set; they are verified against oracles only.
struct Expressibility {
  TaskKind task;
  bool expressible = false;
  std::string program_source;  // DSL text when expressible
  std::string note;            // reason when not
};

// The bundled construction for a task, rendered as DSL text over the given
// content alphabet (default: the 62 letters+digits). Retrieval programs are
// a PRED / CBIGRAM / NEXT pipeline; the first-occurrence variants add an
// ISLEFTMOST gate; the copy programs add a restart clause at the separator
// and a DONE gate that halts generation after the end marker.
Expressibility program_for(TaskKind task, std::span<const Symbol> alphabet = {});

// Same construction built directly as an AST. Structurally identical to
// parse_program(program_for(task, alphabet).program_source); tests pin that.
Program build_reference_program(TaskKind task, std::span<const Symbol> alphabet = {});

const std::vector<TaskKind>& expressible_tasks();

// Program-facing views of task instances.
std::vector<Symbol> retrieval_program_input(const RetrievalInstance& instance);
std::vector<Symbol> copy_program_prefix(const CopyInstance& instance);
// UF emits the separator once after the copy, UB emits the begin marker; the
// harness strips it before comparing against the oracle.
Symbol copy_end_marker(TaskKind kind);

struct LengthBin {
  int min_len = 0;
  int max_len = 0;
};

struct VerificationMismatch {
  int bin_index = 0;
  std::int64_t instance_index = 0;
  std::string input;
  std::string program_output;
  std::string oracle_output;
};

struct BinResult {
  LengthBin bin;
  std::int64_t checked = 0;
  std::int64_t mismatches = 0;
};

struct VerificationReport {
  TaskKind task = TaskKind::UL;
  int samples_per_bin = 0;
  std::uint64_t seed = 0;
  std::vector<BinResult> bins;
  std::vector<VerificationMismatch> mismatches;
  double elapsed_seconds = 0.0;

  bool passed() const { return mismatches.empty(); }
  std::string table() const;
  // Line-delimited form; excludes wall time so reruns and different worker
  // counts serialize byte-identically.
  std::string to_jsonl() const;
};

std::vector<LengthBin> default_verification_bins(TaskKind task);
std::vector<LengthBin> parse_bins(const std::string& text);  // "4:50,51:100"

// Samples instances per bin, runs the bundled program (next_token for
// retrieval, generate for copy), and compares against the oracle.
// Deterministic given the seed for any worker count. Throws
// NotExpressibleError for tasks without a construction.
VerificationReport verify_program(TaskKind task, std::span<const LengthBin> bins,
                                  int samples_per_bin, std::uint64_t seed, int workers = 0);

}  // namespace crasplab
