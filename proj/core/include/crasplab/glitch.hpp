#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "crasplab/align.hpp"
#include "crasplab/records.hpp"

namespace crasplab {

// Per source-token-type successor sets. A type is unambiguous when all of its
// occurrences with a successor share one successor type; a type that only
// occurs at the final position (no successor anywhere) counts as unambiguous.
struct AmbiguityMap {
  std::map<std::string, std::set<std::string>> successors;

  bool ambiguous(const std::string& token) const;
  std::int64_t ambiguous_types() const;
  std::int64_t unambiguous_types() const;
};

AmbiguityMap classify_tokens(std::span<const std::string> src);

struct Transition {
  std::int32_t src_index = -1;  // -1: misaligned span at the very start
  std::string token;            // empty for the synthetic -1 transition
  bool ambiguous = false;
};

struct TransitionReport {
  std::vector<AlignmentOp> ops;
  std::vector<SpanGroup> groups;
  std::vector<Transition> transitions;  // excludes the synthetic -1 entry
  bool leading_misalignment = false;
  bool length_ok = false;  // output within the length filter
  std::int64_t src_tokens = 0;
  std::int64_t out_tokens = 0;
};

// align -> group -> transitions -> ambiguity lookup. The length filter flags
// outputs shorter than `min_length_ratio` of the source; aggregation skips
// pairs that fail it.
TransitionReport analyze(std::span<const std::string> src, std::span<const std::string> out,
                         const AlignScoring& scoring = {}, double min_length_ratio = 0.75);

struct GlitchAggregate {
  std::int64_t pairs = 0;
  std::int64_t eligible_pairs = 0;
  std::int64_t transitions = 0;
  std::int64_t ambiguous_transitions = 0;
  std::int64_t unambiguous_transitions = 0;
  std::int64_t leading_misalignments = 0;
  std::int64_t perfect_copies = 0;

  void add(const TransitionReport& report);
  void merge(const GlitchAggregate& other);
  std::string table() const;
};

// Exact-match accuracy of externally produced outputs, per task and length
// bin. Records with no prediction count as errors and are listed separately.
struct ScoreRow {
  std::string task;
  int min_len = 0;
  int max_len = 0;
  std::int64_t total = 0;
  std::int64_t correct = 0;
  std::int64_t missing = 0;

  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

struct ScoreTable {
  std::vector<ScoreRow> rows;
  std::vector<std::string> missing_ids;

  std::string table() const;
  std::string to_jsonl() const;
};

// Empty bins: one bin per distinct record length.
ScoreTable score_outputs(const std::vector<DatasetRecord>& records,
                         const std::map<std::string, std::string>& predictions,
                         const std::vector<std::pair<int, int>>& bins = {});

// Line-delimited {"id": ..., "output": ...}; duplicate ids are an error.
std::map<std::string, std::string> parse_predictions(std::istream& in, const std::string& origin);
std::map<std::string, std::string> read_predictions(const std::string& path);

}  // namespace crasplab
