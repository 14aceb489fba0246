#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace crasplab {

enum class AlignOpKind : std::uint8_t { Match, Insert, Delete, Substitute };

const char* align_op_name(AlignOpKind kind);

// One step of a token-level alignment. Match/Substitute carry both indices,
// Insert only out_index, Delete only src_index (-1 marks the absent side).
struct AlignmentOp {
  AlignOpKind kind;
  std::int32_t src_index = -1;
  std::int32_t out_index = -1;

  bool operator==(const AlignmentOp&) const = default;
};

struct AlignScoring {
  int match = 1;
  int mismatch = -1;
  int gap = -1;
};

// Global alignment, maximal score under the scoring. Ties are broken while
// walking the alignment front to back: continuing the current span type
// first (the leading region counts as misaligned), then match > substitute
// > delete > insert. This keeps matched prefixes long and gap runs
// contiguous.
std::vector<AlignmentOp> align(std::span<const std::string> src,
                               std::span<const std::string> out,
                               const AlignScoring& scoring = {});

int alignment_score(std::span<const AlignmentOp> ops, const AlignScoring& scoring = {});

// Maximal run of match ops (aligned) or of non-match ops (misaligned).
struct SpanGroup {
  bool aligned = false;
  std::int32_t first_op = 0;
  std::int32_t last_op = 0;  // inclusive

  bool operator==(const SpanGroup&) const = default;
};

std::vector<SpanGroup> group_spans(std::span<const AlignmentOp> ops);

}  // namespace crasplab
