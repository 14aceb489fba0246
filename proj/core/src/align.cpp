#include "crasplab/align.hpp"

#include <algorithm>

namespace crasplab {

const char* align_op_name(AlignOpKind kind) {
  switch (kind) {
    case AlignOpKind::Match: return "match";
    case AlignOpKind::Insert: return "insert";
    case AlignOpKind::Delete: return "delete";
    case AlignOpKind::Substitute: return "substitute";
  }
  return "?";
}

std::vector<AlignmentOp> align(std::span<const std::string> src,
                               std::span<const std::string> out, const AlignScoring& sc) {
  const std::int64_t n = static_cast<std::int64_t>(src.size());
  const std::int64_t m = static_cast<std::int64_t>(out.size());

  // W[i][j]: best score for src[i..) versus out[j..), filled bottom-up so the
  // traceback can walk forward from (0,0).
  std::vector<std::int32_t> w(static_cast<std::size_t>((n + 1) * (m + 1)));
  auto at = [&](std::int64_t i, std::int64_t j) -> std::int32_t& {
    return w[static_cast<std::size_t>(i * (m + 1) + j)];
  };
  at(n, m) = 0;
  for (std::int64_t j = m - 1; j >= 0; --j) at(n, j) = at(n, j + 1) + sc.gap;
  for (std::int64_t i = n - 1; i >= 0; --i) {
    at(i, m) = at(i + 1, m) + sc.gap;
    for (std::int64_t j = m - 1; j >= 0; --j) {
      const int diag = (src[i] == out[j] ? sc.match : sc.mismatch) + at(i + 1, j + 1);
      const int del = sc.gap + at(i + 1, j);
      const int ins = sc.gap + at(i, j + 1);
      at(i, j) = std::max(diag, std::max(del, ins));
    }
  }

  std::vector<AlignmentOp> ops;
  ops.reserve(static_cast<std::size_t>(std::max(n, m)));
  std::int64_t i = 0, j = 0;
  bool in_aligned_span = false;  // the leading region counts as misaligned
  while (i < n || j < m) {
    const std::int32_t here = at(i, j);
    AlignOpKind chosen = AlignOpKind::Insert;
    int best_rank = 99;
    auto offer = [&](AlignOpKind kind, std::int32_t via) {
      if (via != here) return;
      // Ties prefer continuing the current span type, then match >
      // substitute > delete > insert. Without the continuation rule a
      // co-optimal match inside a gap run splits the run, and a co-optimal
      // match at the very start turns a leading misalignment into an
      // aligned span plus a spurious transition.
      int rank;
      switch (kind) {
        case AlignOpKind::Match: rank = 0; break;
        case AlignOpKind::Substitute: rank = 1; break;
        case AlignOpKind::Delete: rank = 2; break;
        case AlignOpKind::Insert: rank = 3; break;
      }
      if ((kind == AlignOpKind::Match) != in_aligned_span) rank += 4;
      if (rank < best_rank) {
        best_rank = rank;
        chosen = kind;
      }
    };
    if (i < n && j < m) {
      const bool eq = src[i] == out[j];
      offer(eq ? AlignOpKind::Match : AlignOpKind::Substitute,
            (eq ? sc.match : sc.mismatch) + at(i + 1, j + 1));
    }
    if (i < n) offer(AlignOpKind::Delete, sc.gap + at(i + 1, j));
    if (j < m) offer(AlignOpKind::Insert, sc.gap + at(i, j + 1));

    switch (chosen) {
      case AlignOpKind::Match:
      case AlignOpKind::Substitute:
        ops.push_back({chosen, static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)});
        ++i;
        ++j;
        break;
      case AlignOpKind::Delete:
        ops.push_back({chosen, static_cast<std::int32_t>(i), -1});
        ++i;
        break;
      case AlignOpKind::Insert:
        ops.push_back({chosen, -1, static_cast<std::int32_t>(j)});
        ++j;
        break;
    }
    in_aligned_span = chosen == AlignOpKind::Match;
  }
  return ops;
}

int alignment_score(std::span<const AlignmentOp> ops, const AlignScoring& sc) {
  int score = 0;
  for (const AlignmentOp& op : ops) {
    switch (op.kind) {
      case AlignOpKind::Match: score += sc.match; break;
      case AlignOpKind::Substitute: score += sc.mismatch; break;
      case AlignOpKind::Insert:
      case AlignOpKind::Delete: score += sc.gap; break;
    }
  }
  return score;
}

std::vector<SpanGroup> group_spans(std::span<const AlignmentOp> ops) {
  std::vector<SpanGroup> groups;
  for (std::int32_t k = 0; k < static_cast<std::int32_t>(ops.size()); ++k) {
    const bool aligned = ops[k].kind == AlignOpKind::Match;
    if (groups.empty() || groups.back().aligned != aligned) {
      groups.push_back({aligned, k, k});
    } else {
      groups.back().last_op = k;
    }
  }
  return groups;
}

}  // namespace crasplab
