#pragma once

// Shared test utilities. The alignment brute force and the bit-exact
// re-derivations here are deliberately independent of the library's
// implementation paths; they only agree with them by being correct.

#include <algorithm>
#include <string>
#include <vector>

#include "crasplab/align.hpp"
#include "crasplab/program.hpp"
#include "crasplab/rng.hpp"
#include "crasplab/symbol.hpp"

namespace testutil {

inline std::vector<crasplab::Symbol> syms(const std::string& spaced) {
  return crasplab::parse_symbols(spaced);
}

// Exhaustive alignment search: every monotone interleaving of consumes.
struct BruteForceAlignment {
  int best_score = 0;
  long long optimal_count = 0;
  std::vector<crasplab::AlignmentOp> one_optimal;

  static BruteForceAlignment run(const std::vector<std::string>& src,
                                 const std::vector<std::string>& out,
                                 const crasplab::AlignScoring& sc = {}) {
    BruteForceAlignment result;
    result.best_score = INT32_MIN;
    std::vector<crasplab::AlignmentOp> path;
    recurse(src, out, sc, 0, 0, 0, path, result);
    return result;
  }

 private:
  static void recurse(const std::vector<std::string>& src, const std::vector<std::string>& out,
                      const crasplab::AlignScoring& sc, std::size_t i, std::size_t j, int score,
                      std::vector<crasplab::AlignmentOp>& path, BruteForceAlignment& result) {
    using crasplab::AlignmentOp;
    using crasplab::AlignOpKind;
    if (i == src.size() && j == out.size()) {
      if (score > result.best_score) {
        result.best_score = score;
        result.optimal_count = 1;
        result.one_optimal = path;
      } else if (score == result.best_score) {
        ++result.optimal_count;
      }
      return;
    }
    if (i < src.size() && j < out.size()) {
      const bool eq = src[i] == out[j];
      path.push_back({eq ? AlignOpKind::Match : AlignOpKind::Substitute,
                      static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)});
      recurse(src, out, sc, i + 1, j + 1, score + (eq ? sc.match : sc.mismatch), path, result);
      path.pop_back();
    }
    if (i < src.size()) {
      path.push_back({AlignOpKind::Delete, static_cast<std::int32_t>(i), -1});
      recurse(src, out, sc, i + 1, j, score + sc.gap, path, result);
      path.pop_back();
    }
    if (j < out.size()) {
      path.push_back({AlignOpKind::Insert, -1, static_cast<std::int32_t>(j)});
      recurse(src, out, sc, i, j + 1, score + sc.gap, path, result);
      path.pop_back();
    }
  }
};

// Random well-formed programs for differential and property tests.
struct RandomProgramOptions {
  bool allow_count_all = true;
  bool allow_positional = true;
  int max_distance = 3;
};

inline crasplab::Program random_program(crasplab::Rng& rng,
                                        std::span<const crasplab::Symbol> alphabet, int n_ops,
                                        const RandomProgramOptions& opt = {}) {
  using namespace crasplab;
  Program p;
  p.declared_alphabet.assign(alphabet.begin(), alphabet.end());
  std::vector<int> bools;
  std::vector<int> counts;
  auto add = [&](Op op) {
    op.name = "op" + std::to_string(p.ops.size());
    int idx = static_cast<int>(p.ops.size());
    (op_kind_is_bool(op.kind) ? bools : counts).push_back(idx);
    op.declared_bool = op_kind_is_bool(op.kind);
    p.ops.push_back(std::move(op));
  };
  // Seed the pools.
  {
    Op q;
    q.kind = OpKind::InitialQ;
    q.symbol = alphabet[rng.below(alphabet.size())];
    add(std::move(q));
    Op one;
    one.kind = OpKind::ConstOne;
    add(std::move(one));
  }
  auto pick = [&](std::vector<int>& pool) { return pool[rng.below(pool.size())]; };
  while (static_cast<int>(p.ops.size()) < n_ops) {
    switch (rng.below(12)) {
      case 0: {
        Op op;
        op.kind = OpKind::InitialQ;
        op.symbol = alphabet[rng.below(alphabet.size())];
        add(std::move(op));
        break;
      }
      case 1: {
        Op op;
        op.kind = OpKind::BoolNot;
        op.arg0 = pick(bools);
        add(std::move(op));
        break;
      }
      case 2: {
        Op op;
        op.kind = OpKind::BoolAnd;
        op.arg0 = pick(bools);
        op.arg1 = pick(bools);
        add(std::move(op));
        break;
      }
      case 3: {
        Op op;
        op.kind = OpKind::ConstTrue;
        add(std::move(op));
        break;
      }
      case 4: {
        if (!opt.allow_positional) break;
        Op op;
        op.kind = OpKind::Positional;
        op.period = 1 + static_cast<std::int64_t>(rng.below(5));
        for (std::int64_t r = 0; r < op.period; ++r) {
          if (rng.chance(0.5)) op.residues.push_back(r);
        }
        if (op.residues.empty()) op.residues.push_back(rng.below(op.period));
        add(std::move(op));
        break;
      }
      case 5: {
        Op op;
        op.kind = OpKind::Compare;
        op.arg0 = pick(counts);
        op.arg1 = pick(counts);
        add(std::move(op));
        break;
      }
      case 6: {
        if (!opt.allow_count_all) break;
        Op op;
        op.kind = OpKind::CountAll;
        op.arg0 = pick(bools);
        add(std::move(op));
        break;
      }
      case 7: {
        Op op;
        op.kind = OpKind::CountDist;
        op.arg0 = pick(bools);
        int n_dists = 1 + static_cast<int>(rng.below(3));
        for (int d = 0; d < n_dists; ++d) {
          op.distances.push_back(rng.below(opt.max_distance + 1));
        }
        std::sort(op.distances.begin(), op.distances.end());
        op.distances.erase(std::unique(op.distances.begin(), op.distances.end()),
                           op.distances.end());
        add(std::move(op));
        break;
      }
      case 8: {
        Op op;
        op.kind = OpKind::Conditional;
        op.arg0 = pick(bools);
        op.arg1 = pick(counts);
        op.arg2 = pick(counts);
        add(std::move(op));
        break;
      }
      case 9: {
        Op op;
        op.kind = OpKind::Add;
        op.arg0 = pick(counts);
        op.arg1 = pick(counts);
        add(std::move(op));
        break;
      }
      case 10: {
        Op op;
        op.kind = OpKind::Sub;
        op.arg0 = pick(counts);
        op.arg1 = pick(counts);
        add(std::move(op));
        break;
      }
      case 11: {
        Op op;
        op.kind = OpKind::ConstOne;
        add(std::move(op));
        break;
      }
    }
  }
  return p;
}

inline std::vector<crasplab::Symbol> random_input(crasplab::Rng& rng,
                                                  std::span<const crasplab::Symbol> alphabet,
                                                  int length) {
  std::vector<crasplab::Symbol> input(length);
  for (int i = 0; i < length; ++i) input[i] = alphabet[rng.below(alphabet.size())];
  return input;
}

}  // namespace testutil
