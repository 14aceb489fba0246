#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "crasplab/errors.hpp"
#include "crasplab/program.hpp"

namespace crasplab {

struct ParseResult {
  std::optional<Program> program;  // set iff diagnostics is empty
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

// Line-oriented source, one operation per line:
//
//   # comment
//   count ONE_      := ONE
//   bool  Q_a       := Q('a')
//   count SEEN_a    := COUNT[all](Q_a)
//   bool  PRED_a    := LE(ONE_, SEEN_a)
//   bool  EITHER    := OR(Q_a, PRED_a)
//   next 'a'        := PRED_a
//
// Arguments are names of earlier operations. OR is surface sugar and lowers
// to NOT/AND helper operations (named with a '~' suffix, which user names
// cannot contain). `next` directives form a trailing block.
ParseResult parse_program(std::string_view source);

}  // namespace crasplab
