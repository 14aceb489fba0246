#pragma once

#include <vector>

#include "crasplab/errors.hpp"
#include "crasplab/program.hpp"

namespace crasplab {

// Structural invariants beyond what parsing guarantees: kind discipline,
// argument ordering, predicate parameters, next-target validity. Empty result
// means the program is valid. Works on hand-built ASTs as well as parsed ones.
std::vector<Diagnostic> validate_program(const Program& program);

}  // namespace crasplab
