#include "crasplab/errors.hpp"

namespace crasplab {

std::string Diagnostic::to_string() const {
  std::string out;
  if (line > 0) {
    out += "line " + std::to_string(line);
    if (column > 0) out += ":" + std::to_string(column);
    out += ": ";
  }
  return out + message;
}

}  // namespace crasplab
