#pragma once

#include <string>
#include <vector>

namespace crasplab::cli {

// Exit codes: 0 success, 1 verification or scoring failure, 2 usage error,
// 3 I/O error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

// Flag/option documentation audit used by tests: returns the names of any
// options whose help text is empty.
std::vector<std::string> undocumented_options();

}  // namespace crasplab::cli
