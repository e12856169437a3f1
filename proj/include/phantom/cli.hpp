#pragma once

// Command-line front end. Exit codes: 0 success, 1 bad flags / invalid input / domain
// error / invalid measure, 2 expression syntax or measure document schema error,
// 3 a --check mismatch or a violated inequality.

#include <ostream>
#include <string>
#include <vector>

namespace phantom::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitSyntax = 2;
inline constexpr int kExitFinding = 3;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phantom::cli
