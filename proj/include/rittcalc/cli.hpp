#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rittcalc::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kIngest = 3;
inline constexpr int kComputation = 4;  // a numerical routine raised an error

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace rittcalc::cli
