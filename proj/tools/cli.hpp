#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rss::cli {

// Exit codes.
inline constexpr int kExitAccept = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitReject = 3;
inline constexpr int kExitVerifyFailed = 4;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rss::cli
