#pragma once

#include <iosfwd>

namespace elegy::cli {

// Exit statuses.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kDataError = 2;

/// Entry point of the `elegy` tool. The corpus manifest defaults to the
/// ELEGY_CORPUS environment variable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace elegy::cli
