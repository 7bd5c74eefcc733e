#pragma once

#include <string>
#include <vector>

namespace oro::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Entry point shared by the binary and the tests. Exit codes: 0 success,
/// 1 usage or validation error, 2 solver failure (infeasible / iteration
/// limit), 3 external-service failure.
int run(const std::vector<std::string>& args);

} // namespace oro::cli
