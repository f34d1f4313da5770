#pragma once

#include <optional>

#include "sns/config.hpp"

namespace sns {

struct RunOptions {
  std::optional<uint64_t> seed;  // overrides config noise seed
  int                     threads = 1;
  std::string             out_dir;  // resolved output directory
};

// Executes the configured experiment and writes its artifacts.
// Exit status: 0 success, 2 blow-up, 3 validation error (thrown as
// ConfigError before any run starts).
int run(const RunConfig& config, const RunOptions& opts);

}  // namespace sns
