#pragma once

#include <stdexcept>
#include <string>

namespace lzring {

/// Bad user input: config files, flags, malformed CSV. CLI exit code 1.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: norm drift, non-finite state, degenerate ground level.
/// CLI exit code 2.
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem failure. CLI exit code 3.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Requested operator dimension exceeds the configured site limit.
struct capacity_error : config_error {
  explicit capacity_error(const std::string& msg) : config_error(msg) {}
};

}  // namespace lzring
