#pragma once

#include <stdexcept>
#include <string>

namespace rectdyne {

// Invalid or inconsistent user configuration (field-level message).
// CLI maps this to exit code 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure (e.g. fit non-convergence). CLI exit code 3.
class fit_error : public std::runtime_error {
 public:
  explicit fit_error(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem / serialization failure. CLI exit code 4.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rectdyne
