#pragma once

#include <stdexcept>
#include <string>

namespace clt {

/// Invalid arguments or configuration. Maps to CLI exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical self-check failed. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string check, const std::string& detail)
      : std::runtime_error(check + ": " + detail), check_(std::move(check)), detail_(detail) {}

  /// Short name of the failing check, e.g. "mass".
  const std::string& check() const noexcept { return check_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string check_;
  std::string detail_;
};

}  // namespace clt
