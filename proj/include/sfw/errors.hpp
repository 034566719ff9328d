#pragma once

#include <stdexcept>
#include <string>

namespace sfw {

class PrecisionExhausted : public std::runtime_error {
 public:
  explicit PrecisionExhausted(const std::string& what)
      : std::runtime_error("precision exhausted: " + what) {}
};

class InsufficientQuotients : public std::runtime_error {
 public:
  explicit InsufficientQuotients(const std::string& what)
      : std::runtime_error("insufficient quotients: " + what) {}
};

// Violated operation precondition (refused plan, bad rule, lambda = 0, ...).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sfw
