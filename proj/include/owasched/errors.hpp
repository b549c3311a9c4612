#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace owasched {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A solver was handed an instance outside its contract (wrong objective,
// non-monotone OWA weights, unsupported precedence, ...).
struct PreconditionError : Error {
  using Error::Error;
};

// An enumeration guard tripped; the caller must pick another method or
// raise the budget explicitly. Never downgraded to a silent fallback.
struct BudgetExceededError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct SchemaError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  ValidationError(const std::string& message, std::vector<std::string> violations_in)
      : Error(message), violations(std::move(violations_in)) {}
  std::vector<std::string> violations;
};

struct LpError : Error {
  using Error::Error;
};

}  // namespace owasched
