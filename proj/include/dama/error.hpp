#pragma once

#include <stdexcept>
#include <string>

namespace dama {

/// Raised for malformed input: bad JSON shape, invariant violations in user
/// supplied data, unknown identifiers. `where` names the offending location
/// (a JSON pointer-ish path or a token offset).
class InputError : public std::runtime_error {
 public:
  InputError(std::string where, const std::string& what)
      : std::runtime_error(what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// Raised when an operation's precondition is not met by otherwise valid data
/// (e.g. collapsing a non-trivial edge, exceeding a size cap).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dama
