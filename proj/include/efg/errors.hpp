#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace efg {

// All semantic failures (invalid inputs, mismatched vocabularies, exceeded
// budgets, illegal game moves) throw this. `code()` is a stable
// machine-readable name; what() prepends the code to a witness description.
class DomainError : public std::runtime_error {
public:
  DomainError(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

private:
  std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& detail) {
  throw DomainError(std::move(code), detail);
}

}  // namespace efg
