#pragma once

#include <stdexcept>
#include <string>

namespace dsep {

// Bad parameters or a violated precondition. `field` names the offending input.
class DomainError : public std::invalid_argument {
 public:
  DomainError(std::string field, const std::string& reason)
      : std::invalid_argument(field + ": " + reason), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Unreadable file or malformed serialized input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dsep
