#pragma once

#include <stdexcept>
#include <string>

namespace wsnlife {

// Argument outside the region where a formula is defined.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Malformed scenario document. `where` carries a byte offset or JSON path.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::string where)
      : std::runtime_error(what + " (at " + where + ")"), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

private:
  std::string where_;
};

// The model has no solution for the requested configuration
// (disconnected origin, CB/CT cannot reach the target range, ...).
class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace wsnlife
