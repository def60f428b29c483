#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qwalk {

/// Argument outside the mathematical domain of an operation
/// (non-normalized state, reflectivity outside [0,1], non-unitary matrix...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A walk would need more lattice sites than were allocated.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Malformed phase-map or configuration text.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + " [" + field + "]: " + what),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Invalid or inconsistent configuration value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Crossing detection found zero or several sign changes.
class AmbiguityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qwalk
