#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ranklearn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input files or invalid configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// The parameter point lies outside the region where the walk is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateRestart : public DomainError {
 public:
  DegenerateRestart() : DomainError("all clamped seed weights are zero") {}
};

class DegenerateRow : public DomainError {
 public:
  explicit DegenerateRow(std::size_t vertex)
      : DomainError("all out-edge weights of vertex " + std::to_string(vertex) +
                    " clamp to zero"),
        vertex_(vertex) {}
  std::size_t vertex() const { return vertex_; }

 private:
  std::size_t vertex_;
};

/// Raised by objective evaluation when a graph leaves the model domain.
class OracleDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoPositiveRoot : public DomainError {
 public:
  using DomainError::DomainError;
};

class RestartLimit : public Error {
 public:
  using Error::Error;
};

class SizeGuard : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class SpecInfeasible : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace ranklearn
