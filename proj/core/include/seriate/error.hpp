#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace seriate {

/// Error categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
  validation,
  capacity,
  domain,
  parse,
  support,
  divergence,
  disconnected,
  isolated_vertex,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what) : Error(ErrorKind::capacity, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

/// Malformed input file. `line()` is 1-based; 0 when the error is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A sample the model assigns (numerically) zero probability.
class SupportError : public Error {
 public:
  SupportError(std::size_t sample_index, double probability);
  std::size_t sample_index() const noexcept { return sample_index_; }
  double probability() const noexcept { return probability_; }

 private:
  std::size_t sample_index_;
  double probability_;
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::size_t epoch);
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

/// Raised when a spectral operation needs a connected graph. Carries the
/// vertex partition so callers can seriate each component on its own.
class DisconnectedGraphError : public Error {
 public:
  explicit DisconnectedGraphError(std::vector<std::vector<std::size_t>> components);
  const std::vector<std::vector<std::size_t>>& components() const noexcept { return components_; }

 private:
  std::vector<std::vector<std::size_t>> components_;
};

class IsolatedVertexError : public Error {
 public:
  explicit IsolatedVertexError(std::size_t vertex);
  std::size_t vertex() const noexcept { return vertex_; }

 private:
  std::size_t vertex_;
};

}  // namespace seriate
