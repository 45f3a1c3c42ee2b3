#include "seriate/error.hpp"

#include <sstream>

namespace seriate {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::domain: return "domain";
    case ErrorKind::parse: return "parse";
    case ErrorKind::support: return "support";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::disconnected: return "disconnected";
    case ErrorKind::isolated_vertex: return "isolated_vertex";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

namespace {

std::string parse_message(std::size_t line, const std::string& what) {
  if (line == 0) return what;
  return "line " + std::to_string(line) + ": " + what;
}

std::string support_message(std::size_t index, double p) {
  std::ostringstream os;
  os << "sample " << index << " has probability " << p << " under the model (outside support)";
  return os.str();
}

std::string components_message(const std::vector<std::vector<std::size_t>>& comps) {
  std::ostringstream os;
  os << "graph is disconnected (" << comps.size() << " components):";
  for (const auto& c : comps) {
    os << " {";
    for (std::size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
    os << "}";
  }
  return os.str();
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(ErrorKind::parse, parse_message(line, what)), line_(line) {}

SupportError::SupportError(std::size_t sample_index, double probability)
    : Error(ErrorKind::support, support_message(sample_index, probability)),
      sample_index_(sample_index),
      probability_(probability) {}

DivergenceError::DivergenceError(std::size_t epoch)
    : Error(ErrorKind::divergence, "non-finite loss at epoch " + std::to_string(epoch)), epoch_(epoch) {}

DisconnectedGraphError::DisconnectedGraphError(std::vector<std::vector<std::size_t>> components)
    : Error(ErrorKind::disconnected, components_message(components)), components_(std::move(components)) {}

IsolatedVertexError::IsolatedVertexError(std::size_t vertex)
    : Error(ErrorKind::isolated_vertex, "vertex " + std::to_string(vertex) + " has zero degree"),
      vertex_(vertex) {}

}  // namespace seriate
