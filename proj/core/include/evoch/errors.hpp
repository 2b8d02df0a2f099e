#pragma once

#include <stdexcept>
#include <string>

namespace evoch {

// Invalid or inconsistent run configuration (bad key, bad value, inadmissible data).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Mesh became invalid (degenerate element, broken topology).
struct GeometryError : std::runtime_error {
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation outside the domain of the sharp potential.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Violated operation precondition (e.g. incompatible right-hand side).
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// Newton or linear solver failure; carries the residual history in the message.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace evoch
