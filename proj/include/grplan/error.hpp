#pragma once

#include <stdexcept>
#include <string>

namespace grplan {

/// Base class for all solver-raised errors.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input: dimension mismatches, non-injective configurations,
/// disconnected workspaces, bad JSON. Distinct from plan violations, which
/// are reported through ValidationReport.
class StructuralError : public SolverError {
 public:
  explicit StructuralError(const std::string& what) : SolverError(what) {}
};

/// An instance does not meet an algorithm's density/dimension/obstacle
/// requirements.
class RegimeError : public SolverError {
 public:
  explicit RegimeError(const std::string& what) : SolverError(what) {}
};

}  // namespace grplan
