#pragma once

#include <stdexcept>
#include <string>

namespace otreg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or degenerate geometric input (non-convex, zero area, point off
/// the boundary, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  enum class Kind { InvalidInput, Disconnected, NonConvergence };

  SolverError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Failure of a measurement on a solved potential (empty section, centring
/// did not converge, resolution floor violated).
class AnalysisError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace otreg
