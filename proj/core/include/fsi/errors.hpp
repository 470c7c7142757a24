#pragma once

#include <stdexcept>
#include <string>

namespace fsi {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Two fields (or a field and an operator) do not share a discretization.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

/// A linear solve failed (factorization breakdown, non-finite result).
class SolverError : public Error {
 public:
  using Error::Error;
};

class CompatibilityError : public Error {
 public:
  using Error::Error;
};

class FluxImbalance : public CompatibilityError {
 public:
  using CompatibilityError::CompatibilityError;
};

/// Three consecutive fixed-point increments failed to shrink.
class NonContraction : public Error {
 public:
  using Error::Error;
};

/// The time window was shrunk below one time step without reaching contraction.
class WindowCollapse : public Error {
 public:
  using Error::Error;
};

/// J <= 0 was detected while building a deformation state.
class DegenerateDeformation : public Error {
 public:
  DegenerateDeformation(const std::string& what, int node, double time, double jacobian)
      : Error(what), node_(node), time_(time), jacobian_(jacobian) {}
  int node() const { return node_; }
  double time() const { return time_; }
  double jacobian() const { return jacobian_; }

 private:
  int node_;
  double time_;
  double jacobian_;
};

}  // namespace fsi
