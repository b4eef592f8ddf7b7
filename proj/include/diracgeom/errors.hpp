#pragma once

#include <stdexcept>
#include <string>

namespace diracgeom {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad axis, non-Hermitian symbol, bad file ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// The principal symbol is not elliptic (or too badly conditioned) at some grid point.
class EllipticityError : public InputError {
 public:
  EllipticityError(const std::string& what, std::size_t point, double det)
      : InputError(what), point_(point), det_(det) {}

  std::size_t point() const { return point_; }
  double det() const { return det_; }

 private:
  std::size_t point_;
  double det_;
};

/// Two computation routes that must agree did not (usually: grid too coarse).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace diracgeom
