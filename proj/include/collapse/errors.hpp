#ifndef COLLAPSE_ERRORS_HPP
#define COLLAPSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace collapse {

/// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// Input matrix fails the Hermiticity check; carries the max entry deviation.
class NotHermitian : public Error {
public:
  NotHermitian(const std::string& what, double deviation)
      : Error(what), deviation_(deviation) {}
  double deviation() const { return deviation_; }

private:
  double deviation_;
};

class NumericalFailure : public Error {
public:
  using Error::Error;
};

/// An eigenvalue gap falls inside the ambiguous clustering window.
class ClusterAmbiguity : public Error {
public:
  ClusterAmbiguity(const std::string& what, double gap) : Error(what), gap_(gap) {}
  double gap() const { return gap_; }

private:
  double gap_;
};

/// Conditioning on an outcome whose Born probability is numerically zero.
class ImpossibleOutcome : public Error {
public:
  using Error::Error;
};

class ImpossibleOutcomeInSupport : public Error {
public:
  using Error::Error;
};

class BasisNotRefining : public Error {
public:
  using Error::Error;
};

class UncoveredEigenvalue : public Error {
public:
  UncoveredEigenvalue(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const { return eigenvalue_; }

private:
  double eigenvalue_;
};

/// A constructed value violates the invariants of its domain type.
class ValidationError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace collapse

#endif
