#pragma once

#include <stdexcept>
#include <string>

namespace matdist {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (t, x) outside the law's domain box, or det F at or below the
/// invertibility floor.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A law returned NaN/Inf at a point that should be interior.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Registry lookup for an unknown law name.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// A singular value fell inside the ambiguous band around the rank
/// threshold; the nullspace dimension cannot be trusted.
class RankUnstableError : public Error {
 public:
  RankUnstableError(const std::string& what, double sigma, double threshold)
      : Error(what), sigma(sigma), threshold(threshold) {}
  double sigma = 0.0;
  double threshold = 0.0;
};

/// classify() refused a sweep containing failed points.
class IncompleteSweepError : public Error {
 public:
  using Error::Error;
};

/// mass_consistency() needs a measured density sequence.
class MissingDensityError : public Error {
 public:
  using Error::Error;
};

/// A process matrix P(t_k) is numerically singular.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Leaf tracing could not start (zero-dimensional projected fiber).
class FoliationError : public Error {
 public:
  using Error::Error;
};

/// Malformed config file; carries the offending line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line) : Error(what), line(line) {}
  int line = 0;
};

}  // namespace matdist
