#pragma once

#include <stdexcept>
#include <string>

namespace a2rlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller.
class PreconditionError : public Error {
public:
  using Error::Error;
};

class UnknownFamily : public Error {
public:
  using Error::Error;
};

/// The sublevel set {V < e} contains no grid node. Legal: all counts are 0.
class EmptySublevel : public Error {
public:
  using Error::Error;
};

/// A connected component of the interior set has no boundary neighbour.
class DetachedComponent : public Error {
public:
  using Error::Error;
};

class SingularDirichletBlock : public Error {
public:
  using Error::Error;
};

class FactorizationBreakdown : public Error {
public:
  FactorizationBreakdown(const std::string& what, long pivot_index, double pivot)
      : Error(what), pivot_index_(pivot_index), pivot_(pivot) {}
  long pivot_index() const { return pivot_index_; }
  double pivot() const { return pivot_; }

private:
  long pivot_index_;
  double pivot_;
};

/// The shift lies (numerically) on an eigenvalue; the caller must perturb it.
class OnEigenvalue : public Error {
public:
  using Error::Error;
};

/// The shift is not in the resolvent set of the Dirichlet pencil.
class ResolventViolation : public OnEigenvalue {
public:
  using OnEigenvalue::OnEigenvalue;
};

class SizeCap : public Error {
public:
  using Error::Error;
};

class MissingVectors : public Error {
public:
  using Error::Error;
};

class DimensionTooLow : public Error {
public:
  using Error::Error;
};

class SubcriticalExponent : public Error {
public:
  using Error::Error;
};

class MissingConstant : public Error {
public:
  using Error::Error;
};

class EnumerationCap : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace a2rlab
