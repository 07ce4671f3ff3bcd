#pragma once

#include <stdexcept>
#include <string>

namespace rwt {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter, sample or option lies outside its admissible domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A minimizer ran onto the edge of the parameter space (e.g. zero scale).
class BoundaryError : public Error {
public:
    using Error::Error;
};

/// An iterative routine (optimizer, quadrature, root finder) did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A matrix that must be inverted is singular or not positive definite.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

}  // namespace rwt
