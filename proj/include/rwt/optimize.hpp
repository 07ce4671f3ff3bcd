#pragma once

#include "rwt/linalg.hpp"

#include <functional>

namespace rwt::opt {

struct Result {
    Vector x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Bounded scalar minimisation (Brent's method).
Result brent(const std::function<double(double)>& f, double lo, double hi,
             int max_iterations = 500);

/// Nelder–Mead simplex. Non-finite objective values act as an infinite
/// penalty, which is how callers keep the search inside the domain.
/// `step` sets the initial simplex edge along each coordinate.
Result nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0,
                   const Vector& step, double tol = 1e-9, int max_iterations = 500);

}  // namespace rwt::opt
