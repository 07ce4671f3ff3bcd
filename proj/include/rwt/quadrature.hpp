#pragma once

#include <functional>
#include <vector>

namespace rwt::quad {

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    int max_subdivisions = 4000;
};

/// Adaptive 21-point Gauss-Kronrod integration of f over [a, b]. Either bound
/// may be infinite; the half-line and the real line are mapped onto finite
/// intervals by rational substitutions. Integrand values that are not finite
/// are treated as zero, which is the right limit for densities raised to a
/// power at the far tails.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& options = {});

/// Nodes and weights of a fixed composite Kronrod rule on [a, b] with the
/// given number of equal panels (21 nodes per panel).
struct NodeSet {
    std::vector<double> nodes;
    std::vector<double> weights;
};
NodeSet composite_rule(double a, double b, int panels);

}  // namespace rwt::quad
