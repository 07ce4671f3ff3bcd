#pragma once

#include <Eigen/Dense>

#include <string_view>

namespace rwt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Inverse of a symmetric positive-definite matrix. Throws SingularMatrixError
/// when the Cholesky factorization fails or the condition estimate is hopeless.
Matrix spd_inverse(const Matrix& m, std::string_view what);

/// General inverse with a rank check; throws SingularMatrixError on rank loss.
Matrix checked_inverse(const Matrix& m, std::string_view what);

/// Quadratic form v' A^{-1} v for symmetric positive-definite A.
double spd_quadratic_form(const Matrix& a, const Vector& v, std::string_view what);

/// Smallest singular value of a (possibly rectangular) matrix.
double smallest_singular_value(const Matrix& m);

inline Vector scalar_vector(double v) {
    Vector out(1);
    out(0) = v;
    return out;
}

}  // namespace rwt
