#include "rwt/linalg.hpp"

#include "rwt/errors.hpp"

#include <cmath>
#include <string>

namespace rwt {

namespace {

void require_finite(const Matrix& m, std::string_view what) {
    if (!m.allFinite()) {
        throw SingularMatrixError(std::string(what) + ": matrix has non-finite entries");
    }
}

}  // namespace

Matrix spd_inverse(const Matrix& m, std::string_view what) {
    require_finite(m, what);
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw SingularMatrixError(std::string(what) + ": matrix is not square");
    }
    const Matrix sym = 0.5 * (m + m.transpose());
    Eigen::LLT<Matrix> llt(sym);
    if (llt.info() != Eigen::Success) {
        throw SingularMatrixError(std::string(what) + ": matrix is not positive definite");
    }
    const Vector diag = llt.matrixLLT().diagonal();
    const double ratio = diag.minCoeff() / diag.maxCoeff();
    if (!(ratio > 1e-8)) {
        throw SingularMatrixError(std::string(what) + ": matrix is numerically singular");
    }
    return llt.solve(Matrix::Identity(m.rows(), m.cols()));
}

Matrix checked_inverse(const Matrix& m, std::string_view what) {
    require_finite(m, what);
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw SingularMatrixError(std::string(what) + ": matrix is not square");
    }
    Eigen::FullPivLU<Matrix> lu(m);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
        throw SingularMatrixError(std::string(what) + ": matrix is singular");
    }
    return lu.inverse();
}

double spd_quadratic_form(const Matrix& a, const Vector& v, std::string_view what) {
    const Matrix inv = spd_inverse(a, what);
    return v.dot(inv * v);
}

double smallest_singular_value(const Matrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().minCoeff();
}

}  // namespace rwt
