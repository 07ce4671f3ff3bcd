#include "rwt/hypothesis.hpp"

#include "rwt/errors.hpp"

#include <cmath>
#include <sstream>

namespace rwt {

namespace {

Matrix numeric_jacobian(const HypothesisFunction::Fn& psi, const Vector& theta1,
                        const Vector& theta2, bool first, int r) {
    const Vector& at = first ? theta1 : theta2;
    Matrix out(at.size(), r);
    for (Eigen::Index j = 0; j < at.size(); ++j) {
        const double h = 1e-6 * (1.0 + std::abs(at(j)));
        Vector up = at;
        Vector dn = at;
        up(j) += h;
        dn(j) -= h;
        const Vector fu = first ? psi(up, theta2) : psi(theta1, up);
        const Vector fd = first ? psi(dn, theta2) : psi(theta1, dn);
        out.row(j) = ((fu - fd) / (2.0 * h)).transpose();
    }
    return out;
}

}  // namespace

HypothesisFunction::HypothesisFunction(std::string name, int r, Fn psi, JacobianFn jacobian1,
                                       JacobianFn jacobian2)
    : name_(std::move(name)),
      r_(r),
      psi_(std::move(psi)),
      jacobian1_(std::move(jacobian1)),
      jacobian2_(std::move(jacobian2)) {
    if (r_ < 1 || !psi_) {
        throw DomainError("hypothesis function needs r >= 1 and a callable");
    }
}

Vector HypothesisFunction::operator()(const Vector& theta1, const Vector& theta2) const {
    Vector v = psi_(theta1, theta2);
    if (v.size() != r_) {
        throw DomainError("hypothesis '" + name_ + "' returned a vector of the wrong length");
    }
    return v;
}

Matrix HypothesisFunction::jacobian1(const Vector& theta1, const Vector& theta2) const {
    return jacobian1_ ? jacobian1_(theta1, theta2)
                      : numeric_jacobian(psi_, theta1, theta2, true, r_);
}

Matrix HypothesisFunction::jacobian2(const Vector& theta1, const Vector& theta2) const {
    return jacobian2_ ? jacobian2_(theta1, theta2)
                      : numeric_jacobian(psi_, theta1, theta2, false, r_);
}

void HypothesisFunction::check_rank(const Vector& theta1, const Vector& theta2) const {
    for (const Matrix& j : {jacobian1(theta1, theta2), jacobian2(theta1, theta2)}) {
        if (j.cols() != r_ || j.rows() < r_ || !(smallest_singular_value(j) > 1e-10)) {
            std::ostringstream os;
            os << "hypothesis '" << name_ << "': Jacobian does not have rank " << r_;
            throw DomainError(os.str());
        }
    }
}

HypothesisFunction HypothesisFunction::difference(int p) {
    return HypothesisFunction(
        "diff", p, [](const Vector& a, const Vector& b) { return Vector(a - b); },
        [p](const Vector&, const Vector&) { return Matrix(Matrix::Identity(p, p)); },
        [p](const Vector&, const Vector&) { return Matrix(-Matrix::Identity(p, p)); });
}

HypothesisFunction HypothesisFunction::coordinate_difference(int p, std::vector<int> coordinates,
                                                             double sign) {
    const int r = static_cast<int>(coordinates.size());
    for (int c : coordinates) {
        if (c < 0 || c >= p) {
            throw DomainError("coordinate index out of range");
        }
    }
    Matrix sel = Matrix::Zero(p, r);
    for (int k = 0; k < r; ++k) {
        sel(coordinates[static_cast<std::size_t>(k)], k) = sign;
    }
    return HypothesisFunction(
        "coordinate-diff", r,
        [sel](const Vector& a, const Vector& b) { return Vector(sel.transpose() * (a - b)); },
        [sel](const Vector&, const Vector&) { return sel; },
        [sel](const Vector&, const Vector&) { return Matrix(-sel); });
}

HypothesisFunction HypothesisFunction::variance_ratio(double c0) {
    return HypothesisFunction(
        "var-ratio", 1,
        [c0](const Vector& a, const Vector& b) {
            return scalar_vector(a(1) * a(1) / (b(1) * b(1)) - c0);
        },
        [](const Vector& a, const Vector& b) {
            Matrix j = Matrix::Zero(2, 1);
            j(1, 0) = 2.0 * a(1) / (b(1) * b(1));
            return j;
        },
        [](const Vector& a, const Vector& b) {
            Matrix j = Matrix::Zero(2, 1);
            j(1, 0) = -2.0 * a(1) * a(1) / (b(1) * b(1) * b(1));
            return j;
        });
}

}  // namespace rwt
