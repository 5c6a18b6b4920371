#pragma once

// Linear geometry through the origin: points, unit directions, subspaces,
// reflections, projections and rotations in R^n.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "symmkit/config.hpp"

namespace symmkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Point {
public:
    Point() = default;
    explicit Point(Vector coords) : coords_(std::move(coords)) {
        if (coords_.size() < 1 || !coords_.allFinite())
            throw InputError("Point: coordinates must be finite and non-empty");
    }
    Point(std::initializer_list<double> c) : Point(Vector(Eigen::Map<const Vector>(c.begin(), static_cast<Eigen::Index>(c.size())))) {}

    [[nodiscard]] const Vector& coords() const { return coords_; }
    [[nodiscard]] int dim() const { return static_cast<int>(coords_.size()); }
    [[nodiscard]] double operator[](int i) const { return coords_[i]; }

private:
    Vector coords_;
};

class UnitDirection {
public:
    /// Normalizes `v`; rejects zero or non-finite vectors.
    static UnitDirection normalized(const Vector& v) {
        const double n = v.norm();
        if (!(n > 0.0) || !std::isfinite(n)) throw InputError("UnitDirection: zero or non-finite vector");
        return UnitDirection(v / n, default_tolerances());
    }
    static UnitDirection angle2d(double theta) {
        Vector v(2);
        v << std::cos(theta), std::sin(theta);
        return UnitDirection(v, default_tolerances());
    }
    static UnitDirection basis(int n, int i) { return UnitDirection(Vector::Unit(n, i), default_tolerances()); }

    /// Takes `v` as already unit; throws when ‖v‖ is off by more than tol.unit_norm.
    UnitDirection(Vector v, const Tolerances& tol) : coords_(std::move(v)) {
        if (!coords_.allFinite() || std::abs(coords_.norm() - 1.0) > tol.unit_norm)
            throw InputError("UnitDirection: vector is not unit length");
    }

    [[nodiscard]] const Vector& coords() const { return coords_; }
    [[nodiscard]] int dim() const { return static_cast<int>(coords_.size()); }
    [[nodiscard]] UnitDirection operator-() const { return UnitDirection(-coords_, default_tolerances()); }

private:
    Vector coords_;
};

/// A linear subspace H of R^n with 1 <= dim H <= n-1. Lines in the plane keep
/// their angle in [0, pi) alongside the basis.
class LineSubspace {
public:
    static LineSubspace line2d(double angle) {
        double a = std::fmod(angle, std::numbers::pi);
        if (a < 0) a += std::numbers::pi;
        if (a >= std::numbers::pi) a = 0.0;
        Matrix b(2, 1);
        b << std::cos(a), std::sin(a);
        return LineSubspace(std::move(b), a);
    }

    /// Hyperplane u^perp in R^n.
    static LineSubspace hyperplane(const UnitDirection& normal, const Tolerances& tol = default_tolerances()) {
        const int n = normal.dim();
        if (n < 2) throw InputError("hyperplane: ambient dimension must be >= 2");
        if (n == 2) {
            const Vector& u = normal.coords();
            return line2d(std::atan2(u[1], u[0]) + std::numbers::pi / 2);
        }
        // Complete {u} to an orthonormal basis and drop u.
        Matrix m(n, n);
        m.col(0) = normal.coords();
        int filled = 1;
        for (int i = 0; i < n && filled < n; ++i) {
            Vector c = Vector::Unit(n, i);
            for (int j = 0; j < filled; ++j) c -= m.col(j).dot(c) * m.col(j);
            if (c.norm() > 1e-6) m.col(filled++) = c.normalized();
        }
        return span(m.rightCols(n - 1), tol);
    }

    /// Subspace spanned by the columns of `basis`; re-orthonormalized when
    /// the supplied columns drift from orthonormality.
    static LineSubspace span(const Matrix& basis, const Tolerances& tol = default_tolerances()) {
        const auto n = basis.rows();
        const auto i = basis.cols();
        if (n < 2 || i < 1 || i > n - 1) throw InputError("LineSubspace: need 1 <= dim H <= n-1");
        if (!basis.allFinite()) throw InputError("LineSubspace: non-finite basis");
        Matrix b = basis;
        const double drift = (b.transpose() * b - Matrix::Identity(i, i)).cwiseAbs().maxCoeff();
        if (drift > tol.orthonormal_drift) {
            Eigen::HouseholderQR<Matrix> qr(b);
            Matrix q = qr.householderQ() * Matrix::Identity(n, i);
            // Rank check: R diagonal must not vanish.
            Matrix r = qr.matrixQR().topRows(i).triangularView<Eigen::Upper>();
            for (Eigen::Index k = 0; k < i; ++k)
                if (std::abs(r(k, k)) < 1e-12) throw InputError("LineSubspace: basis is rank deficient");
            b = q;
        }
        if (n == 2) return line2d(std::atan2(b(1, 0), b(0, 0)));
        return LineSubspace(std::move(b), std::nan(""));
    }

    [[nodiscard]] int ambient_dim() const { return static_cast<int>(basis_.rows()); }
    [[nodiscard]] int dim() const { return static_cast<int>(basis_.cols()); }
    [[nodiscard]] const Matrix& basis() const { return basis_; }
    /// Angle in [0, pi) for planar lines; NaN otherwise.
    [[nodiscard]] double angle() const { return angle_; }
    [[nodiscard]] bool is_planar_line() const { return ambient_dim() == 2; }

private:
    LineSubspace(Matrix b, double angle) : basis_(std::move(b)), angle_(angle) {}
    Matrix basis_;
    double angle_;
};

class RotationOp {
public:
    explicit RotationOp(Matrix m, const Tolerances& tol = default_tolerances()) : m_(std::move(m)) {
        if (m_.rows() != m_.cols() || m_.rows() < 2) throw InputError("RotationOp: matrix must be square, n >= 2");
        const double orth = (m_.transpose() * m_ - Matrix::Identity(m_.rows(), m_.cols())).cwiseAbs().maxCoeff();
        if (!(orth <= tol.rotation_orthogonality)) throw InputError("RotationOp: matrix is not orthogonal");
        if (!(m_.determinant() > 0)) throw InputError("RotationOp: determinant must be +1");
    }
    static RotationOp identity(int n) { return RotationOp(Matrix::Identity(n, n)); }
    static RotationOp planar(double theta) {
        Matrix m(2, 2);
        m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
        return RotationOp(std::move(m));
    }

    [[nodiscard]] const Matrix& matrix() const { return m_; }
    [[nodiscard]] int dim() const { return static_cast<int>(m_.rows()); }
    [[nodiscard]] Vector apply(const Vector& x) const { return m_ * x; }
    [[nodiscard]] RotationOp inverse() const { return RotationOp(m_.transpose()); }
    /// this ∘ other
    [[nodiscard]] RotationOp compose(const RotationOp& other) const {
        if (other.dim() != dim()) throw InputError("RotationOp::compose: dimension mismatch");
        return RotationOp(m_ * other.m_);
    }
    /// Planar rotation angle in (-pi, pi]; NaN outside 2D.
    [[nodiscard]] double planar_angle() const {
        if (dim() != 2) return std::nan("");
        return std::atan2(m_(1, 0), m_(0, 0));
    }

private:
    Matrix m_;
};

namespace detail {
inline void require_dim(int a, int b, const char* what) {
    if (a != b) throw InputError(std::string(what) + ": dimension mismatch");
}
}  // namespace detail

inline Point project_point(const Point& x, const LineSubspace& h) {
    detail::require_dim(x.dim(), h.ambient_dim(), "project_point");
    const Matrix& b = h.basis();
    return Point(Vector(b * (b.transpose() * x.coords())));
}

/// R_H x = x - 2 P_{H^perp} x, written as 2 P_H x - x.
inline Point reflect_point(const Point& x, const LineSubspace& h) {
    detail::require_dim(x.dim(), h.ambient_dim(), "reflect_point");
    const Matrix& b = h.basis();
    return Point(Vector(2.0 * (b * (b.transpose() * x.coords())) - x.coords()));
}

/// Rotation in span{u, v} carrying u onto v and fixing span{u, v}^perp.
/// Antipodal pairs have no distinguished plane and are rejected.
inline RotationOp rotation_between(const UnitDirection& u, const UnitDirection& v) {
    detail::require_dim(u.dim(), v.dim(), "rotation_between");
    const int n = u.dim();
    const Vector& a = u.coords();
    const Vector& b = v.coords();
    const double c = std::clamp(a.dot(b), -1.0, 1.0);
    if (c < -1.0 + 1e-12) throw InputError("rotation_between: antipodal directions, rotation plane is ambiguous");
    Vector w = b - c * a;
    const double s = w.norm();
    if (s < 1e-15) return RotationOp::identity(n);
    w /= s;
    Matrix r = Matrix::Identity(n, n) + (c - 1.0) * (a * a.transpose() + w * w.transpose()) +
               s * (w * a.transpose() - a * w.transpose());
    return RotationOp(std::move(r));
}

/// Operator norm ‖A - B‖ (largest singular value).
inline double rotation_distance(const RotationOp& a, const RotationOp& b) {
    detail::require_dim(a.dim(), b.dim(), "rotation_distance");
    const Matrix d = a.matrix() - b.matrix();
    Eigen::JacobiSVD<Matrix> svd(d);
    return svd.singularValues()(0);
}

}  // namespace symmkit
