#include "heteronet/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace heteronet {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    n_ = static_cast<int>(rows.size());
    a_.reserve(static_cast<size_t>(n_) * n_);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n_)
            throw std::invalid_argument("Matrix initializer must be square");
        a_.insert(a_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (n_ != rhs.n_) throw std::invalid_argument("Matrix size mismatch");
    Matrix out(n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) {
            const double v = (*this)(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < n_; ++j) out(i, j) += v * rhs(k, j);
        }
    return out;
}

std::vector<double> Matrix::apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("vector size mismatch");
    std::vector<double> out(n_, 0.0);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) out[i] += (*this)(i, j) * x[j];
    return out;
}

double Matrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double Matrix::det() const {
    if (n_ == 1) return (*this)(0, 0);
    if (n_ == 2) return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
    if (n_ == 3) {
        const Matrix& m = *this;
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }
    // LU with partial pivoting
    Matrix lu = *this;
    double det = 1.0;
    for (int col = 0; col < n_; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n_; ++r)
            if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
        if (lu(pivot, col) == 0.0) return 0.0;
        if (pivot != col) {
            for (int j = 0; j < n_; ++j) std::swap(lu(pivot, j), lu(col, j));
            det = -det;
        }
        det *= lu(col, col);
        for (int r = col + 1; r < n_; ++r) {
            const double f = lu(r, col) / lu(col, col);
            for (int j = col; j < n_; ++j) lu(r, j) -= f * lu(col, j);
        }
    }
    return det;
}

Eigen2x2 eigen_2x2(const Matrix& m) {
    if (m.size() != 2) throw std::invalid_argument("eigen_2x2 needs a 2x2 matrix");
    Eigen2x2 e;
    const double tr = m.trace();
    const double det = m.det();
    const double disc = tr * tr - 4.0 * det;
    if (disc < 0.0) {
        e.real = false;
        e.re = tr / 2.0;
        e.im = std::sqrt(-disc) / 2.0;
        return e;
    }
    e.real = true;
    const double root = std::sqrt(disc);
    // Larger-magnitude root first, computed cancellation-free.
    double l1 = (tr >= 0.0) ? (tr + root) / 2.0 : (tr - root) / 2.0;
    double l2 = (l1 != 0.0) ? det / l1 : (tr - l1);
    if (std::abs(l2) > std::abs(l1)) std::swap(l1, l2);
    e.lambda_max = l1;
    e.lambda_min = l2;
    e.tie = (l1 != l2) && (std::abs(l1) == std::abs(l2));

    auto eigvec = [&m](double lambda) -> std::array<double, 2> {
        // Rows of (M - λI) are both orthogonal complements of the
        // eigenvector; pick the numerically larger one.
        const std::array<double, 2> r0{m(0, 0) - lambda, m(0, 1)};
        const std::array<double, 2> r1{m(1, 0), m(1, 1) - lambda};
        const double n0 = std::abs(r0[0]) + std::abs(r0[1]);
        const double n1 = std::abs(r1[0]) + std::abs(r1[1]);
        std::array<double, 2> v{};
        if (n0 >= n1)
            v = {-r0[1], r0[0]};
        else
            v = {-r1[1], r1[0]};
        if (n0 + n1 == 0.0) v = {1.0, 0.0};  // M = λI
        return v;
    };
    e.v_max = eigvec(e.lambda_max);
    e.v_min = eigvec(e.lambda_min);
    return e;
}

}  // namespace heteronet
