#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace heteronet {

/// Small dense square matrix, row-major. Dimensions in this project stay
/// tiny (2x2 for the three networks, a few more for the generalized split
/// matrices), so no sparse or expression machinery.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(int n);

    int size() const { return n_; }
    double& operator()(int r, int c) { return a_[static_cast<size_t>(r) * n_ + c]; }
    double operator()(int r, int c) const { return a_[static_cast<size_t>(r) * n_ + c]; }

    Matrix operator*(const Matrix& rhs) const;
    std::vector<double> apply(std::span<const double> x) const;

    double trace() const;
    double det() const;  // closed form for n<=3, LU for larger

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    int n_ = 0;
    std::vector<double> a_;
};

/// Eigen-decomposition of a 2x2 real matrix by the characteristic roots.
struct Eigen2x2 {
    bool real = false;                 // both eigenvalues real
    bool tie = false;                  // |λ1| == |λ2| with λ1 != λ2
    double lambda_max = 0.0;           // when real: eigenvalue of largest |.|
    double lambda_min = 0.0;
    std::array<double, 2> v_max{};     // eigenvector for lambda_max
    std::array<double, 2> v_min{};
    double re = 0.0, im = 0.0;         // when complex: λ = re ± i·im
};

Eigen2x2 eigen_2x2(const Matrix& m);

/// Transition matrix with provenance tag: "m_123" for basic maps,
/// "M_2^(3)" for full return maps, "m_123[n=5]" for generalized splits.
struct TransitionMatrix {
    Matrix mat;
    std::string tag;
};

}  // namespace heteronet
