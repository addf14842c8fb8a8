#pragma once

// Small dense linear algebra for the m-dimensional linear protocol.
// Dimensions here are tiny (m <= a few dozen), so everything is plain
// row-major storage and O(m^3) algorithms.

#include <cstddef>
#include <span>
#include <vector>

namespace gtp {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> v);

/// Square row-major matrix.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

    static Matrix identity(std::size_t dim, double scale = 1.0);
    static Matrix diagonal(std::span<const double> values);

    std::size_t dim() const { return dim_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

    Vector apply(std::span<const double> v) const;
    void apply(std::span<const double> v, std::span<double> out) const;

    /// Largest |A(r,c) - A(c,r)|.
    double asymmetry() const;

private:
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

struct SymmetricEigen {
    Vector values;   // ascending
    Matrix vectors;  // column j is the eigenvector for values[j]
};

/// Cyclic Jacobi rotations. Input must be symmetric; only the upper
/// triangle is trusted.
SymmetricEigen eigen_symmetric(const Matrix& a);

/// V diag(f(lambda)) V^T for a decomposition.
Matrix spectral_function(const SymmetricEigen& eig, double (*f)(double));

}  // namespace gtp
