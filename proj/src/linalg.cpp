#include "gtp/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace gtp {

double dot(std::span<const double> a, std::span<const double> b)
{
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

Matrix Matrix::identity(std::size_t dim, double scale)
{
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = scale;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> values)
{
    Matrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

Vector Matrix::apply(std::span<const double> v) const
{
    Vector out(dim_);
    apply(v, out);
    return out;
}

void Matrix::apply(std::span<const double> v, std::span<double> out) const
{
    assert(v.size() == dim_ && out.size() == dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) s += (*this)(r, c) * v[c];
        out[r] = s;
    }
}

double Matrix::asymmetry() const
{
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = r + 1; c < dim_; ++c)
            worst = std::max(worst, std::abs((*this)(r, c) - (*this)(c, r)));
    return worst;
}

SymmetricEigen eigen_symmetric(const Matrix& input)
{
    const std::size_t m = input.dim();
    Matrix a(m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = r; c < m; ++c) a(r, c) = a(c, r) = input(r, c);
    Matrix v = Matrix::identity(m);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = r + 1; c < m; ++c) s += a(r, c) * a(r, c);
        return s;
    };
    double scale = 0.0;
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) scale += a(r, c) * a(r, c);

    for (int sweep = 0; sweep < 100 && off_norm() > 1e-32 * scale; ++sweep) {
        for (std::size_t p = 0; p < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Rotation angle that zeroes a(p,q) (Golub & Van Loan 8.4).
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;
                for (std::size_t k = 0; k < m; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = cs * akp - sn * akq;
                    a(k, q) = sn * akp + cs * akq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = cs * apk - sn * aqk;
                    a(q, k) = sn * apk + cs * aqk;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = cs * vkp - sn * vkq;
                    v(k, q) = sn * vkp + cs * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SymmetricEigen out{Vector(m), Matrix(m)};
    for (std::size_t j = 0; j < m; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (std::size_t k = 0; k < m; ++k) out.vectors(k, j) = v(k, order[j]);
    }
    return out;
}

Matrix spectral_function(const SymmetricEigen& eig, double (*f)(double))
{
    const std::size_t m = eig.values.size();
    Vector fv(m);
    for (std::size_t j = 0; j < m; ++j) fv[j] = f(eig.values[j]);
    Matrix out(m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j)
                s += eig.vectors(r, j) * fv[j] * eig.vectors(c, j);
            out(r, c) = s;
        }
    return out;
}

}  // namespace gtp
