// Mixture epsilon-strategy: P* = sum_k p_k P^{eps_k}.
//
// Two computational routes to the same bet:
//   accounts   M_n* = sum_k p_k eps_k prod_{i<n} (1 + eps_k x_i), kept in log space
//   symmetric  M_n* = sum_{i=0}^{n-1} mu_{i+1} e_{n-1,i}
// The second needs all e_{n,i}, i.e. memory linear in n.

#include "gtp/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gtp {

double uniform_moment(int m)
{
    if (m < 0) throw std::invalid_argument("uniform_moment: m must be >= 0");
    if (m % 2 != 0) return 0.0;
    return 1.0 / ((m + 1) * std::ldexp(1.0, m));
}

MixtureAtoms dyadic_atoms(int levels)
{
    if (levels < 1) throw std::invalid_argument("dyadic_atoms: levels must be >= 1");
    MixtureAtoms atoms;
    for (int j = levels; j >= 1; --j) {
        atoms.epsilon.push_back(-std::ldexp(1.0, -j));
        atoms.weight.push_back(std::ldexp(1.0, -j - 1));
    }
    for (int j = 1; j <= levels; ++j) {
        atoms.epsilon.push_back(std::ldexp(1.0, -j));
        atoms.weight.push_back(std::ldexp(1.0, -j - 1));
    }
    // Tail sum_{j > levels} 2^-(j+1) = 2^-(levels+1) per side.
    const double tail = std::ldexp(1.0, -levels - 1);
    atoms.weight.front() += tail;
    atoms.weight.back() += tail;
    return atoms;
}

MixtureAtoms uniform_half_quadrature(int nodes)
{
    if (nodes < 1) throw std::invalid_argument("uniform_half_quadrature: nodes must be >= 1");
    const int n = nodes;
    MixtureAtoms atoms;
    atoms.epsilon.resize(n);
    atoms.weight.resize(n);
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // Map [-1,1] -> [-1/2,1/2]: nodes halve, weights halve (density 1 on length 1).
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        atoms.epsilon[i] = -0.5 * z;
        atoms.epsilon[n - 1 - i] = 0.5 * z;
        atoms.weight[i] = 0.5 * w;
        atoms.weight[n - 1 - i] = 0.5 * w;
    }
    if (n % 2 == 1) atoms.epsilon[n / 2] = 0.0;
    return atoms;
}

MixtureAtoms mixture_atoms(const Mixture& m)
{
    if (const auto* d = std::get_if<DyadicDiscrete>(&m.distribution)) return dyadic_atoms(d->levels);
    return uniform_half_quadrature(m.quadrature_nodes);
}

MomentTable::MomentTable(MixtureSpec spec) : spec_(spec) {}

double MomentTable::operator()(std::size_t m)
{
    while (mu_.size() <= m) {
        const int k = static_cast<int>(mu_.size());
        double mu = 0.0;
        if (const auto* d = std::get_if<DyadicDiscrete>(&spec_)) {
            if (k % 2 == 0) {
                // Symmetric atoms: 2 * sum over the positive half.
                const auto atoms = dyadic_atoms(d->levels);
                const std::size_t half = atoms.epsilon.size() / 2;
                for (std::size_t j = half; j < atoms.epsilon.size(); ++j)
                    mu += 2.0 * atoms.weight[j] * std::pow(atoms.epsilon[j], k);
            }
        } else {
            mu = uniform_moment(k);
        }
        mu_.push_back(mu);
    }
    return mu_[m];
}

void update_symmetric_in_place(SymmetricFunctionState& sym, double x)
{
    sym.e.push_back(0.0);
    for (std::size_t k = sym.e.size() - 1; k >= 1; --k) sym.e[k] += x * sym.e[k - 1];
}

SymmetricFunctionState update_symmetric(SymmetricFunctionState sym, double x)
{
    update_symmetric_in_place(sym, x);
    return sym;
}

double mixture_bet_symmetric(MomentTable& moments, const SymmetricFunctionState& sym)
{
    double bet = 0.0;
    for (std::size_t i = 0; i < sym.e.size(); ++i) bet += moments(i + 1) * sym.e[i];
    if (!std::isfinite(bet)) throw std::overflow_error("mixture_bet_symmetric: sum overflowed");
    return bet;
}

double mixture_capital_symmetric(MomentTable& moments, const SymmetricFunctionState& sym)
{
    double cap = 0.0;
    for (std::size_t i = 0; i < sym.e.size(); ++i) cap += moments(i) * sym.e[i];
    if (!std::isfinite(cap)) throw std::overflow_error("mixture_capital_symmetric: sum overflowed");
    return cap;
}

MixtureAccounts::MixtureAccounts(MixtureAtoms atoms)
    : atoms_(std::move(atoms)), log_account_(atoms_.epsilon.size(), 0.0)
{
}

void MixtureAccounts::update(double x)
{
    max_log_ = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < log_account_.size(); ++k) {
        log_account_[k] += std::log1p(atoms_.epsilon[k] * x);
        max_log_ = std::max(max_log_, log_account_[k]);
    }
}

namespace {

struct ShiftedSums {
    double bet;      // sum w eps exp(L - max)
    double capital;  // sum w exp(L - max)
};

ShiftedSums shifted_sums(const MixtureAtoms& atoms, std::span<const double> logs, double shift)
{
    // Atoms come in mirror pairs (k, size-1-k); summing each pair first makes
    // the bet cancel exactly while all accounts are still equal.
    ShiftedSums s{0.0, 0.0};
    const std::size_t size = logs.size();
    for (std::size_t k = 0, j = size - 1; k <= j && j < size; ++k, --j) {
        const double vk = atoms.weight[k] * std::exp(logs[k] - shift);
        if (k == j) {
            s.bet += atoms.epsilon[k] * vk;
            s.capital += vk;
            break;
        }
        const double vj = atoms.weight[j] * std::exp(logs[j] - shift);
        s.bet += atoms.epsilon[k] * vk + atoms.epsilon[j] * vj;
        s.capital += vk + vj;
    }
    return s;
}

}  // namespace

double MixtureAccounts::bet() const
{
    const auto s = shifted_sums(atoms_, log_account_, max_log_);
    return s.bet * std::exp(max_log_);
}

double MixtureAccounts::capital() const { return std::exp(log_capital()); }

double MixtureAccounts::log_capital() const
{
    return max_log_ + std::log(shifted_sums(atoms_, log_account_, max_log_).capital);
}

double MixtureAccounts::fraction() const
{
    const auto s = shifted_sums(atoms_, log_account_, max_log_);
    return s.bet / s.capital;
}

double mixture_bet_accounts(const MixtureAccounts& accounts) { return accounts.bet(); }

}  // namespace gtp
