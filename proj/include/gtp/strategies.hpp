#pragma once

// Skeptic's strategies.
//
// Every strategy here bets at most half its capital in the worst case,
// |M_n . x_n| <= K_{n-1} / 2, so capital stays strictly positive.

#include "gtp/game.hpp"
#include "gtp/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gtp {

// ---------------------------------------------------------------------------
// Specs

struct FixedEpsilon {
    double epsilon = 0.0;
};

struct PastAverage {
    double c = 0.5;
};

enum class Side { positive, negative };

struct OneSided {
    Side side = Side::positive;
    double c = 0.5;
};

/// Continuous uniform distribution on [-1/2, 1/2].
struct UniformHalf {};

/// Atoms eps_k = 2^-|k| with mass p_k = 2^-(|k|+1) for 1 <= |k| <= levels;
/// the tail mass beyond the truncation is folded onto k = +-levels.
struct DyadicDiscrete {
    int levels = 20;
};

using MixtureSpec = std::variant<UniformHalf, DyadicDiscrete>;

enum class MixtureForm { accounts, symmetric_functions };

struct Mixture {
    MixtureSpec distribution = UniformHalf{};
    MixtureForm form = MixtureForm::accounts;
    int quadrature_nodes = 64;
    /// The symmetric-function form holds binomially large intermediates.
    std::int64_t symmetric_max_rounds = 64;
};

/// Symmetric betting operator A with its spectral data.
class LinearOperatorSpec {
public:
    /// Throws std::invalid_argument unless A is symmetric to 1e-12.
    explicit LinearOperatorSpec(Matrix a);

    const Matrix& matrix() const { return a_; }
    const Matrix& sqrt_matrix() const { return sqrt_a_; }
    std::size_t dim() const { return a_.dim(); }
    double c0() const { return c0_; }
    double c1() const { return c1_; }
    const Vector& eigenvalues() const { return eig_.values; }

private:
    Matrix a_;
    SymmetricEigen eig_;
    Matrix sqrt_a_;
    double c0_ = 0.0;
    double c1_ = 0.0;
};

struct LinearOperator {
    LinearOperatorSpec op;
};

using StrategySpec = std::variant<FixedEpsilon, PastAverage, OneSided, Mixture, LinearOperator>;

/// Field-level range validation. Throws std::invalid_argument.
void validate(const StrategySpec& spec);
std::string describe(const StrategySpec& spec);
bool is_vector_strategy(const StrategySpec& spec);

// ---------------------------------------------------------------------------
// Bet rules (absolute bets M_n)

double fixed_epsilon_bet(double epsilon, double capital);
double past_average_bet(double c, double avg, double capital);
double one_sided_bet(Side side, double c, double avg, double capital);
Vector linear_bet(const LinearOperatorSpec& op, std::span<const double> avg, double capital);

struct SpectralBounds {
    double c0;
    double c1;
};

/// Smallest and largest eigenvalue. Rejects asymmetric input.
SpectralBounds spectral_bounds(const Matrix& a);

// ---------------------------------------------------------------------------
// Mixture machinery

/// Moments mu_m = E_F[eps^m] of the mixing distribution, extended on demand.
class MomentTable {
public:
    explicit MomentTable(MixtureSpec spec);

    /// mu_m for m >= 0 (mu_0 = 1).
    double operator()(std::size_t m);
    std::size_t size() const { return mu_.size(); }

private:
    MixtureSpec spec_;
    std::vector<double> mu_{1.0};
};

double uniform_moment(int m);

/// Atoms and weights of a discrete (or discretized) mixing distribution.
struct MixtureAtoms {
    std::vector<double> epsilon;
    std::vector<double> weight;
};

MixtureAtoms dyadic_atoms(int levels);
/// Gauss-Legendre rule mapped to [-1/2, 1/2]; weights sum to 1.
MixtureAtoms uniform_half_quadrature(int nodes);
MixtureAtoms mixture_atoms(const Mixture& m);

/// Elementary symmetric functions e_{n,0..n} of the moves so far.
struct SymmetricFunctionState {
    std::vector<double> e{1.0};
    std::int64_t rounds() const { return static_cast<std::int64_t>(e.size()) - 1; }
};

SymmetricFunctionState update_symmetric(SymmetricFunctionState sym, double x);
void update_symmetric_in_place(SymmetricFunctionState& sym, double x);

/// M_n* = sum_{i=0}^{n-1} mu_{i+1} e_{n-1,i}. Throws std::overflow_error when
/// the linear-scale sum is not finite.
double mixture_bet_symmetric(MomentTable& moments, const SymmetricFunctionState& sym);
/// K_n* = sum_{i=0}^{n} mu_i e_{n,i}.
double mixture_capital_symmetric(MomentTable& moments, const SymmetricFunctionState& sym);

/// One account per atom, each holding log prod_i (1 + eps_k x_i).
class MixtureAccounts {
public:
    explicit MixtureAccounts(MixtureAtoms atoms);

    void update(double x);

    /// M_n* = sum_k w_k eps_k exp(L_k); may overflow to +-inf.
    double bet() const;
    double capital() const;
    double log_capital() const;
    /// M_n* / K_{n-1}*, computed with a max-shifted exponential sum.
    double fraction() const;

    std::size_t size() const { return atoms_.epsilon.size(); }
    const MixtureAtoms& atoms() const { return atoms_; }
    std::span<const double> log_accounts() const { return log_account_; }

private:
    MixtureAtoms atoms_;
    std::vector<double> log_account_;
    double max_log_ = 0.0;
};

double mixture_bet_accounts(const MixtureAccounts& accounts);

// ---------------------------------------------------------------------------
// Runtime strategy with per-run private state

class Skeptic {
public:
    explicit Skeptic(const StrategySpec& spec);

    /// Relative bet M_n / K_{n-1} given everything known before round n.
    double fraction(const ScalarState& state);
    /// Relative bet vector for the linear protocol.
    void fraction(const VectorState& state, std::span<double> out);

    /// Feed Reality's move after the round.
    void observe(double x);

    /// Number of real values the strategy must retain to produce its next
    /// bet, counting x_bar_{n-1} and K_{n-1} where it reads them.
    std::size_t footprint() const;

    const StrategySpec& spec() const { return spec_; }

private:
    StrategySpec spec_;
    std::variant<std::monostate, MixtureAccounts, SymmetricFunctionState> mixture_state_;
    std::optional<MomentTable> moments_;
};

}  // namespace gtp
