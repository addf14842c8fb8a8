#pragma once

// Finite-horizon checks of the identities and capital bounds behind the
// rate theorems. The theorems themselves are limsup statements; what is
// asserted here are the inequalities their proofs establish at every n.
//
// All logarithms are natural.

#include "gtp/play.hpp"
#include "gtp/reality.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gtp {

/// Outcome of one check. max_violation is normalised by the check's
/// per-point scale so that passed == (max_violation <= tolerance).
struct VerificationReport {
    std::string name;
    bool passed = true;
    double max_violation = 0.0;
    double tolerance = 0.0;
    std::optional<std::int64_t> first_violation;
    std::int64_t rounds_checked = 0;
    std::vector<std::pair<std::string, double>> values;

    /// Records one point; violation is already normalised.
    void observe(std::int64_t n, double violation);
    void finish();
    double value(const std::string& key) const;
};

// ---------------------------------------------------------------------------
// Identity and bound arithmetic

struct SumIdentitySides {
    double lhs;  // sum_{i=1}^n xbar_{i-1} x_i
    double rhs;  // 1/2 sum_{i=2}^n i/(i-1) xbar_i^2 + n/2 xbar_n^2 - 1/2 (x_1^2 + sum_{i>=2} x_i^2/(i-1))
};

SumIdentitySides sum_identity_sides(std::span<const double> path);

/// |LHS - RHS| <= 1e-9 (1 + |LHS|) n. Path values need not be bounded.
VerificationReport check_sum_identity(std::span<const double> path);

/// (c/2)(n avg^2 - ln n) - 3c/2. Rejects n < 3.
double capital_lower_bound(std::int64_t n, double avg, double c);

/// log K_n >= capital_lower_bound(n, xbar_n, c) - 1e-9 n at every recorded
/// n >= 3. Rejects trajectories not produced by PastAverage.
VerificationReport check_capital_bound(const Trajectory& traj);

/// sqrt(n) |avg| / sqrt(ln n), or with ||avg|| for vectors. Rejects n < 3.
double theorem_statistic(std::int64_t n, double avg);
double theorem_statistic(std::int64_t n, std::span<const double> avg);

/// For a LinearOperator run, with ybar = A^{1/2} xbar:
///   log K_n >= n/2 ||ybar_n||^2 - (c1/2) ln n - 3 c1/2        (slack 1e-9 n)
///   c0 ||xbar||^2 <= ||ybar||^2 <= c1 ||xbar||^2              (slack 1e-12)
VerificationReport check_linear_bound(const Trajectory& traj);
VerificationReport check_linear_sandwich(const Trajectory& traj);

/// log(n+1) <= H_n <= 1 + log n.
VerificationReport check_harmonic_bounds(std::int64_t n);

// ---------------------------------------------------------------------------
// Tail bound

/// min(1, 2 exp(-n eps^2 / 2)). Rejects n < 1 and eps < 0.
double azuma_tail_bound(std::int64_t n, double eps);

struct TailEstimate {
    double frequency = 0.0;
    double bound = 0.0;
    double slack = 0.0;  // 3 sqrt(bound (1 - bound) / trials)
    std::int64_t trials = 0;
    bool dominated() const { return frequency <= bound + slack; }
};

/// Fraction of independent runs with |xbar_n| >= eps. Only mean-zero
/// Reality variants are accepted. Trials use derived seeds and may run
/// on `jobs` threads; the result does not depend on jobs.
TailEstimate monte_carlo_tail(const RealitySpec& reality, std::int64_t n, double eps,
                              std::int64_t trials, std::uint64_t seed, unsigned jobs = 1);

VerificationReport tail_report(const TailEstimate& est, std::int64_t n, double eps);

// ---------------------------------------------------------------------------
// One-sided block structure

enum class BlockKind { nonnegative, negative };

struct Block {
    std::int64_t start;  // k
    std::int64_t end;    // l - 1, inclusive
    BlockKind kind;
};

struct BlockDecomposition {
    std::int64_t n0 = 0;
    std::int64_t last = 0;
    std::vector<Block> blocks;
};

/// First n >= 10 with |xbar_n| <= 0.1, or nullopt. avgs[i] is xbar_{i+1}.
std::optional<std::int64_t> default_block_start(std::span<const double> avgs);

/// Maximal alternating runs of xbar_n >= 0 / xbar_n < 0 over [n0, N],
/// with avgs[i] = xbar_{i+1}. Empty when n0 > N.
BlockDecomposition decompose_blocks(std::span<const double> avgs, std::int64_t n0);

/// Structural invariants: tiling, alternation, sign agreement.
VerificationReport check_blocks(const BlockDecomposition& d, std::span<const double> avgs);

/// On a one-sided run the idle blocks (negative for P+, nonnegative for
/// P-) must leave capital exactly unchanged from K_k through K_l.
/// Needs record_every == 1. Tolerance is zero.
VerificationReport check_one_sided_constancy(const Trajectory& traj, const BlockDecomposition& d);

/// At every block boundary n (xbar_{n-1} >= 0 > xbar_n or the reverse),
/// |xbar_n| <= 1/n + 1e-12. avgs[i] = xbar_{i+1}.
VerificationReport check_overshoot(std::span<const double> avgs);
VerificationReport check_overshoot(const Trajectory& traj);

// ---------------------------------------------------------------------------
// Trajectory consistency (game-core invariants)

/// avg consistency, capital positivity, log/linear capital agreement and,
/// for unthinned runs, the step rule between consecutive rows.
VerificationReport check_trajectory_consistency(const Trajectory& traj);

}  // namespace gtp
