#include "gtp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace gtp {

void VerificationReport::observe(std::int64_t n, double violation)
{
    ++rounds_checked;
    if (!(violation <= max_violation)) max_violation = violation;
    if (!first_violation && !(violation <= tolerance)) first_violation = n;
}

void VerificationReport::finish() { passed = max_violation <= tolerance; }

double VerificationReport::value(const std::string& key) const
{
    for (const auto& [k, v] : values)
        if (k == key) return v;
    throw std::out_of_range("no value '" + key + "' in report " + name);
}

namespace {

VerificationReport make_report(std::string name, double tolerance)
{
    VerificationReport r;
    r.name = std::move(name);
    r.tolerance = tolerance;
    return r;
}

double log_n(std::int64_t n) { return std::log(static_cast<double>(n)); }

}  // namespace

// ---------------------------------------------------------------------------

SumIdentitySides sum_identity_sides(std::span<const double> path)
{
    const auto n = static_cast<std::int64_t>(path.size());
    double lhs = 0.0;
    double weighted = 0.0;  // sum_{i=2}^n i/(i-1) xbar_i^2
    double squares = 0.0;   // x_1^2 + sum_{i=2}^n x_i^2/(i-1)
    double sum = 0.0;
    double prev_avg = 0.0;
    for (std::int64_t i = 1; i <= n; ++i) {
        const double x = path[i - 1];
        lhs += prev_avg * x;
        sum += x;
        const double avg = sum / static_cast<double>(i);
        if (i == 1) {
            squares += x * x;
        } else {
            const double di = static_cast<double>(i);
            weighted += di / (di - 1.0) * avg * avg;
            squares += x * x / (di - 1.0);
        }
        prev_avg = avg;
    }
    const double rhs = 0.5 * weighted + 0.5 * static_cast<double>(n) * prev_avg * prev_avg -
                       0.5 * squares;
    return {lhs, rhs};
}

VerificationReport check_sum_identity(std::span<const double> path)
{
    auto r = make_report("sum-identity", 1e-9);
    const auto n = static_cast<std::int64_t>(path.size());
    const auto sides = sum_identity_sides(path);
    r.observe(n, std::abs(sides.lhs - sides.rhs) /
                     ((1.0 + std::abs(sides.lhs)) * static_cast<double>(std::max<std::int64_t>(n, 1))));
    r.rounds_checked = n;
    r.values = {{"lhs", sides.lhs}, {"rhs", sides.rhs}, {"length", static_cast<double>(n)}};
    r.finish();
    return r;
}

double capital_lower_bound(std::int64_t n, double avg, double c)
{
    if (n < 3) throw std::invalid_argument("capital_lower_bound: n must be >= 3");
    return 0.5 * c * (static_cast<double>(n) * avg * avg - log_n(n)) - 1.5 * c;
}

VerificationReport check_capital_bound(const Trajectory& traj)
{
    const auto* pa = std::get_if<PastAverage>(&traj.strategy);
    if (pa == nullptr)
        throw std::invalid_argument("check_capital_bound: trajectory is not from a past-average run");
    auto r = make_report("capital-bound", 1e-9);
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t row = 0; row < traj.rows(); ++row) {
        const std::int64_t n = traj.n[row];
        if (n < 3) continue;
        const double bound = capital_lower_bound(n, traj.xbar[row], pa->c);
        const double margin = traj.log_capital[row] - bound;
        min_margin = std::min(min_margin, margin);
        r.observe(n, std::max(0.0, -margin) / static_cast<double>(n));
    }
    r.values = {{"c", pa->c}, {"min_margin", min_margin}};
    r.finish();
    return r;
}

double theorem_statistic(std::int64_t n, double avg)
{
    if (n < 3) throw std::invalid_argument("theorem_statistic: n must be >= 3");
    return std::sqrt(static_cast<double>(n)) * std::abs(avg) / std::sqrt(log_n(n));
}

double theorem_statistic(std::int64_t n, std::span<const double> avg)
{
    return theorem_statistic(n, norm(avg));
}

namespace {

const LinearOperatorSpec& linear_op(const Trajectory& traj, const char* who)
{
    const auto* lin = std::get_if<LinearOperator>(&traj.strategy);
    if (lin == nullptr)
        throw std::invalid_argument(std::string(who) + ": trajectory is not from a linear-operator run");
    return lin->op;
}

}  // namespace

VerificationReport check_linear_bound(const Trajectory& traj)
{
    const auto& op = linear_op(traj, "check_linear_bound");
    auto r = make_report("linear-bound", 1e-9);
    Vector ybar(traj.dim);
    double min_margin = std::numeric_limits<double>::infinity();
    const double c1 = op.c1();
    for (std::size_t row = 0; row < traj.rows(); ++row) {
        const std::int64_t n = traj.n[row];
        if (n < 3) continue;
        op.sqrt_matrix().apply(traj.xbar_at(row), ybar);
        const double y2 = dot(ybar, ybar);
        const double bound = 0.5 * static_cast<double>(n) * y2 - 0.5 * c1 * log_n(n) - 1.5 * c1;
        const double margin = traj.log_capital[row] - bound;
        min_margin = std::min(min_margin, margin);
        r.observe(n, std::max(0.0, -margin) / static_cast<double>(n));
    }
    r.values = {{"c0", op.c0()}, {"c1", c1}, {"min_margin", min_margin}};
    r.finish();
    return r;
}

VerificationReport check_linear_sandwich(const Trajectory& traj)
{
    const auto& op = linear_op(traj, "check_linear_sandwich");
    auto r = make_report("linear-sandwich", 1e-12);
    Vector ybar(traj.dim);
    for (std::size_t row = 0; row < traj.rows(); ++row) {
        op.sqrt_matrix().apply(traj.xbar_at(row), ybar);
        const double y2 = dot(ybar, ybar);
        const double x2 = dot(traj.xbar_at(row), traj.xbar_at(row));
        r.observe(traj.n[row], std::max({0.0, op.c0() * x2 - y2, y2 - op.c1() * x2}));
    }
    r.values = {{"c0", op.c0()}, {"c1", op.c1()}};
    r.finish();
    return r;
}

VerificationReport check_harmonic_bounds(std::int64_t n)
{
    if (n < 1) throw std::invalid_argument("check_harmonic_bounds: n must be >= 1");
    auto r = make_report("harmonic-bounds", 1e-12);
    double h = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) {
        h += 1.0 / static_cast<double>(k);
        const double lower = std::log(static_cast<double>(k) + 1.0);
        const double upper = 1.0 + log_n(k);
        r.observe(k, std::max({0.0, lower - h, h - upper}));
    }
    r.values = {{"harmonic", h},
                {"lower", std::log(static_cast<double>(n) + 1.0)},
                {"upper", 1.0 + log_n(n)}};
    r.finish();
    return r;
}

// ---------------------------------------------------------------------------

double azuma_tail_bound(std::int64_t n, double eps)
{
    if (n < 1) throw std::invalid_argument("azuma_tail_bound: n must be >= 1");
    if (!(eps >= 0.0)) throw std::invalid_argument("azuma_tail_bound: eps must be >= 0");
    return std::min(1.0, 2.0 * std::exp(-static_cast<double>(n) * eps * eps / 2.0));
}

TailEstimate monte_carlo_tail(const RealitySpec& reality, std::int64_t n, double eps,
                              std::int64_t trials, std::uint64_t seed, unsigned jobs)
{
    if (!is_martingale_difference(reality))
        throw std::invalid_argument(
            "monte_carlo_tail: reality must have conditional mean zero (fair-coin, uniform-noise)");
    if (trials < 1) throw std::invalid_argument("monte_carlo_tail: trials must be >= 1");
    const double bound = azuma_tail_bound(n, eps);

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(trials)));
    std::vector<std::int64_t> hits(jobs, 0);
    auto worker = [&](unsigned job) {
        for (std::int64_t t = job; t < trials; t += jobs) {
            Reality nature(reality, mix_seed(seed, static_cast<std::uint64_t>(t)));
            double sum = 0.0;
            for (std::int64_t i = 1; i <= n; ++i) sum += nature.next_move(0.0, i);
            if (std::abs(sum / static_cast<double>(n)) >= eps) ++hits[job];
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker, j);
    }

    TailEstimate est;
    est.trials = trials;
    std::int64_t total = 0;
    for (auto h : hits) total += h;
    est.frequency = static_cast<double>(total) / static_cast<double>(trials);
    est.bound = bound;
    est.slack = 3.0 * std::sqrt(bound * (1.0 - bound) / static_cast<double>(trials));
    return est;
}

VerificationReport tail_report(const TailEstimate& est, std::int64_t n, double eps)
{
    auto r = make_report("azuma-tail", est.slack);
    r.observe(n, std::max(0.0, est.frequency - est.bound));
    r.rounds_checked = est.trials;
    r.values = {{"n", static_cast<double>(n)},
                {"epsilon", eps},
                {"frequency", est.frequency},
                {"bound", est.bound},
                {"slack", est.slack}};
    r.finish();
    return r;
}

// ---------------------------------------------------------------------------

std::optional<std::int64_t> default_block_start(std::span<const double> avgs)
{
    for (std::size_t i = 9; i < avgs.size(); ++i)
        if (std::abs(avgs[i]) <= 0.1) return static_cast<std::int64_t>(i + 1);
    return std::nullopt;
}

namespace {

BlockKind kind_of(double avg) { return avg >= 0.0 ? BlockKind::nonnegative : BlockKind::negative; }

}  // namespace

BlockDecomposition decompose_blocks(std::span<const double> avgs, std::int64_t n0)
{
    if (n0 < 1) throw std::invalid_argument("decompose_blocks: n0 must be >= 1");
    BlockDecomposition d;
    d.n0 = n0;
    d.last = static_cast<std::int64_t>(avgs.size());
    for (std::int64_t n = n0; n <= d.last; ++n) {
        const BlockKind k = kind_of(avgs[n - 1]);
        if (d.blocks.empty() || d.blocks.back().kind != k)
            d.blocks.push_back({n, n, k});
        else
            d.blocks.back().end = n;
    }
    return d;
}

VerificationReport check_blocks(const BlockDecomposition& d, std::span<const double> avgs)
{
    auto r = make_report("block-structure", 0.0);
    std::int64_t expected_start = d.n0;
    for (std::size_t b = 0; b < d.blocks.size(); ++b) {
        const Block& blk = d.blocks[b];
        bool ok = blk.start == expected_start && blk.end >= blk.start;
        if (b > 0) ok = ok && blk.kind != d.blocks[b - 1].kind;
        for (std::int64_t n = blk.start; ok && n <= blk.end; ++n) ok = kind_of(avgs[n - 1]) == blk.kind;
        r.observe(blk.start, ok ? 0.0 : 1.0);
        expected_start = blk.end + 1;
    }
    if (!d.blocks.empty()) r.observe(d.last, d.blocks.back().end == d.last ? 0.0 : 1.0);
    r.values = {{"blocks", static_cast<double>(d.blocks.size())}};
    r.finish();
    return r;
}

VerificationReport check_one_sided_constancy(const Trajectory& traj, const BlockDecomposition& d)
{
    const auto* os = std::get_if<OneSided>(&traj.strategy);
    if (os == nullptr)
        throw std::invalid_argument("check_one_sided_constancy: trajectory is not from a one-sided run");
    if (traj.record_every != 1)
        throw std::invalid_argument("check_one_sided_constancy: needs an unthinned trajectory");
    const BlockKind idle = os->side == Side::positive ? BlockKind::negative : BlockKind::nonnegative;
    auto r = make_report("one-sided-constancy", 0.0);
    std::int64_t idle_blocks = 0;
    for (const Block& blk : d.blocks) {
        if (blk.kind != idle) continue;
        ++idle_blocks;
        const std::int64_t stop = std::min<std::int64_t>(blk.end + 1, traj.horizon);
        const double k0 = traj.capital[blk.start - 1];
        const double l0 = traj.log_capital[blk.start - 1];
        for (std::int64_t n = blk.start + 1; n <= stop; ++n) {
            const double k = traj.capital[n - 1];
            const double l = traj.log_capital[n - 1];
            double violation = 0.0;
            if (!(k == k0 && l == l0)) violation = std::max(std::abs(l - l0), 1e-300);
            r.observe(n, violation);
        }
    }
    r.values = {{"idle_blocks", static_cast<double>(idle_blocks)},
                {"blocks", static_cast<double>(d.blocks.size())}};
    r.finish();
    return r;
}

VerificationReport check_overshoot(std::span<const double> avgs)
{
    auto r = make_report("overshoot", 1e-12);
    std::int64_t changes = 0;
    for (std::size_t i = 1; i < avgs.size(); ++i) {
        const double prev = avgs[i - 1];
        const double cur = avgs[i];
        if ((prev >= 0.0) == (cur >= 0.0)) continue;
        ++changes;
        const auto n = static_cast<std::int64_t>(i + 1);
        r.observe(n, std::max(0.0, std::abs(cur) - 1.0 / static_cast<double>(n)));
    }
    r.values = {{"sign_changes", static_cast<double>(changes)}};
    r.finish();
    return r;
}

VerificationReport check_overshoot(const Trajectory& traj)
{
    if (traj.dim != 1) throw std::invalid_argument("check_overshoot: scalar trajectories only");
    if (traj.record_every != 1)
        throw std::invalid_argument("check_overshoot: needs an unthinned trajectory");
    return check_overshoot(std::span<const double>(traj.xbar));
}

// ---------------------------------------------------------------------------

VerificationReport check_trajectory_consistency(const Trajectory& traj)
{
    auto r = make_report("trajectory-consistency", 1e-9);
    const std::size_t m = traj.dim;
    for (std::size_t row = 0; row < traj.rows(); ++row) {
        const std::int64_t n = traj.n[row];
        double v = 0.0;
        if (!(traj.capital[row] > 0.0)) v = 1.0;
        if (std::isfinite(traj.capital[row]))
            v = std::max(v, std::abs(traj.log_capital[row] - std::log(traj.capital[row])));
        for (double xi : traj.xbar_at(row))
            if (!(std::abs(xi) <= 1.0)) v = std::max(v, 1.0);
        if (!admissible_move(traj.x_at(row))) v = std::max(v, 1.0);

        const bool consecutive = row > 0 && traj.n[row - 1] == n - 1;
        if (row == 0 && n == 1) {
            for (std::size_t i = 0; i < m; ++i) v = std::max(v, std::abs(traj.xbar_at(0)[i] - traj.x_at(0)[i]));
        }
        if (consecutive) {
            const auto prev_avg = traj.xbar_at(row - 1);
            const auto expect = update_average(prev_avg, n, traj.x_at(row));
            for (std::size_t i = 0; i < m; ++i)
                v = std::max(v, std::abs(expect[i] - traj.xbar_at(row)[i]));
            const double k_prev = traj.capital[row - 1];
            if (std::isfinite(k_prev) && std::isfinite(traj.capital[row])) {
                const double inc = dot(traj.bet_at(row), traj.x_at(row));
                v = std::max(v, std::abs(k_prev + inc - traj.capital[row]) / std::max(1.0, k_prev));
                const double l_expect = traj.log_capital[row - 1] + std::log1p(inc / k_prev);
                v = std::max(v, std::abs(l_expect - traj.log_capital[row]) /
                                    std::max(1.0, std::abs(traj.log_capital[row])));
            }
        }
        r.observe(n, v);
    }
    r.finish();
    return r;
}

}  // namespace gtp
