#include "gtp/suites.hpp"

#include "gtp/parallel.hpp"
#include "gtp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gtp {

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

// Independent seed stream per suite.
std::uint64_t suite_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index)
{
    return mix_seed(mix_seed(seed, tag), index);
}

std::vector<VerificationReport> identity_suite(const SuiteParams& p, unsigned jobs)
{
    std::vector<VerificationReport> out(static_cast<std::size_t>(p.identity_paths) + 1);
    parallel_for(static_cast<std::size_t>(p.identity_paths), jobs, [&](std::size_t i) {
        Engine rng(suite_seed(p.seed, 1, i));
        const auto span = static_cast<std::uint64_t>(std::max<std::int64_t>(p.identity_max_length - 1, 1));
        const std::int64_t n = 2 + static_cast<std::int64_t>(rng() % span);
        std::vector<double> path(static_cast<std::size_t>(n));
        for (double& x : path) x = 3.0 * uniform_pm1(rng);
        auto r = check_sum_identity(path);
        r.name = "sum-identity path=" + std::to_string(i) + " n=" + std::to_string(n);
        out[i] = std::move(r);
    });
    out.back() = check_harmonic_bounds(1000000);
    return out;
}

std::vector<RealitySpec> bound_realities()
{
    return {FairCoin{}, BiasedCoin{0.6}, ConstantBias{0.2}, AdversarialMinimizer{1.0}, RatePath{1.2, 3}};
}

std::vector<VerificationReport> bound_suite(const SuiteParams& p, unsigned jobs)
{
    struct Cell {
        double c;
        RealitySpec reality;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (double c : {0.05, 0.1, 0.25, 0.5}) {
        for (const auto& r : bound_realities()) {
            const bool random = std::holds_alternative<FairCoin>(r) || std::holds_alternative<BiasedCoin>(r);
            const std::int64_t seeds = std::holds_alternative<FairCoin>(r) ? p.bound_seeds : 1;
            for (std::int64_t s = 0; s < seeds; ++s)
                cells.push_back({c, r, random ? suite_seed(p.seed, 2, static_cast<std::uint64_t>(s)) : 0});
        }
    }
    std::vector<VerificationReport> out(cells.size());
    parallel_for(cells.size(), jobs, [&](std::size_t i) {
        const auto& cell = cells[i];
        const auto traj = run_game(PastAverage{cell.c}, cell.reality, p.bound_horizon, cell.seed);
        auto r = check_capital_bound(traj);
        r.name = "capital-bound c=" + fmt(cell.c) + " " + describe(cell.reality) + " seed=" +
                 std::to_string(cell.seed);
        out[i] = std::move(r);
    });
    return out;
}

std::vector<VerificationReport> one_sided_suite(const SuiteParams& p, unsigned jobs)
{
    const auto seeds = static_cast<std::size_t>(p.bound_seeds);
    std::vector<VerificationReport> out(seeds * 2 * 3 + 1);
    parallel_for(seeds * 2, jobs, [&](std::size_t i) {
        const std::size_t s = i / 2;
        const Side side = i % 2 == 0 ? Side::positive : Side::negative;
        const std::uint64_t seed = suite_seed(p.seed, 3, s);
        const auto traj = run_game(OneSided{side, 0.5}, FairCoin{}, p.bound_horizon, seed);
        const std::int64_t n0 =
            default_block_start(traj.xbar).value_or(static_cast<std::int64_t>(traj.rows()) + 1);
        const auto blocks = decompose_blocks(traj.xbar, n0);
        const std::string tag = std::string(side == Side::positive ? " side=+" : " side=-") +
                                " seed=" + std::to_string(seed);
        auto structure = check_blocks(blocks, traj.xbar);
        structure.name = "blocks" + tag;
        auto constancy = check_one_sided_constancy(traj, blocks);
        constancy.name = "one-sided-constancy" + tag;
        auto overshoot = check_overshoot(traj);
        overshoot.name = "overshoot" + tag;
        out[3 * i] = std::move(structure);
        out[3 * i + 1] = std::move(constancy);
        out[3 * i + 2] = std::move(overshoot);
    });

    double weak = 0.0;
    double strong = 0.0;
    parallel_for(2, jobs, [&](std::size_t i) {
        const double a = i == 0 ? 1.0 : 1.5;
        const auto traj = run_game(OneSided{Side::positive, 0.5}, RatePath{a, 3}, p.separation_horizon, 0,
                                   p.separation_horizon);
        (i == 0 ? weak : strong) = traj.log_capital.back();
    });
    VerificationReport sep;
    sep.name = "one-sided-separation rate-path a=1.5 vs a=1";
    sep.tolerance = 0.0;
    sep.observe(p.separation_horizon, strong > weak ? 0.0 : weak - strong + 1.0);
    sep.values = {{"log_capital_a1", weak}, {"log_capital_a1.5", strong}};
    sep.finish();
    out.back() = std::move(sep);
    return out;
}

VerificationReport scalar_reduction_report(const RealitySpec& reality, std::size_t dim, std::int64_t horizon,
                                           std::uint64_t seed)
{
    const auto scalar = run_game(PastAverage{0.5}, reality, horizon, seed);
    const auto vec = run_game(LinearOperator{LinearOperatorSpec(Matrix::identity(dim, 0.5))}, reality, horizon,
                              seed);
    VerificationReport r;
    r.name = "linear-reduction A=0.5I dim=" + std::to_string(dim) + " " + describe(reality);
    r.tolerance = 1e-12;
    for (std::size_t row = 0; row < scalar.rows(); ++row) {
        const double a = scalar.log_capital[row];
        const double b = vec.log_capital[row];
        const double ka = scalar.capital[row];
        const double kb = vec.capital[row];
        const double rel_k = std::abs(ka - kb) / std::max(std::abs(ka), 1e-300);
        const double rel_log = std::abs(a - b) / std::max(1.0, std::abs(a));
        r.observe(scalar.n[row], std::max(rel_k, rel_log));
    }
    r.finish();
    return r;
}

std::vector<VerificationReport> linear_suite(const SuiteParams& p, unsigned jobs)
{
    const auto matrices = static_cast<std::size_t>(p.linear_matrices);
    std::vector<VerificationReport> out(2 + 2 * matrices);
    out[0] = scalar_reduction_report(FairCoin{}, 3, p.linear_horizon, suite_seed(p.seed, 4, 0));
    out[1] = scalar_reduction_report(ConstantBias{0.2}, 2, p.linear_horizon, 0);

    parallel_for(matrices, jobs, [&](std::size_t i) {
        Engine rng(suite_seed(p.seed, 5, i));
        const std::size_t dim = 2 + i % 7;
        const auto a = random_spd_matrix(dim, 0.1, 0.5, rng);
        VectorUnitBall reality;
        reality.dim = dim;
        switch (i % 5) {
        case 0: reality.inner = FairCoin{}; reality.direction = DirectionMode::random; break;
        case 1: reality.inner = UniformNoise{}; reality.direction = DirectionMode::rotating; break;
        case 2: reality.inner = RatePath{1.2, 3}; reality.direction = DirectionMode::fixed; break;
        case 3: reality.inner = AdversarialMinimizer{1.0}; break;
        default:
            reality.inner = ConstantBias{0.2};
            reality.axis.resize(dim);
            for (double& c : reality.axis) c = standard_normal(rng);
            break;
        }
        const auto traj = run_game(LinearOperator{LinearOperatorSpec(a)}, reality, p.linear_horizon, rng());
        const std::string tag = " matrix=" + std::to_string(i) + " dim=" + std::to_string(dim) + " " +
                                describe(reality);
        auto bound = check_linear_bound(traj);
        bound.name = "linear-bound" + tag;
        auto sandwich = check_linear_sandwich(traj);
        sandwich.name = "linear-sandwich" + tag;
        out[2 + 2 * i] = std::move(bound);
        out[3 + 2 * i] = std::move(sandwich);
    });
    return out;
}

VerificationReport mixture_agreement(const Mixture& m, const std::string& label, const SuiteParams& p)
{
    VerificationReport r;
    r.name = "mixture-agreement " + label;
    r.tolerance = 1e-9;
    const auto atoms = mixture_atoms(m);
    for (std::int64_t path = 0; path < p.mixture_paths; ++path) {
        Engine rng(suite_seed(p.seed, 6, static_cast<std::uint64_t>(path)));
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p.mixture_max_n));
        MixtureAccounts acc(atoms);
        MomentTable moments(m.distribution);
        SymmetricFunctionState sym;
        for (std::int64_t i = 1; i <= n; ++i) {
            const double cap = acc.capital();
            const double a = mixture_bet_accounts(acc);
            const double b = mixture_bet_symmetric(moments, sym);
            r.observe(i, std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12 * cap}));
            const double x = uniform_pm1(rng);
            acc.update(x);
            update_symmetric_in_place(sym, x);
            const double ka = acc.capital();
            const double kb = mixture_capital_symmetric(moments, sym);
            r.observe(i, std::abs(ka - kb) / std::max(std::abs(ka), std::abs(kb)));
        }
    }
    r.finish();
    return r;
}

std::vector<VerificationReport> mixture_suite(const SuiteParams& p, unsigned)
{
    std::vector<VerificationReport> out;
    Mixture uniform;
    uniform.distribution = UniformHalf{};
    uniform.quadrature_nodes = 64;
    Mixture dyadic;
    dyadic.distribution = DyadicDiscrete{20};
    out.push_back(mixture_agreement(uniform, "uniform-half nodes=64", p));
    out.push_back(mixture_agreement(dyadic, "dyadic levels=20", p));

    MomentTable mu(UniformHalf{});
    VerificationReport moments;
    moments.name = "uniform-moments";
    moments.tolerance = 0.0;
    moments.observe(2, std::abs(mu(2) - 1.0 / 12.0));
    moments.observe(4, std::abs(mu(4) - 1.0 / 80.0));
    for (std::size_t m = 1; m <= 15; m += 2) moments.observe(static_cast<std::int64_t>(m), std::abs(mu(m)));
    moments.values = {{"mu2", mu(2)}, {"mu4", mu(4)}};
    moments.finish();
    out.push_back(std::move(moments));

    VerificationReport subsets;
    subsets.name = "symmetric-functions subset-sums n<=12";
    subsets.tolerance = 1e-12;
    for (std::int64_t path = 0; path < p.mixture_paths; ++path) {
        Engine rng(suite_seed(p.seed, 7, static_cast<std::uint64_t>(path)));
        const auto n = static_cast<std::size_t>(1 + rng() % 12);
        std::vector<double> xs(n);
        for (double& x : xs) x = uniform_pm1(rng);
        SymmetricFunctionState sym;
        for (double x : xs) update_symmetric_in_place(sym, x);
        const auto oracle = subset_sum_symmetric(xs);
        for (std::size_t k = 0; k <= n; ++k)
            subsets.observe(static_cast<std::int64_t>(n),
                            std::abs(sym.e[k] - oracle[k]) / (1.0 + std::abs(oracle[k])));
    }
    subsets.finish();
    out.push_back(std::move(subsets));
    return out;
}

std::vector<VerificationReport> azuma_suite(const SuiteParams& p, unsigned jobs)
{
    std::vector<VerificationReport> out;
    for (const RealitySpec& r : {RealitySpec{FairCoin{}}, RealitySpec{UniformNoise{}}}) {
        const auto est = monte_carlo_tail(r, p.tail_n, p.tail_epsilon, p.tail_trials, suite_seed(p.seed, 8, 0), jobs);
        auto rep = tail_report(est, p.tail_n, p.tail_epsilon);
        rep.name = "azuma " + describe(r) + " n=" + std::to_string(p.tail_n) + " eps=" + fmt(p.tail_epsilon);
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace

SuiteParams suite_params(const KeyValueConfig& cfg)
{
    SuiteParams p;
    p.seed = cfg.get_uint("run.seed", p.seed);
    p.identity_paths = cfg.get_int("verify.paths", p.identity_paths);
    p.identity_max_length = cfg.get_int("verify.max_length", p.identity_max_length);
    p.bound_horizon = cfg.get_int("verify.horizon", p.bound_horizon);
    p.bound_seeds = cfg.get_int("verify.seeds", p.bound_seeds);
    p.tail_n = cfg.get_int("verify.tail_n", p.tail_n);
    p.tail_epsilon = cfg.get_double("verify.tail_epsilon", p.tail_epsilon);
    p.tail_trials = cfg.get_int("verify.tail_trials", p.tail_trials);
    p.mixture_paths = cfg.get_int("verify.mixture_paths", p.mixture_paths);
    p.mixture_max_n = cfg.get_int("verify.mixture_max_n", p.mixture_max_n);
    p.linear_horizon = cfg.get_int("verify.linear_horizon", p.linear_horizon);
    p.linear_matrices = cfg.get_int("verify.linear_matrices", p.linear_matrices);
    p.separation_horizon = cfg.get_int("verify.separation_horizon", p.separation_horizon);

    auto positive = [](const char* key, std::int64_t v) {
        if (v < 1) throw ConfigError(key, "must be >= 1");
    };
    positive("verify.paths", p.identity_paths);
    if (p.identity_max_length < 2) throw ConfigError("verify.max_length", "must be >= 2");
    if (p.bound_horizon < 3) throw ConfigError("verify.horizon", "must be >= 3");
    positive("verify.seeds", p.bound_seeds);
    positive("verify.tail_n", p.tail_n);
    if (!(p.tail_epsilon >= 0.0)) throw ConfigError("verify.tail_epsilon", "must be >= 0");
    positive("verify.tail_trials", p.tail_trials);
    positive("verify.mixture_paths", p.mixture_paths);
    if (p.mixture_max_n < 1 || p.mixture_max_n > 64)
        throw ConfigError("verify.mixture_max_n", "must lie in [1, 64]");
    if (p.linear_horizon < 3) throw ConfigError("verify.linear_horizon", "must be >= 3");
    positive("verify.linear_matrices", p.linear_matrices);
    positive("verify.separation_horizon", p.separation_horizon);
    return p;
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names = {"identity", "bound", "one-sided", "linear",
                                                   "mixture",  "azuma", "all"};
    return names;
}

std::vector<VerificationReport> run_suite(const std::string& name, const SuiteParams& params, unsigned jobs)
{
    if (name == "identity") return identity_suite(params, jobs);
    if (name == "bound") return bound_suite(params, jobs);
    if (name == "one-sided") return one_sided_suite(params, jobs);
    if (name == "linear") return linear_suite(params, jobs);
    if (name == "mixture") return mixture_suite(params, jobs);
    if (name == "azuma") return azuma_suite(params, jobs);
    if (name == "all") {
        std::vector<VerificationReport> out;
        for (const auto& s : suite_names()) {
            if (s == "all") continue;
            auto part = run_suite(s, params, jobs);
            std::move(part.begin(), part.end(), std::back_inserter(out));
        }
        return out;
    }
    throw std::invalid_argument("suite: unknown suite '" + name + "'");
}

Matrix random_spd_matrix(std::size_t dim, double lo, double hi, Engine& rng)
{
    // Gram-Schmidt on a Gaussian matrix gives a random orthonormal basis.
    std::vector<Vector> q;
    while (q.size() < dim) {
        Vector v(dim);
        for (double& c : v) c = standard_normal(rng);
        for (const auto& u : q) {
            const double d = dot(v, u);
            for (std::size_t k = 0; k < dim; ++k) v[k] -= d * u[k];
        }
        const double len = norm(v);
        if (len < 1e-8) continue;
        for (double& c : v) c /= len;
        q.push_back(std::move(v));
    }
    Vector lambda(dim);
    for (std::size_t i = 0; i < dim; ++i)
        lambda[i] = dim == 1 ? hi : (i == 0 ? lo : (i + 1 == dim ? hi : lo + (hi - lo) * uniform01(rng)));
    Matrix a(dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = r; c < dim; ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < dim; ++k) s += q[k][r] * lambda[k] * q[k][c];
            a(r, c) = s;
            a(c, r) = s;
        }
    return a;
}

std::vector<double> subset_sum_symmetric(std::span<const double> xs)
{
    const std::size_t n = xs.size();
    if (n > 20) throw std::invalid_argument("subset_sum_symmetric: n must be <= 20");
    std::vector<double> e(n + 1, 0.0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double prod = 1.0;
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1U) {
                prod *= xs[i];
                ++k;
            }
        e[k] += prod;
    }
    return e;
}

}  // namespace gtp
