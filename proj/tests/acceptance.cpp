// Acceptance gate: one PASS/FAIL line per criterion. Formulas and
// tolerances are written out here rather than taken from the library's
// own check functions.

#include "gtp/analysis.hpp"
#include "gtp/commands.hpp"
#include "gtp/parallel.hpp"
#include "gtp/rng.hpp"
#include "gtp/strategies.hpp"
#include "gtp/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numeric>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

using namespace gtp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& detail)
{
    std::printf("criterion %d %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// 1. running-average identity on random paths
void criterion_identity()
{
    const auto t0 = Clock::now();
    Engine rng(mix_seed(2024, 1));
    double worst = 0.0;
    int bad = 0;
    for (int p = 0; p < 1000; ++p) {
        const std::int64_t n = 2 + static_cast<std::int64_t>(rng() % 9999);
        std::vector<double> path(static_cast<std::size_t>(n));
        for (double& x : path) x = 3.0 * uniform_pm1(rng);
        const auto s = sum_identity_sides(path);
        const double tol = 1e-9 * (1.0 + std::abs(s.lhs)) * static_cast<double>(n);
        const double err = std::abs(s.lhs - s.rhs);
        worst = std::max(worst, err / tol);
        if (!(err <= tol)) ++bad;
    }
    const double secs = seconds_since(t0);
    report(1, bad == 0 && secs < 10.0,
           fmt("identity: 1000 paths, %d violations, worst |LHS-RHS|/tol = %.3g, %.2fs (limit 10s)", bad, worst,
               secs));
}

// 2. capital lower bound for P^c
void criterion_capital_bound()
{
    const auto t0 = Clock::now();
    std::vector<std::pair<RealitySpec, std::uint64_t>> runs;
    for (std::uint64_t s = 0; s < 20; ++s) runs.emplace_back(FairCoin{}, mix_seed(7, s));
    runs.emplace_back(BiasedCoin{0.6}, 1);
    runs.emplace_back(ConstantBias{0.2}, 0);
    runs.emplace_back(AdversarialMinimizer{1.0}, 0);
    runs.emplace_back(RatePath{1.2, 3}, 0);
    const std::vector<double> cs{0.05, 0.1, 0.25, 0.5};

    std::vector<double> margin(cs.size() * runs.size(), 0.0);
    std::vector<int> bad(margin.size(), 0);
    parallel_for(margin.size(), threads(), [&](std::size_t i) {
        const double c = cs[i / runs.size()];
        const auto& [reality, seed] = runs[i % runs.size()];
        double worst = std::numeric_limits<double>::infinity();
        const RoundObserver obs = [&](const RoundView& v) {
            if (v.n < 3) return;
            const double n = static_cast<double>(v.n);
            const double bound = 0.5 * c * (n * v.xbar[0] * v.xbar[0] - std::log(n)) - 1.5 * c;
            const double slack = v.log_capital - bound;
            worst = std::min(worst, slack / n);
            if (!(slack >= -1e-9 * n)) ++bad[i];
        };
        run_game(PastAverage{c}, reality, 100000, seed, 100000, obs);
        margin[i] = worst;
    });
    const int violations = static_cast<int>(std::count_if(bad.begin(), bad.end(), [](int b) { return b > 0; }));
    const double secs = seconds_since(t0);
    report(2, violations == 0 && secs < 60.0,
           fmt("capital bound: %zu runs x 1e5 rounds, %d failing runs, min (logK-bound)/n = %.3g, %.2fs (limit 60s)",
               margin.size(), violations, *std::min_element(margin.begin(), margin.end()), secs));
}

// 3. growth against a biased Reality, no growth against the adversary
void criterion_growth()
{
    const auto bias = run_game(PastAverage{0.5}, ConstantBias{0.2}, 100000, 0, 100000);
    const double threshold = 0.25 * (1e5 * 0.04 - std::log(1e5)) - 0.75;
    const double final_log = bias.log_capital.back();

    double max_capital = 0.0;
    double max_stat = 0.0;
    const RoundObserver obs = [&](const RoundView& v) {
        max_capital = std::max(max_capital, v.capital);
        if (v.n >= 1000) {
            const double n = static_cast<double>(v.n);
            max_stat = std::max(max_stat, std::sqrt(n) * std::abs(v.xbar[0]) / std::sqrt(std::log(n)));
        }
    };
    run_game(PastAverage{0.5}, AdversarialMinimizer{1.0}, 100000, 0, 100000, obs);
    report(3, final_log >= threshold && max_capital <= 1.0 && max_stat <= 3.0,
           fmt("growth: final log K = %.4f >= %.4f; adversary max K = %.17g <= 1, max statistic on [1e3,1e5] = %.4f "
               "<= 3",
               final_log, threshold, max_capital, max_stat));
}

// 4. mixture forms, moments, symmetric functions
void criterion_mixture()
{
    double worst = 0.0;
    for (int which = 0; which < 2; ++which) {
        Mixture m;
        if (which == 0) {
            m.distribution = UniformHalf{};
            m.quadrature_nodes = 64;
        } else {
            m.distribution = DyadicDiscrete{20};
        }
        const auto atoms = mixture_atoms(m);
        for (int p = 0; p < 100; ++p) {
            Engine rng(mix_seed(99 + which, static_cast<std::uint64_t>(p)));
            const int n = 1 + static_cast<int>(rng() % 30);
            MixtureAccounts acc(atoms);
            MomentTable mu(m.distribution);
            SymmetricFunctionState sym;
            for (int i = 1; i <= n; ++i) {
                const double a = acc.bet();
                const double b = mixture_bet_symmetric(mu, sym);
                const double scale = std::max({std::abs(a), std::abs(b), 1e-12 * acc.capital()});
                worst = std::max(worst, std::abs(a - b) / scale);
                const double x = uniform_pm1(rng);
                acc.update(x);
                update_symmetric_in_place(sym, x);
                const double ka = acc.capital();
                const double kb = mixture_capital_symmetric(mu, sym);
                worst = std::max(worst, std::abs(ka - kb) / std::max(ka, kb));
            }
        }
    }

    MomentTable mu(UniformHalf{});
    const bool moments_exact = mu(2) == 1.0 / 12.0 && mu(4) == 1.0 / 80.0;

    double sym_worst = 0.0;
    Engine rng(mix_seed(5, 5));
    for (std::size_t n = 1; n <= 12; ++n)
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<double> xs(n);
            for (double& x : xs) x = uniform_pm1(rng);
            SymmetricFunctionState s;
            for (double x : xs) update_symmetric_in_place(s, x);
            std::vector<double> oracle(n + 1, 0.0);
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                double prod = 1.0;
                unsigned k = 0;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask >> i & 1u) {
                        prod *= xs[i];
                        ++k;
                    }
                oracle[k] += prod;
            }
            for (std::size_t k = 0; k <= n; ++k)
                sym_worst = std::max(sym_worst, std::abs(s.e[k] - oracle[k]) / (1.0 + std::abs(oracle[k])));
        }
    report(4, worst <= 1e-9 && moments_exact && sym_worst <= 1e-12,
           fmt("mixture: accounts vs symmetric worst rel diff %.3g <= 1e-9 (UniformHalf-64, Dyadic-20, 100 paths "
               "each, n<=30); mu2 = %.17g, mu4 = %.17g %s; subset sums worst %.3g",
               worst, mu(2), mu(4), moments_exact ? "exact" : "NOT exact", sym_worst));
}

// 5. one-sided strategy: idle blocks, overshoot, separation
void criterion_one_sided()
{
    int const_bad = 0;
    int over_bad = 0;
    std::int64_t idle_blocks = 0;
    std::int64_t sign_changes = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto t = run_game(OneSided{Side::positive, 0.5}, FairCoin{}, 100000, mix_seed(55, s));
        const auto& avg = t.xbar;
        const auto N = static_cast<std::int64_t>(avg.size());
        std::int64_t n0 = 0;
        for (std::int64_t n = 10; n <= N; ++n)
            if (std::abs(avg[static_cast<std::size_t>(n - 1)]) <= 0.1) {
                n0 = n;
                break;
            }
        // negative block [k, l-1]: capital K_k .. K_l identical (K_n at index n-1)
        for (std::int64_t n = std::max<std::int64_t>(n0, 1); n0 > 0 && n <= N;) {
            if (avg[static_cast<std::size_t>(n - 1)] < 0.0) {
                const std::int64_t k = n;
                while (n <= N && avg[static_cast<std::size_t>(n - 1)] < 0.0) ++n;
                const std::int64_t l = std::min(n, N);
                ++idle_blocks;
                for (std::int64_t j = k; j <= l; ++j)
                    if (t.capital[static_cast<std::size_t>(j - 1)] != t.capital[static_cast<std::size_t>(k - 1)])
                        ++const_bad;
            } else {
                ++n;
            }
        }
        for (std::int64_t n = 2; n <= N; ++n) {
            const double a = avg[static_cast<std::size_t>(n - 2)];
            const double b = avg[static_cast<std::size_t>(n - 1)];
            if ((a >= 0.0) != (b >= 0.0)) {
                ++sign_changes;
                if (!(std::abs(b) <= 1.0 / static_cast<double>(n) + 1e-12)) ++over_bad;
            }
        }
    }
    const auto weak = run_game(OneSided{Side::positive, 0.5}, RatePath{1.0, 3}, 1000000, 0, 1000000);
    const auto strong = run_game(OneSided{Side::positive, 0.5}, RatePath{1.5, 3}, 1000000, 0, 1000000);
    const double lw = weak.log_capital.back();
    const double ls = strong.log_capital.back();
    report(5, const_bad == 0 && over_bad == 0 && idle_blocks > 0 && sign_changes > 0 && ls > lw,
           fmt("one-sided: %lld negative blocks, %d capital changes on them; %lld sign changes, %d overshoots; "
               "log K at 1e6: a=1.5 %.4f > a=1.0 %.4f",
               static_cast<long long>(idle_blocks), const_bad, static_cast<long long>(sign_changes), over_bad, ls,
               lw));
}

// 6. linear protocol
void criterion_linear()
{
    double reduction = 0.0;
    for (const RealitySpec& r : {RealitySpec{FairCoin{}}, RealitySpec{UniformNoise{}}, RealitySpec{ConstantBias{0.2}}}) {
        const auto s = run_game(PastAverage{0.5}, r, 10000, 3);
        const auto v = run_game(LinearOperator{LinearOperatorSpec(Matrix::identity(3, 0.5))}, r, 10000, 3);
        for (std::size_t i = 0; i < s.rows(); ++i)
            reduction = std::max(reduction, std::abs(s.capital[i] - v.capital[i]) / s.capital[i]);
    }

    Engine rng(mix_seed(66, 0));
    const int matrices = 24;
    std::vector<int> bound_bad(matrices, 0), sandwich_bad(matrices, 0);
    std::vector<double> spec_lo(matrices), spec_hi(matrices);
    std::vector<std::pair<Matrix, VectorUnitBall>> cases;
    for (int i = 0; i < matrices; ++i) {
        const std::size_t dim = 1 + static_cast<std::size_t>(i % 8);
        VectorUnitBall v;
        v.dim = dim;
        switch (i % 4) {
        case 0: v.inner = FairCoin{}; v.direction = DirectionMode::random; break;
        case 1: v.inner = UniformNoise{}; v.direction = dim >= 2 ? DirectionMode::rotating : DirectionMode::fixed; break;
        case 2: v.inner = RatePath{1.2, 3}; break;
        default: v.inner = AdversarialMinimizer{1.0}; break;
        }
        cases.emplace_back(random_spd_matrix(dim, 0.1, 0.5, rng), v);
    }
    parallel_for(cases.size(), threads(), [&](std::size_t i) {
        const LinearOperatorSpec op(cases[i].first);
        spec_lo[i] = op.c0();
        spec_hi[i] = op.c1();
        const double c0 = op.c0(), c1 = op.c1();
        Vector y(op.dim());
        const RoundObserver obs = [&](const RoundView& v) {
            op.sqrt_matrix().apply(v.xbar, y);
            const double y2 = dot(y, y);
            const double x2 = dot(v.xbar, v.xbar);
            if (!(c0 * x2 <= y2 + 1e-12 && y2 <= c1 * x2 + 1e-12)) ++sandwich_bad[i];
            if (v.n < 3) return;
            const double n = static_cast<double>(v.n);
            const double bound = 0.5 * n * y2 - 0.5 * c1 * std::log(n) - 1.5 * c1;
            if (!(v.log_capital - bound >= -1e-9 * n)) ++bound_bad[i];
        };
        run_game(LinearOperator{op}, cases[i].second, 10000, mix_seed(67, i), 10000, obs);
    });
    const int b = std::accumulate(bound_bad.begin(), bound_bad.end(), 0);
    const int sw = std::accumulate(sandwich_bad.begin(), sandwich_bad.end(), 0);
    const bool spectra_ok = *std::min_element(spec_lo.begin(), spec_lo.end()) >= 0.1 - 1e-12 &&
                            *std::max_element(spec_hi.begin(), spec_hi.end()) <= 0.5 + 1e-12;
    report(6, reduction <= 1e-12 && b == 0 && sw == 0 && spectra_ok,
           fmt("linear: A=0.5I vs P^c max rel capital diff %.3g <= 1e-12; %d random A (m=1..8, spectrum in "
               "[0.1,0.5]) x 1e4 rounds: %d bound violations, %d sandwich violations",
               reduction, matrices, b, sw));
}

// 7. Monte Carlo tail against the Azuma-Hoeffding bound
void criterion_azuma()
{
    const auto t0 = Clock::now();
    const std::int64_t trials = 100000;
    const auto est = monte_carlo_tail(FairCoin{}, 1000, 0.1, trials, 2718, threads());
    const double bound = 2.0 * std::exp(-5.0);
    const double slack = 3.0 * std::sqrt(bound * (1.0 - bound) / static_cast<double>(trials));
    const double secs = seconds_since(t0);
    report(7, est.frequency <= bound + slack && std::abs(est.bound - bound) < 1e-15 && secs < 30.0,
           fmt("azuma: empirical tail %.5f <= bound %.6f + slack %.6f (1e5 trials, n=1000, eps=0.1), %.2fs (limit "
               "30s)",
               est.frequency, bound, slack, secs));
}

// 8. state footprint
void criterion_memory()
{
    auto footprint_after = [](const StrategySpec& spec, std::int64_t rounds) {
        Skeptic sk(spec);
        Reality r(UniformNoise{}, 1);
        ScalarState st;
        for (std::int64_t n = 1; n <= rounds; ++n) {
            const double f = sk.fraction(st);
            const double x = r.next_move(f * st.capital, n);
            st = step_fraction(st, f, x);
            sk.observe(x);
        }
        return sk.footprint();
    };
    bool pc_flat = true;
    const std::size_t pc0 = footprint_after(PastAverage{0.5}, 1);
    for (std::int64_t h : {10, 1000, 100000}) pc_flat = pc_flat && footprint_after(PastAverage{0.5}, h) == pc0;

    Mixture sym;
    sym.form = MixtureForm::symmetric_functions;
    sym.symmetric_max_rounds = 512;
    bool sym_linear = true;
    std::size_t prev = footprint_after(sym, 0);
    for (std::int64_t n = 1; n <= 512; n *= 2) {
        const std::size_t f = footprint_after(sym, n);
        sym_linear = sym_linear && f == static_cast<std::size_t>(n) + prev;
    }
    const std::size_t s64 = footprint_after(sym, 64);
    const std::size_t s512 = footprint_after(sym, 512);
    report(8, pc_flat && sym_linear,
           fmt("memory: P^c stores %zu values at every horizon up to 1e5; symmetric mixture stores %zu at n=64, %zu "
               "at n=512 (n+1)",
               pc0, s64, s512));
}

// 9. byte-identical replay through the simulate command
void criterion_determinism()
{
    const auto dir = std::filesystem::temp_directory_path() / "gtp_acceptance";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "a.txt") << "0.3 0.05 0\n0.05 0.4 0.1\n0 0.1 0.2\n";
    const std::vector<std::string> configs = {
        "strategy.kind = past-average\nreality.kind = fair-coin\nrun.horizon = 20000\n",
        "strategy.kind = mixture\nreality.kind = fair-coin\nrun.horizon = 1000\n",
        "strategy.kind = mixture\nstrategy.mixture = dyadic\nreality.kind = biased-coin\nreality.p = 0.7\n"
        "run.horizon = 5000\n",
        "strategy.kind = one-sided-negative\nreality.kind = uniform-noise\nrun.horizon = 20000\nrun.record_every = 7\n",
        "strategy.kind = linear\nstrategy.matrix_path = a.txt\nreality.kind = uniform-noise\n"
        "reality.direction = random\nrun.horizon = 5000\n",
    };
    int mismatches = 0;
    int errors = 0;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto cfg = dir / ("c" + std::to_string(i) + ".cfg");
        std::ofstream(cfg) << configs[i];
        std::string bytes[2];
        for (int rep = 0; rep < 2; ++rep) {
            CommandOptions opts;
            opts.config_path = cfg.string();
            opts.seed = 31337 + i;
            opts.out = (dir / ("out" + std::to_string(rep) + ".csv")).string();
            std::ostringstream out, err;
            if (simulate_command(opts, out, err) != exit_ok) ++errors;
            std::ifstream in(opts.out, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            bytes[rep] = ss.str();
        }
        if (bytes[0] != bytes[1] || bytes[0].empty()) ++mismatches;
    }
    report(9, mismatches == 0 && errors == 0,
           fmt("determinism: %zu configs replayed, %d byte mismatches, %d run errors", configs.size(), mismatches,
               errors));
}

}  // namespace

int main()
{
    const auto t0 = Clock::now();
    criterion_identity();
    criterion_capital_bound();
    criterion_growth();
    criterion_mixture();
    criterion_one_sided();
    criterion_linear();
    criterion_azuma();
    criterion_memory();
    criterion_determinism();
    std::printf("acceptance: %d of 9 criteria failed (%.1fs total)\n", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
