#include "gtp/play.hpp"
#include "gtp/rng.hpp"
#include "gtp/strategies.hpp"
#include "gtp/suites.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

using namespace gtp;

TEST_CASE("fixed epsilon bet")
{
    CHECK(fixed_epsilon_bet(0.0, 7.0) == 0.0);
    CHECK(fixed_epsilon_bet(0.5, 1.0) == 0.5);
    CHECK(fixed_epsilon_bet(-0.25, 4.0) == -1.0);
}

TEST_CASE("past average bet")
{
    CHECK(past_average_bet(0.5, 0.0, 1.0) == 0.0);
    CHECK(past_average_bet(0.5, 1.0, 2.0) == 1.0);
    CHECK(past_average_bet(0.25, -0.4, 10.0) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("one-sided bets")
{
    CHECK(one_sided_bet(Side::positive, 0.5, -0.3, 5.0) == 0.0);
    CHECK(one_sided_bet(Side::positive, 0.5, 0.3, 5.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(one_sided_bet(Side::negative, 0.5, 0.3, 5.0) == 0.0);
    CHECK(one_sided_bet(Side::negative, 0.5, -0.3, 5.0) == doctest::Approx(-0.75).epsilon(1e-15));
}

TEST_CASE("spec validation names the field")
{
    CHECK_THROWS_WITH_AS(validate(PastAverage{0.6}), doctest::Contains("strategy.c"), std::invalid_argument);
    CHECK_THROWS_AS(validate(PastAverage{0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(FixedEpsilon{0.51}), std::invalid_argument);
    CHECK_THROWS_AS(validate(OneSided{Side::positive, -0.1}), std::invalid_argument);
    Mixture m;
    m.distribution = DyadicDiscrete{0};
    CHECK_THROWS_AS(validate(m), std::invalid_argument);
    CHECK_THROWS_AS(validate(LinearOperator{LinearOperatorSpec(Matrix::identity(2, 0.6))}), std::invalid_argument);
    Matrix asym = Matrix::identity(2, 0.3);
    asym(0, 1) = 0.1;
    CHECK_THROWS_AS(LinearOperatorSpec{asym}, std::invalid_argument);
    CHECK_THROWS_AS(validate(LinearOperator{LinearOperatorSpec(Matrix::identity(2, 0.0))}), std::invalid_argument);
    CHECK_NOTHROW(validate(PastAverage{0.5}));
}

TEST_CASE("uniform moments")
{
    CHECK(uniform_moment(0) == 1.0);
    CHECK(uniform_moment(1) == 0.0);
    CHECK(uniform_moment(2) == 1.0 / 12.0);
    CHECK(uniform_moment(3) == 0.0);
    CHECK(uniform_moment(4) == 1.0 / 80.0);
    // integral of x^m over [-1/2, 1/2] in closed form
    for (int m = 0; m <= 30; m += 2) CHECK(uniform_moment(m) == doctest::Approx(std::pow(0.5, m) / (m + 1)));
}

TEST_CASE("moment table matches the atoms it stands for")
{
    MomentTable dy(DyadicDiscrete{20});
    const auto atoms = dyadic_atoms(20);
    double total = 0.0;
    for (double w : atoms.weight) total += w;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
    for (int m = 0; m <= 12; ++m) {
        double mu = 0.0;
        for (std::size_t k = 0; k < atoms.epsilon.size(); ++k) mu += atoms.weight[k] * std::pow(atoms.epsilon[k], m);
        CHECK(dy(static_cast<std::size_t>(m)) == doctest::Approx(mu).epsilon(1e-14));
    }
    const auto gl = uniform_half_quadrature(64);
    double gl_total = 0.0;
    for (std::size_t k = 0; k < gl.epsilon.size(); ++k) {
        gl_total += gl.weight[k];
        CHECK(std::abs(gl.epsilon[k]) < 0.5);
    }
    CHECK(gl_total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("symmetric function recurrence")
{
    auto s = update_symmetric(SymmetricFunctionState{}, 0.5);
    CHECK(s.e == std::vector<double>{1.0, 0.5});
    s = update_symmetric(s, -0.5);
    REQUIRE(s.e.size() == 3);
    CHECK(s.e[0] == 1.0);
    CHECK(s.e[1] == 0.0);
    CHECK(s.e[2] == -0.25);
    CHECK(s.rounds() == 2);
}

TEST_CASE("symmetric functions match exhaustive subset sums")
{
    Engine rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 12;
        std::vector<double> xs(n);
        for (double& x : xs) x = uniform_pm1(rng);
        SymmetricFunctionState s;
        for (double x : xs) update_symmetric_in_place(s, x);
        // Independent oracle: Gray-free direct enumeration.
        std::vector<double> oracle(n + 1, 0.0);
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            double p = 1.0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1u << i)) p *= xs[i];
            oracle[static_cast<std::size_t>(__builtin_popcount(mask))] += p;
        }
        for (std::size_t k = 0; k <= n; ++k) CHECK(s.e[k] == doctest::Approx(oracle[k]).epsilon(1e-12).scale(1.0));
        CHECK(subset_sum_symmetric(xs).size() == n + 1);
    }
}

TEST_CASE("mixture bet: first round is zero")
{
    MomentTable mu(UniformHalf{});
    CHECK(mixture_bet_symmetric(mu, SymmetricFunctionState{}) == 0.0);
    MixtureAccounts acc(uniform_half_quadrature(64));
    CHECK(std::abs(acc.bet()) < 1e-17);
    MixtureAccounts dy(dyadic_atoms(20));
    CHECK(std::abs(dy.bet()) < 1e-17);
}

TEST_CASE("mixture bet: uniform after x1 = 1 is 1/12")
{
    MomentTable mu(UniformHalf{});
    const auto s = update_symmetric(SymmetricFunctionState{}, 1.0);
    CHECK(mixture_bet_symmetric(mu, s) == 1.0 / 12.0);
    MixtureAccounts acc(uniform_half_quadrature(64));
    acc.update(1.0);
    CHECK(acc.bet() == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("mixture bet: dyadic K=2 after x1 = 1 is a four-term sum")
{
    // atoms +-1/2 with mass 1/4, +-1/4 with mass 1/8 plus the folded tail 1/8
    const double expected = 0.25 * 0.5 * 1.5 + 0.25 * -0.5 * 0.5 + 0.25 * 0.25 * 1.25 + 0.25 * -0.25 * 0.75;
    CHECK(expected == doctest::Approx(0.15625));
    MixtureAccounts acc(dyadic_atoms(2));
    acc.update(1.0);
    CHECK(acc.bet() == doctest::Approx(0.15625).epsilon(1e-15));
    MomentTable mu(DyadicDiscrete{2});
    CHECK(mixture_bet_symmetric(mu, update_symmetric(SymmetricFunctionState{}, 1.0)) == doctest::Approx(0.15625));
}

namespace {

// Composite 4-point Gauss-Legendre over 256 panels of [-1/2, 1/2].
template <class F>
double composite_gauss(F f)
{
    const double a = 0.3399810435848563, b = 0.8611363115940526;
    const double wa = 0.6521451548625461, wb = 0.3478548451374538;
    const int panels = 256;
    const double h = 1.0 / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = -0.5 + (p + 0.5) * h;
        const double r = 0.5 * h;
        total += r * (wa * (f(mid - r * a) + f(mid + r * a)) + wb * (f(mid - r * b) + f(mid + r * b)));
    }
    return total;
}

}  // namespace

TEST_CASE("mixture bet: uniform, 20 moves, against an independent 1024-node quadrature")
{
    Engine rng(3);
    std::vector<double> xs(20);
    for (double& x : xs) x = uniform_pm1(rng);
    MixtureAccounts acc(uniform_half_quadrature(64));
    MomentTable mu(UniformHalf{});
    SymmetricFunctionState s;
    for (double x : xs) {
        acc.update(x);
        update_symmetric_in_place(s, x);
    }
    const double oracle = composite_gauss([&](double e) {
        double p = e;
        for (double x : xs) p *= 1.0 + e * x;
        return p;
    });
    CHECK(acc.bet() == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(mixture_bet_symmetric(mu, s) == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("mixture: accounts and symmetric forms agree on uniform after (1, 1)")
{
    MixtureAccounts acc(uniform_half_quadrature(64));
    MomentTable mu(UniformHalf{});
    SymmetricFunctionState s;
    for (double x : {1.0, 1.0}) {
        acc.update(x);
        update_symmetric_in_place(s, x);
    }
    CHECK(acc.bet() == doctest::Approx(mixture_bet_symmetric(mu, s)).epsilon(1e-9));
    CHECK(acc.capital() == doctest::Approx(mixture_capital_symmetric(mu, s)).epsilon(1e-9));
}

TEST_CASE("mixture accounts: fraction is bet / capital and survives large n")
{
    MixtureAccounts acc(dyadic_atoms(20));
    for (int i = 0; i < 50; ++i) acc.update(i % 3 == 0 ? -0.5 : 1.0);
    CHECK(acc.fraction() == doctest::Approx(acc.bet() / acc.capital()).epsilon(1e-12));
    for (int i = 0; i < 5000; ++i) acc.update(1.0);
    CHECK(std::isfinite(acc.fraction()));
    CHECK(acc.fraction() == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::isfinite(acc.log_capital()));
}

TEST_CASE("linear bet")
{
    const LinearOperatorSpec half(Matrix::identity(3, 0.5));
    const Vector avg{0.4, 0.0, 0.0};
    const auto bet = linear_bet(half, avg, 1.0);
    CHECK(bet[0] == past_average_bet(0.5, 0.4, 1.0));
    CHECK(bet[1] == 0.0);
    CHECK(bet[2] == 0.0);

    const Vector diag{0.1, 0.5};
    const LinearOperatorSpec d(Matrix::diagonal(diag));
    const Vector e1{1.0, 0.0};
    const auto b2 = linear_bet(d, e1, 2.0);
    CHECK(b2[0] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(b2[1] == 0.0);
}

TEST_CASE("linear bet respects the Cauchy-Schwarz bound")
{
    Engine rng(17);
    for (int t = 0; t < 10; ++t) {
        const std::size_t dim = 2 + t % 7;
        const LinearOperatorSpec op(random_spd_matrix(dim, 0.05, 0.5, rng));
        Vector avg(dim);
        for (double& c : avg) c = standard_normal(rng);
        const double scale = uniform01(rng) / norm(avg);
        for (double& c : avg) c *= scale;
        const double k = 3.0;
        const auto bet = linear_bet(op, avg, k);
        for (int j = 0; j < 1000; ++j) {
            Vector x(dim);
            for (double& c : x) c = standard_normal(rng);
            const double len = norm(x);
            for (double& c : x) c /= len;
            CHECK(std::abs(dot(bet, x)) / k <= op.c1() + 1e-15);
        }
    }
}

TEST_CASE("spectral bounds")
{
    const auto a = spectral_bounds(Matrix::identity(4, 0.3));
    CHECK(a.c0 == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(a.c1 == doctest::Approx(0.3).epsilon(1e-15));
    const Vector diag{0.1, 0.2, 0.5};
    const auto b = spectral_bounds(Matrix::diagonal(diag));
    CHECK(b.c0 == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(b.c1 == doctest::Approx(0.5).epsilon(1e-15));
    Matrix asym = Matrix::identity(2);
    asym(1, 0) = 0.5;
    CHECK_THROWS_AS(spectral_bounds(asym), std::invalid_argument);
}

TEST_CASE("spectral bounds and square root against an independent eigensolver")
{
    Engine rng(23);
    for (int t = 0; t < 20; ++t) {
        const std::size_t dim = 8;
        Matrix m(dim);
        Eigen::MatrixXd e(dim, dim);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = r; c < dim; ++c) {
                const double v = standard_normal(rng);
                m(r, c) = m(c, r) = v;
                e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
                e(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = v;
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e);
        const auto& ev = solver.eigenvalues();
        const auto bounds = spectral_bounds(m);
        CHECK(bounds.c0 == doctest::Approx(ev.minCoeff()).epsilon(1e-8).scale(1.0));
        CHECK(bounds.c1 == doctest::Approx(ev.maxCoeff()).epsilon(1e-8).scale(1.0));
        const auto mine = eigen_symmetric(m);
        for (std::size_t i = 0; i < dim; ++i)
            CHECK(mine.values[i] == doctest::Approx(ev(static_cast<Eigen::Index>(i))).epsilon(1e-8).scale(1.0));
    }
    for (int t = 0; t < 10; ++t) {
        const auto a = random_spd_matrix(6, 0.1, 0.5, rng);
        const LinearOperatorSpec op(a);
        Eigen::MatrixXd e(6, 6);
        for (Eigen::Index r = 0; r < 6; ++r)
            for (Eigen::Index c = 0; c < 6; ++c) e(r, c) = a(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e);
        const Eigen::MatrixXd root = solver.operatorSqrt();
        for (std::size_t r = 0; r < 6; ++r)
            for (std::size_t c = 0; c < 6; ++c)
                CHECK(op.sqrt_matrix()(r, c) ==
                      doctest::Approx(root(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)))
                          .epsilon(1e-10)
                          .scale(1.0));
        CHECK(op.c0() == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(op.c1() == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("Skeptic: relative bets and footprint")
{
    Skeptic pc(PastAverage{0.5});
    ScalarState st;
    CHECK(pc.fraction(st) == 0.0);
    st = step(st, 0.0, 0.4);
    CHECK(pc.fraction(st) == doctest::Approx(0.2));
    CHECK(pc.footprint() == 2);

    Mixture sym;
    sym.form = MixtureForm::symmetric_functions;
    sym.symmetric_max_rounds = 5;
    Skeptic ms(sym);
    ScalarState s2;
    for (int i = 0; i < 5; ++i) {
        const double f = ms.fraction(s2);
        s2 = step_fraction(s2, f, 1.0);
        ms.observe(1.0);
        CHECK(ms.footprint() == static_cast<std::size_t>(i + 2));
    }
    CHECK_THROWS_AS(ms.fraction(s2), StepError);
}

TEST_CASE("Skeptic: accounts and symmetric mixtures produce the same game")
{
    Mixture acc;
    Mixture sym;
    sym.form = MixtureForm::symmetric_functions;
    const auto a = run_game(acc, UniformNoise{}, 30, 8);
    const auto b = run_game(sym, UniformNoise{}, 30, 8);
    for (std::size_t r = 0; r < a.rows(); ++r)
        CHECK(a.capital[r] == doctest::Approx(b.capital[r]).epsilon(1e-9));
}
