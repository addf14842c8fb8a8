#include "gtp/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gtp {

namespace {

// Slack for eigenvalue range checks; eigensolve rounding can push an
// eigenvalue that is exactly 1/2 by construction a few ulps above it.
constexpr double kSpectrumSlack = 1e-12;
constexpr double kSymmetryTolerance = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require(bool ok, const std::string& message)
{
    if (!ok) throw std::invalid_argument(message);
}

}  // namespace

LinearOperatorSpec::LinearOperatorSpec(Matrix a) : a_(std::move(a))
{
    require(a_.dim() >= 1, "strategy.matrix: empty matrix");
    require(a_.asymmetry() <= kSymmetryTolerance, "strategy.matrix: matrix is not symmetric");
    eig_ = eigen_symmetric(a_);
    c0_ = eig_.values.front();
    c1_ = eig_.values.back();
    sqrt_a_ = spectral_function(eig_, [](double l) { return std::sqrt(std::max(l, 0.0)); });
}

SpectralBounds spectral_bounds(const Matrix& a)
{
    if (a.asymmetry() > kSymmetryTolerance)
        throw std::invalid_argument("spectral_bounds: matrix is not symmetric");
    const auto eig = eigen_symmetric(a);
    return {eig.values.front(), eig.values.back()};
}

void validate(const StrategySpec& spec)
{
    std::visit(overloaded{
                   [](const FixedEpsilon& s) {
                       require(std::isfinite(s.epsilon) && std::abs(s.epsilon) <= 0.5,
                               "strategy.epsilon: must satisfy |epsilon| <= 1/2");
                   },
                   [](const PastAverage& s) {
                       require(s.c > 0.0 && s.c <= 0.5, "strategy.c: must lie in (0, 1/2]");
                   },
                   [](const OneSided& s) {
                       require(s.c > 0.0 && s.c <= 0.5, "strategy.c: must lie in (0, 1/2]");
                   },
                   [](const Mixture& m) {
                       if (const auto* d = std::get_if<DyadicDiscrete>(&m.distribution))
                           require(d->levels >= 1 && d->levels <= 1000,
                                   "strategy.levels: must lie in [1, 1000]");
                       require(m.quadrature_nodes >= 1 && m.quadrature_nodes <= 1024,
                               "strategy.nodes: must lie in [1, 1024]");
                       require(m.symmetric_max_rounds >= 1,
                               "strategy.symmetric_max_rounds: must be >= 1");
                   },
                   [](const LinearOperator& l) {
                       require(l.op.c0() > 0.0,
                               "strategy.matrix: smallest eigenvalue must be positive");
                       require(l.op.c1() <= 0.5 + kSpectrumSlack,
                               "strategy.matrix: largest eigenvalue must be <= 1/2");
                   },
               },
               spec);
}

std::string describe(const StrategySpec& spec)
{
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const FixedEpsilon& s) { os << "fixed-epsilon(epsilon=" << s.epsilon << ")"; },
                   [&](const PastAverage& s) { os << "past-average(c=" << s.c << ")"; },
                   [&](const OneSided& s) {
                       os << (s.side == Side::positive ? "one-sided-positive" : "one-sided-negative")
                          << "(c=" << s.c << ")";
                   },
                   [&](const Mixture& m) {
                       os << "mixture(";
                       if (const auto* d = std::get_if<DyadicDiscrete>(&m.distribution))
                           os << "dyadic levels=" << d->levels;
                       else
                           os << "uniform-half nodes=" << m.quadrature_nodes;
                       os << (m.form == MixtureForm::accounts ? ", accounts)" : ", symmetric)");
                   },
                   [&](const LinearOperator& l) {
                       os << "linear(m=" << l.op.dim() << ", c0=" << l.op.c0() << ", c1=" << l.op.c1()
                          << ")";
                   },
               },
               spec);
    return os.str();
}

bool is_vector_strategy(const StrategySpec& spec)
{
    return std::holds_alternative<LinearOperator>(spec);
}

double fixed_epsilon_bet(double epsilon, double capital) { return epsilon * capital; }

double past_average_bet(double c, double avg, double capital) { return c * avg * capital; }

double one_sided_bet(Side side, double c, double avg, double capital)
{
    if (side == Side::positive) return c * std::max(avg, 0.0) * capital;
    return -c * std::max(-avg, 0.0) * capital;
}

Vector linear_bet(const LinearOperatorSpec& op, std::span<const double> avg, double capital)
{
    Vector out = op.matrix().apply(avg);
    for (double& v : out) v *= capital;
    return out;
}

// ---------------------------------------------------------------------------

Skeptic::Skeptic(const StrategySpec& spec) : spec_(spec)
{
    validate(spec_);
    if (const auto* m = std::get_if<Mixture>(&spec_)) {
        if (m->form == MixtureForm::accounts) {
            mixture_state_ = MixtureAccounts(mixture_atoms(*m));
        } else {
            mixture_state_ = SymmetricFunctionState{};
            moments_.emplace(m->distribution);
        }
    }
}

double Skeptic::fraction(const ScalarState& state)
{
    return std::visit(
        overloaded{
            [](const FixedEpsilon& s) { return s.epsilon; },
            [&](const PastAverage& s) { return past_average_bet(s.c, state.avg, 1.0); },
            [&](const OneSided& s) { return one_sided_bet(s.side, s.c, state.avg, 1.0); },
            [&](const Mixture& m) -> double {
                if (auto* acc = std::get_if<MixtureAccounts>(&mixture_state_)) return acc->fraction();
                auto& sym = std::get<SymmetricFunctionState>(mixture_state_);
                if (sym.rounds() + 1 > m.symmetric_max_rounds)
                    throw StepError(sym.rounds() + 1,
                                    "symmetric-function mixture form limited to " +
                                        std::to_string(m.symmetric_max_rounds) +
                                        " rounds (raise strategy.symmetric_max_rounds)");
                const double bet = mixture_bet_symmetric(*moments_, sym);
                const double cap = mixture_capital_symmetric(*moments_, sym);
                return bet / cap;
            },
            [](const LinearOperator&) -> double {
                throw std::logic_error("linear operator strategy needs a vector game");
            },
        },
        spec_);
}

void Skeptic::fraction(const VectorState& state, std::span<double> out)
{
    const auto* l = std::get_if<LinearOperator>(&spec_);
    if (l == nullptr) throw std::logic_error("scalar strategy used in a vector game");
    l->op.matrix().apply(state.avg, out);
}

void Skeptic::observe(double x)
{
    if (auto* acc = std::get_if<MixtureAccounts>(&mixture_state_)) acc->update(x);
    if (auto* sym = std::get_if<SymmetricFunctionState>(&mixture_state_))
        update_symmetric_in_place(*sym, x);
}

std::size_t Skeptic::footprint() const
{
    return std::visit(
        overloaded{
            [](const FixedEpsilon&) -> std::size_t { return 1; },  // K
            [](const PastAverage&) -> std::size_t { return 2; },   // x_bar, K
            [](const OneSided&) -> std::size_t { return 2; },
            [&](const Mixture&) -> std::size_t {
                if (const auto* acc = std::get_if<MixtureAccounts>(&mixture_state_))
                    return acc->size();
                // e_{n,0..n}; the moment table is a closed-form cache and not state.
                return std::get<SymmetricFunctionState>(mixture_state_).e.size();
            },
            [](const LinearOperator& l) -> std::size_t { return l.op.dim() + 1; },
        },
        spec_);
}

}  // namespace gtp
