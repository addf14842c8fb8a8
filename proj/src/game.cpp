#include "gtp/game.hpp"

#include <cmath>
#include <sstream>

namespace gtp {

StepError::StepError(std::int64_t round, const std::string& what)
    : std::runtime_error("round " + std::to_string(round) + ": " + what), round_(round)
{
}

VectorState make_vector_state(std::size_t dim)
{
    VectorState s;
    s.avg.assign(dim, 0.0);
    s.sum.assign(dim, 0.0);
    return s;
}

bool admissible_move(double x) { return std::isfinite(x) && std::abs(x) <= 1.0; }

bool admissible_move(std::span<const double> x)
{
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return norm(x) <= 1.0;
}

namespace {

std::string describe(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// Shared tail of every step: given the relative increment r = M.x / K,
// advance capital on both scales.
template <class T>
void advance_capital(GameState<T>& next, const GameState<T>& prev, double increment,
                     double relative)
{
    if (!(1.0 + relative > 0.0) || !std::isfinite(relative))
        throw StepError(prev.n + 1, "capital would become non-positive (relative change " +
                                        describe(relative) + ")");
    next.log_capital = prev.log_capital + std::log1p(relative);
    if (std::isfinite(prev.capital)) {
        next.capital = prev.capital + increment;
    } else {
        next.capital = prev.capital;
    }
}

}  // namespace

ScalarState step(const ScalarState& state, double bet, double x)
{
    if (!admissible_move(x)) throw StepError(state.n + 1, "move out of [-1,1]: " + describe(x));
    if (!std::isfinite(bet)) throw StepError(state.n + 1, "bet is not finite");
    if (!(state.capital > 0.0)) throw StepError(state.n + 1, "capital is not positive");
    const double increment = bet * x;
    double relative = 0.0;
    if (increment != 0.0) relative = std::isfinite(state.capital) ? increment / state.capital : 0.0;
    ScalarState next;
    advance_capital(next, state, increment, relative);
    next.n = state.n + 1;
    next.sum = state.sum + x;
    next.avg = next.sum / static_cast<double>(next.n);
    return next;
}

ScalarState step_fraction(const ScalarState& state, double fraction, double x)
{
    if (!admissible_move(x)) throw StepError(state.n + 1, "move out of [-1,1]: " + describe(x));
    if (!std::isfinite(fraction)) throw StepError(state.n + 1, "bet fraction is not finite");
    if (!(state.capital > 0.0)) throw StepError(state.n + 1, "capital is not positive");
    const double relative = fraction * x;
    const double increment = relative == 0.0 ? 0.0 : relative * state.capital;
    ScalarState next;
    advance_capital(next, state, increment, relative);
    next.n = state.n + 1;
    next.sum = state.sum + x;
    next.avg = next.sum / static_cast<double>(next.n);
    return next;
}

namespace {

VectorState advance_average(const VectorState& state, std::span<const double> x)
{
    VectorState next;
    next.n = state.n + 1;
    next.sum.resize(x.size());
    next.avg.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        next.sum[i] = state.sum[i] + x[i];
        next.avg[i] = next.sum[i] / static_cast<double>(next.n);
    }
    return next;
}

void check_vector_round(const VectorState& state, std::span<const double> bet,
                        std::span<const double> x)
{
    if (x.size() != state.avg.size() || bet.size() != state.avg.size())
        throw StepError(state.n + 1, "dimension mismatch");
    if (!admissible_move(x)) throw StepError(state.n + 1, "move outside the unit ball");
    for (double b : bet)
        if (!std::isfinite(b)) throw StepError(state.n + 1, "bet is not finite");
    if (!(state.capital > 0.0)) throw StepError(state.n + 1, "capital is not positive");
}

}  // namespace

VectorState step(const VectorState& state, std::span<const double> bet, std::span<const double> x)
{
    check_vector_round(state, bet, x);
    const double increment = dot(bet, x);
    double relative = 0.0;
    if (increment != 0.0) relative = std::isfinite(state.capital) ? increment / state.capital : 0.0;
    VectorState next = advance_average(state, x);
    advance_capital(next, state, increment, relative);
    return next;
}

VectorState step_fraction(const VectorState& state, std::span<const double> fraction,
                          std::span<const double> x)
{
    check_vector_round(state, fraction, x);
    const double relative = dot(fraction, x);
    const double increment = relative == 0.0 ? 0.0 : relative * state.capital;
    VectorState next = advance_average(state, x);
    advance_capital(next, state, increment, relative);
    return next;
}

double update_average(double avg, std::int64_t n, double x)
{
    return (static_cast<double>(n - 1) * avg + x) / static_cast<double>(n);
}

Vector update_average(std::span<const double> avg, std::int64_t n, std::span<const double> x)
{
    Vector out(avg.size());
    for (std::size_t i = 0; i < avg.size(); ++i) out[i] = update_average(avg[i], n, x[i]);
    return out;
}

}  // namespace gtp
