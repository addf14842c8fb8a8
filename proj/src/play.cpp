#include "gtp/play.hpp"

#include <cmath>
#include <stdexcept>

namespace gtp {

namespace {

void append(std::vector<double>& column, std::span<const double> values)
{
    column.insert(column.end(), values.begin(), values.end());
}

// Absolute bet from a fraction; a zero fraction stays zero even when the
// linear-scale capital has saturated.
double absolute_bet(double fraction, double capital)
{
    return fraction == 0.0 ? 0.0 : fraction * capital;
}

void record(Trajectory& t, const RoundView& r)
{
    t.n.push_back(r.n);
    append(t.x, r.x);
    append(t.xbar, r.xbar);
    append(t.bet, r.bet);
    t.capital.push_back(r.capital);
    t.log_capital.push_back(r.log_capital);
}

bool wanted(std::int64_t n, std::int64_t every, std::int64_t horizon)
{
    return n % every == 0 || n == horizon;
}

void play_scalar(Trajectory& t, Skeptic& skeptic, Reality& reality, const RoundObserver& observer)
{
    ScalarState state;
    for (std::int64_t round = 1; round <= t.horizon; ++round) {
        const double fraction = skeptic.fraction(state);
        const double bet = absolute_bet(fraction, state.capital);
        const double x = reality.next_move(bet, round);
        state = step_fraction(state, fraction, x);
        skeptic.observe(x);

        const RoundView view{round, {&x, 1}, {&state.avg, 1}, {&bet, 1}, state.capital,
                             state.log_capital};
        if (observer) observer(view);
        if (wanted(round, t.record_every, t.horizon)) record(t, view);
    }
}

void play_vector(Trajectory& t, Skeptic& skeptic, Reality& reality, const RoundObserver& observer)
{
    VectorState state = make_vector_state(t.dim);
    Vector fraction(t.dim), bet(t.dim), x(t.dim);
    for (std::int64_t round = 1; round <= t.horizon; ++round) {
        skeptic.fraction(state, fraction);
        for (std::size_t i = 0; i < t.dim; ++i) bet[i] = absolute_bet(fraction[i], state.capital);
        reality.next_move(bet, round, x);
        state = step_fraction(state, fraction, x);

        const RoundView view{round, x, state.avg, bet, state.capital, state.log_capital};
        if (observer) observer(view);
        if (wanted(round, t.record_every, t.horizon)) record(t, view);
    }
}

}  // namespace

Trajectory run_game(const StrategySpec& strategy, const RealitySpec& reality,
                    std::int64_t horizon, std::uint64_t seed, std::int64_t record_every,
                    const RoundObserver& observer)
{
    if (horizon < 1) throw std::invalid_argument("run.horizon: must be >= 1");
    if (record_every < 1) throw std::invalid_argument("run.record_every: must be >= 1");

    Trajectory t;
    t.strategy = strategy;
    t.seed = seed;
    t.horizon = horizon;
    t.record_every = record_every;

    Skeptic skeptic(strategy);
    if (const auto* lin = std::get_if<LinearOperator>(&strategy)) {
        t.dim = lin->op.dim();
        t.reality = embed_along_first_axis(reality, t.dim);
        if (std::get<VectorUnitBall>(t.reality).dim != t.dim)
            throw std::invalid_argument("reality.dim: must match the matrix dimension");
    } else {
        if (is_vector_reality(reality))
            throw std::invalid_argument("reality.kind: unit-ball reality needs a linear strategy");
        t.reality = reality;
    }
    Reality nature(t.reality, seed);

    const auto expected_rows = static_cast<std::size_t>(horizon / record_every + 1);
    t.n.reserve(expected_rows);
    t.capital.reserve(expected_rows);
    t.log_capital.reserve(expected_rows);
    t.x.reserve(expected_rows * t.dim);
    t.xbar.reserve(expected_rows * t.dim);
    t.bet.reserve(expected_rows * t.dim);

    if (t.dim == 1 && !is_vector_strategy(strategy))
        play_scalar(t, skeptic, nature, observer);
    else
        play_vector(t, skeptic, nature, observer);
    return t;
}

}  // namespace gtp
