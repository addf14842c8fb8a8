#pragma once

// Bounded forecasting game state and the single-round update
//
//   K_0 = 1
//   FOR n = 1, 2, ...
//     Skeptic announces M_n
//     Reality announces x_n, |x_n| <= 1   (or ||x_n|| <= 1 in R^m)
//     K_n = K_{n-1} + M_n . x_n
//
// Capital is kept twice: on the linear scale (which may saturate to +inf
// on long favourable runs) and as log K_n accumulated through log1p of
// the relative increment, which stays valid at any horizon.

#include "gtp/linalg.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace gtp {

/// A round could not be played: Reality's move left the admissible set
/// or Skeptic's bet would have driven capital to zero or below.
class StepError : public std::runtime_error {
public:
    StepError(std::int64_t round, const std::string& what);
    std::int64_t round() const { return round_; }

private:
    std::int64_t round_;
};

template <class T>
struct GameState {
    std::int64_t n = 0;
    double capital = 1.0;
    double log_capital = 0.0;
    T avg{};
    T sum{};
};

using ScalarState = GameState<double>;
using VectorState = GameState<Vector>;

VectorState make_vector_state(std::size_t dim);

/// Exact comparison against the unit bound, no clamping.
bool admissible_move(double x);
bool admissible_move(std::span<const double> x);

/// Plays one round with an absolute bet M.
ScalarState step(const ScalarState& state, double bet, double x);
VectorState step(const VectorState& state, std::span<const double> bet, std::span<const double> x);

/// Plays one round with a bet given as a fraction of current capital,
/// M = fraction * K_{n-1}. Used by the game loop so that saturated
/// linear-scale capital never poisons the log-capital track.
ScalarState step_fraction(const ScalarState& state, double fraction, double x);
VectorState step_fraction(const VectorState& state, std::span<const double> fraction,
                          std::span<const double> x);

/// ((n-1) avg + x) / n. Requires n >= 1.
double update_average(double avg, std::int64_t n, double x);
Vector update_average(std::span<const double> avg, std::int64_t n, std::span<const double> x);

}  // namespace gtp
