#pragma once

// The protocol loop: Skeptic bets from what it knows before round n,
// Reality answers after seeing the bet, the state advances.

#include "gtp/game.hpp"
#include "gtp/reality.hpp"
#include "gtp/strategies.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace gtp {

/// Column-major record of a run, thinned to every record_every rounds
/// plus the final round. Vector quantities are stored flat, dim per row.
struct Trajectory {
    StrategySpec strategy;
    RealitySpec reality;
    std::uint64_t seed = 0;
    std::int64_t horizon = 0;
    std::int64_t record_every = 1;
    std::size_t dim = 1;

    std::vector<std::int64_t> n;
    std::vector<double> x;
    std::vector<double> xbar;
    std::vector<double> bet;
    std::vector<double> capital;
    std::vector<double> log_capital;

    std::size_t rows() const { return n.size(); }
    std::span<const double> x_at(std::size_t row) const { return {x.data() + row * dim, dim}; }
    std::span<const double> xbar_at(std::size_t row) const
    {
        return {xbar.data() + row * dim, dim};
    }
    std::span<const double> bet_at(std::size_t row) const { return {bet.data() + row * dim, dim}; }
};

/// One played round, handed to an observer before thinning.
struct RoundView {
    std::int64_t n;
    std::span<const double> x;
    std::span<const double> xbar;
    std::span<const double> bet;
    double capital;
    double log_capital;
};

using RoundObserver = std::function<void(const RoundView&)>;

/// Plays `horizon` rounds. A LinearOperator strategy runs the vector
/// game; a scalar Reality is then embedded along e_1. Deterministic in
/// (strategy, reality, seed). StepError carries the failing round.
Trajectory run_game(const StrategySpec& strategy, const RealitySpec& reality,
                    std::int64_t horizon, std::uint64_t seed, std::int64_t record_every = 1,
                    const RoundObserver& observer = {});

}  // namespace gtp
