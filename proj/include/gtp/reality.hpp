#pragma once

// Reality's move generators. Reality moves after seeing Skeptic's bet.

#include "gtp/linalg.hpp"
#include "gtp/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>

namespace gtp {

/// +-1 with equal probability.
struct FairCoin {};

/// +1 with probability p, -1 otherwise.
struct BiasedCoin {
    double p = 0.5;
};

/// Uniform on [-1, 1].
struct UniformNoise {};

struct ConstantBias {
    double b = 0.0;
};

/// Deterministic path whose running average tracks a * sqrt(ln n / n)
/// from round n_start on. Test instrument for the rate statistic.
struct RatePath {
    double a = 1.0;
    std::int64_t n_start = 3;
};

/// Moves against Skeptic: -magnitude * sign(M), or 0 when M == 0.
struct AdversarialMinimizer {
    double magnitude = 1.0;
};

using ScalarRealitySpec =
    std::variant<FairCoin, BiasedCoin, UniformNoise, ConstantBias, RatePath, AdversarialMinimizer>;

enum class DirectionMode { fixed, rotating, random };

/// Embeds a scalar Reality along a unit direction u_n in R^dim. The
/// adversary is the exception: it plays -magnitude * M / ||M|| directly.
struct VectorUnitBall {
    ScalarRealitySpec inner = FairCoin{};
    std::size_t dim = 2;
    DirectionMode direction = DirectionMode::fixed;
    Vector axis;                // fixed mode; empty means e_1
    std::int64_t period = 100;  // rotating mode: full turn in the (e_1, e_2) plane
};

using RealitySpec = std::variant<FairCoin, BiasedCoin, UniformNoise, ConstantBias, RatePath,
                                 AdversarialMinimizer, VectorUnitBall>;

/// Throws std::invalid_argument naming the offending field.
void validate(const RealitySpec& spec);
std::string describe(const RealitySpec& spec);
bool is_vector_reality(const RealitySpec& spec);
std::optional<ScalarRealitySpec> as_scalar(const RealitySpec& spec);
RealitySpec embed_along_first_axis(const RealitySpec& scalar, std::size_t dim);
/// Conditional mean zero whatever the history (FairCoin, UniformNoise).
bool is_martingale_difference(const RealitySpec& spec);

/// clamp(n t_n - (n-1) prev_avg, -1, 1), t_n = a sqrt(ln n / n) for
/// n >= n_start and 0 before.
double rate_path_move(double a, std::int64_t n, double prev_avg, std::int64_t n_start = 3);
/// The target t_n alone.
double rate_path_target(double a, std::int64_t n, std::int64_t n_start = 3);

class Reality {
public:
    Reality(const RealitySpec& spec, std::uint64_t seed);

    double next_move(double bet, std::int64_t n);
    void next_move(std::span<const double> bet, std::int64_t n, std::span<double> out);

    std::size_t dim() const;

private:
    double scalar_move(const ScalarRealitySpec& spec, double bet, std::int64_t n);
    void direction(std::int64_t n, std::span<double> out);

    RealitySpec spec_;
    std::optional<ScalarRealitySpec> scalar_;
    Engine rng_;
    // Running sum of this Reality's own scalar moves (RatePath).
    double own_sum_ = 0.0;
};

}  // namespace gtp
