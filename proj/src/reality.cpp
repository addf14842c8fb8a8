#include "gtp/reality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gtp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require(bool ok, const std::string& message)
{
    if (!ok) throw std::invalid_argument(message);
}

void validate_scalar(const ScalarRealitySpec& spec)
{
    std::visit(overloaded{
                   [](const FairCoin&) {},
                   [](const UniformNoise&) {},
                   [](const BiasedCoin& s) {
                       require(s.p >= 0.0 && s.p <= 1.0, "reality.p: must lie in [0, 1]");
                   },
                   [](const ConstantBias& s) {
                       require(s.b >= -1.0 && s.b <= 1.0, "reality.b: must lie in [-1, 1]");
                   },
                   [](const RatePath& s) {
                       require(s.a > 0.0 && std::isfinite(s.a), "reality.a: must be positive");
                       require(s.n_start >= 2, "reality.n_start: must be >= 2");
                   },
                   [](const AdversarialMinimizer& s) {
                       require(s.magnitude > 0.0 && s.magnitude <= 1.0,
                               "reality.magnitude: must lie in (0, 1]");
                   },
               },
               spec);
}

std::string describe_scalar(const ScalarRealitySpec& spec)
{
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const FairCoin&) { os << "fair-coin"; },
                   [&](const UniformNoise&) { os << "uniform-noise"; },
                   [&](const BiasedCoin& s) { os << "biased-coin(p=" << s.p << ")"; },
                   [&](const ConstantBias& s) { os << "constant-bias(b=" << s.b << ")"; },
                   [&](const RatePath& s) {
                       os << "rate-path(a=" << s.a << ", n_start=" << s.n_start << ")";
                   },
                   [&](const AdversarialMinimizer& s) {
                       os << "adversarial(magnitude=" << s.magnitude << ")";
                   },
               },
               spec);
    return os.str();
}

// Pulls a vector that rounding left a hair outside the unit ball back in.
void fit_unit_ball(std::span<double> v)
{
    for (double n = norm(v); n > 1.0; n = norm(v))
        for (double& c : v) c *= std::nextafter(1.0, 0.0) / n;
}

}  // namespace

void validate(const RealitySpec& spec)
{
    if (const auto* v = std::get_if<VectorUnitBall>(&spec)) {
        validate_scalar(v->inner);
        require(v->dim >= 1, "reality.dim: must be >= 1");
        if (v->direction == DirectionMode::fixed && !v->axis.empty()) {
            require(v->axis.size() == v->dim, "reality.axis: length must equal reality.dim");
            require(norm(v->axis) > 0.0, "reality.axis: must be nonzero");
        }
        if (v->direction == DirectionMode::rotating) {
            require(v->dim >= 2, "reality.direction: rotating needs reality.dim >= 2");
            require(v->period >= 1, "reality.period: must be >= 1");
        }
        return;
    }
    validate_scalar(*as_scalar(spec));
}

std::string describe(const RealitySpec& spec)
{
    if (const auto* v = std::get_if<VectorUnitBall>(&spec)) {
        static constexpr const char* modes[] = {"fixed", "rotating", "random"};
        return "unit-ball(dim=" + std::to_string(v->dim) +
               ", direction=" + modes[static_cast<int>(v->direction)] +
               ", inner=" + describe_scalar(v->inner) + ")";
    }
    return describe_scalar(*as_scalar(spec));
}

bool is_vector_reality(const RealitySpec& spec) { return std::holds_alternative<VectorUnitBall>(spec); }

std::optional<ScalarRealitySpec> as_scalar(const RealitySpec& spec)
{
    return std::visit(
        overloaded{
            [](const VectorUnitBall&) -> std::optional<ScalarRealitySpec> { return std::nullopt; },
            [](const auto& s) -> std::optional<ScalarRealitySpec> { return ScalarRealitySpec{s}; },
        },
        spec);
}

RealitySpec embed_along_first_axis(const RealitySpec& scalar, std::size_t dim)
{
    const auto inner = as_scalar(scalar);
    if (!inner) return scalar;
    VectorUnitBall v;
    v.inner = *inner;
    v.dim = dim;
    v.direction = DirectionMode::fixed;
    return v;
}

bool is_martingale_difference(const RealitySpec& spec)
{
    return std::holds_alternative<FairCoin>(spec) || std::holds_alternative<UniformNoise>(spec);
}

double rate_path_target(double a, std::int64_t n, std::int64_t n_start)
{
    if (n < n_start) return 0.0;
    const double nd = static_cast<double>(n);
    return a * std::sqrt(std::log(nd) / nd);
}

double rate_path_move(double a, std::int64_t n, double prev_avg, std::int64_t n_start)
{
    const double target = rate_path_target(a, n, n_start);
    const double x = static_cast<double>(n) * target - static_cast<double>(n - 1) * prev_avg;
    return std::clamp(x, -1.0, 1.0);
}

Reality::Reality(const RealitySpec& spec, std::uint64_t seed)
    : spec_(spec), scalar_(as_scalar(spec)), rng_(seed)
{
    validate(spec_);
}

std::size_t Reality::dim() const
{
    if (const auto* v = std::get_if<VectorUnitBall>(&spec_)) return v->dim;
    return 1;
}

double Reality::scalar_move(const ScalarRealitySpec& spec, double bet, std::int64_t n)
{
    const double x = std::visit(
        overloaded{
            [&](const FairCoin&) { return (rng_() >> 63) != 0 ? 1.0 : -1.0; },
            [&](const BiasedCoin& s) { return uniform01(rng_) < s.p ? 1.0 : -1.0; },
            [&](const UniformNoise&) { return uniform_pm1(rng_); },
            [&](const ConstantBias& s) { return s.b; },
            [&](const RatePath& s) {
                const double prev = n > 1 ? own_sum_ / static_cast<double>(n - 1) : 0.0;
                return rate_path_move(s.a, n, prev, s.n_start);
            },
            [&](const AdversarialMinimizer& s) {
                if (bet > 0.0) return -s.magnitude;
                if (bet < 0.0) return s.magnitude;
                return 0.0;
            },
        },
        spec);
    own_sum_ += x;
    return x;
}

double Reality::next_move(double bet, std::int64_t n)
{
    if (!scalar_) throw std::logic_error("vector reality used in a scalar game");
    return scalar_move(*scalar_, bet, n);
}

void Reality::direction(std::int64_t n, std::span<double> out)
{
    const auto& v = std::get<VectorUnitBall>(spec_);
    std::fill(out.begin(), out.end(), 0.0);
    switch (v.direction) {
    case DirectionMode::fixed:
        if (v.axis.empty()) {
            out[0] = 1.0;
        } else {
            const double len = norm(v.axis);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = v.axis[i] / len;
        }
        break;
    case DirectionMode::rotating: {
        const double theta =
            2.0 * std::numbers::pi * static_cast<double>((n - 1) % v.period) / static_cast<double>(v.period);
        out[0] = std::cos(theta);
        out[1] = std::sin(theta);
        break;
    }
    case DirectionMode::random: {
        double len = 0.0;
        do {
            for (double& c : out) c = standard_normal(rng_);
            len = norm(out);
        } while (len == 0.0);
        for (double& c : out) c /= len;
        break;
    }
    }
}

void Reality::next_move(std::span<const double> bet, std::int64_t n, std::span<double> out)
{
    const auto* v = std::get_if<VectorUnitBall>(&spec_);
    if (v == nullptr) throw std::logic_error("scalar reality used in a vector game");
    if (const auto* adv = std::get_if<AdversarialMinimizer>(&v->inner)) {
        const double len = norm(bet);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = len > 0.0 ? -adv->magnitude * bet[i] / len : 0.0;
    } else {
        direction(n, out);
        // The inner scalar sees the bet projected on the direction it will play along.
        const double s = scalar_move(v->inner, dot(bet, out), n);
        for (double& c : out) c *= s;
    }
    fit_unit_ball(out);
}

}  // namespace gtp
