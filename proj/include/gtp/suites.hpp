#pragma once

// Named verification suites run by `gtp verify`.

#include "gtp/analysis.hpp"
#include "gtp/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gtp {

struct SuiteParams {
    std::uint64_t seed = 1;
    std::int64_t identity_paths = 1000;
    std::int64_t identity_max_length = 10000;
    std::int64_t bound_horizon = 100000;
    std::int64_t bound_seeds = 20;
    std::int64_t tail_n = 1000;
    double tail_epsilon = 0.1;
    std::int64_t tail_trials = 100000;
    std::int64_t mixture_paths = 100;
    std::int64_t mixture_max_n = 30;
    std::int64_t linear_horizon = 10000;
    std::int64_t linear_matrices = 10;
    std::int64_t separation_horizon = 1000000;
};

/// Reads verify.* keys (and run.seed) over the defaults above.
SuiteParams suite_params(const KeyValueConfig& cfg);

/// identity, bound, one-sided, linear, mixture, azuma, all.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
std::vector<VerificationReport> run_suite(const std::string& name, const SuiteParams& params,
                                          unsigned jobs = 1);

/// Symmetric A = Q diag(lambda) Q^T with lambda spread over [lo, hi]
/// (both endpoints attained) and Q a random rotation.
Matrix random_spd_matrix(std::size_t dim, double lo, double hi, Engine& rng);

/// e_0..e_n of `xs` by enumerating all subsets. Exponential; n <= 20.
std::vector<double> subset_sum_symmetric(std::span<const double> xs);

}  // namespace gtp
