#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "momnoise/model.hpp"

namespace momnoise {

/// Monte Carlo configuration. The run is fully determined by the seed: the
/// noise value driving (trial, mode, step) is a pure function of those
/// indices, so trials and modes can execute in any order or concurrently
/// and still produce bit-identical results.
struct SimConfig {
    long steps = 1'000'000;
    long burn_in = -1;  ///< -1: ceil(10 * settling time)
    int trials = 1;
    std::uint64_t seed = 0;
    std::vector<double> initial_state{};  ///< per mode [x^0, x^1]; empty = zeros
    double divergence_cap = 1e12;
    int mode_index_offset = 0;  ///< shifts the noise-stream mode index

    void validate(long resolved_burn_in) const;
};

struct SimResult {
    double j_estimate = 0.0;
    double j_standard_error = 0.0;  ///< sample std across trials / sqrt(trials)
    std::vector<double> per_mode_estimates{};
    std::optional<double> empirical_rate{};  ///< fitted decay, deterministic runs only
};

/// Run the noisy two-step recursion in modal coordinates,
///   x_i^{t+2} = -b_i x_i^{t+1} - a_i x_i^t + sigma_w w_i^t,
/// and estimate J as the time average of |x^t|^2 after burn-in, averaged
/// across trials. Throws UnstableError on divergence (norm above the cap).
SimResult simulate(const AlgoParams& params, const Spectrum& spectrum, const SimConfig& config);

/// Deterministic settling time: smallest t with |psi^t| <= epsilon |psi^0|
/// for the noise-free recursion, starting from config.initial_state (all
/// ones by default). Throws on non-convergence within config.steps.
long empirical_settling(const AlgoParams& params, const Spectrum& spectrum, double epsilon,
                        const SimConfig& config);

}  // namespace momnoise
