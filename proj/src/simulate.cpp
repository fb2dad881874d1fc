#include "momnoise/simulate.hpp"

#include <cmath>

#include "momnoise/geometry.hpp"
#include "momnoise/parallel.hpp"
#include "momnoise/rng.hpp"

namespace momnoise {

namespace {

struct ModeCoeffs {
    double a = 0.0;
    double b = 0.0;
};

std::vector<ModeCoeffs> mode_coefficients(const AlgoParams& params, const Spectrum& spectrum) {
    std::vector<ModeCoeffs> out;
    out.reserve(static_cast<size_t>(spectrum.n()));
    for (double lambda : spectrum.eigenvalues()) {
        const ModalPoint p = modal_coefficients(params, lambda);
        out.push_back(ModeCoeffs{p.a, p.b});
    }
    return out;
}

}  // namespace

void SimConfig::validate(long resolved_burn_in) const {
    if (steps < 1) throw std::invalid_argument("SimConfig: steps must be positive");
    if (resolved_burn_in < 0 || resolved_burn_in >= steps)
        throw std::invalid_argument("SimConfig: need 0 <= burn_in < steps");
    if (trials < 1) throw std::invalid_argument("SimConfig: trials must be >= 1");
    if (!(divergence_cap > 0.0)) throw std::invalid_argument("SimConfig: cap must be positive");
}

SimResult simulate(const AlgoParams& params, const Spectrum& spectrum, const SimConfig& config) {
    params.validate();
    const RateCertificate cert = certificate_or_throw(convergence_rate(params, spectrum));
    long burn = config.burn_in;
    if (burn < 0) burn = static_cast<long>(std::ceil(10.0 * cert.settling_time));
    config.validate(burn);

    const int n = spectrum.n();
    if (!config.initial_state.empty() &&
        config.initial_state.size() != static_cast<size_t>(2 * n))
        throw std::invalid_argument("SimConfig: initial_state must hold [x^0, x^1] per mode");

    const auto coeffs = mode_coefficients(params, spectrum);
    const double sw = params.sigma_w();
    const double cap = config.divergence_cap;
    const long samples = config.steps - burn;

    // trial-major accumulation; each (trial, mode) slot is private to one task
    std::vector<double> trial_mean(static_cast<size_t>(config.trials), 0.0);
    std::vector<double> mode_mean(static_cast<size_t>(config.trials) * static_cast<size_t>(n),
                                  0.0);

    parallel_for(config.trials, [&](int trial) {
        double trial_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto [a, b] = coeffs[static_cast<size_t>(i)];
            const std::uint64_t key = rng::stream_key(
                config.seed, static_cast<std::uint64_t>(trial),
                static_cast<std::uint64_t>(config.mode_index_offset + i));
            double x_prev = 0.0;
            double x_cur = 0.0;
            if (!config.initial_state.empty()) {
                x_prev = config.initial_state[static_cast<size_t>(2 * i)];
                x_cur = config.initial_state[static_cast<size_t>(2 * i) + 1];
            }
            double acc = 0.0;
            // positions t = 0, 1 are the initial conditions
            if (burn <= 0) acc += x_prev * x_prev;
            if (burn <= 1 && config.steps > 1) acc += x_cur * x_cur;
            for (long t = 2; t < config.steps; ++t) {
                const double noise =
                    sw == 0.0 ? 0.0 : sw * rng::normal(key, static_cast<std::uint64_t>(t - 2));
                const double x_next = -b * x_cur - a * x_prev + noise;
                x_prev = x_cur;
                x_cur = x_next;
                if (std::fabs(x_cur) > cap)
                    throw UnstableError("simulate: state norm exceeded divergence cap");
                if (t >= burn) acc += x_cur * x_cur;
            }
            const double mean = acc / static_cast<double>(samples);
            mode_mean[static_cast<size_t>(trial) * static_cast<size_t>(n) +
                      static_cast<size_t>(i)] = mean;
            trial_sum += mean;
        }
        trial_mean[static_cast<size_t>(trial)] = trial_sum;
    });

    SimResult result;
    for (double v : trial_mean) result.j_estimate += v;
    result.j_estimate /= config.trials;
    if (config.trials > 1) {
        double ss = 0.0;
        for (double v : trial_mean) ss += (v - result.j_estimate) * (v - result.j_estimate);
        result.j_standard_error =
            std::sqrt(ss / (config.trials - 1)) / std::sqrt(static_cast<double>(config.trials));
    }
    result.per_mode_estimates.assign(static_cast<size_t>(n), 0.0);
    for (int trial = 0; trial < config.trials; ++trial)
        for (int i = 0; i < n; ++i)
            result.per_mode_estimates[static_cast<size_t>(i)] +=
                mode_mean[static_cast<size_t>(trial) * static_cast<size_t>(n) +
                          static_cast<size_t>(i)] /
                config.trials;

    // Decay-rate fit for deterministic runs from a nonzero start.
    if (sw == 0.0 && !config.initial_state.empty()) {
        double norm0 = 0.0;
        for (double v : config.initial_state) norm0 += v * v;
        if (norm0 > 0.0) {
            std::vector<double> x0(static_cast<size_t>(n)), x1(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) {
                x0[static_cast<size_t>(i)] = config.initial_state[static_cast<size_t>(2 * i)];
                x1[static_cast<size_t>(i)] = config.initial_state[static_cast<size_t>(2 * i) + 1];
            }
            long t_lo = 0;
            double norm_lo = norm0;
            long t = 1;
            for (; t < config.steps; ++t) {
                double norm2 = 0.0;
                for (int i = 0; i < n; ++i) {
                    const auto [a, b] = coeffs[static_cast<size_t>(i)];
                    const double nx = -b * x1[static_cast<size_t>(i)] -
                                      a * x0[static_cast<size_t>(i)];
                    x0[static_cast<size_t>(i)] = x1[static_cast<size_t>(i)];
                    x1[static_cast<size_t>(i)] = nx;
                    norm2 += x0[static_cast<size_t>(i)] * x0[static_cast<size_t>(i)] + nx * nx;
                }
                if (norm2 < 1e-260 * norm0) break;
                if (t_lo == 0 && norm2 <= 0.25 * norm0) {
                    t_lo = t;
                    norm_lo = norm2;
                }
            }
            if (t_lo > 0 && t > 2 * t_lo) {
                double norm2_end = 0.0;
                for (int i = 0; i < n; ++i)
                    norm2_end += x0[static_cast<size_t>(i)] * x0[static_cast<size_t>(i)] +
                                 x1[static_cast<size_t>(i)] * x1[static_cast<size_t>(i)];
                if (norm2_end > 0.0)
                    result.empirical_rate =
                        std::exp(0.5 * std::log(norm2_end / norm_lo) / (t - 1 - t_lo));
            }
        }
    }
    return result;
}

long empirical_settling(const AlgoParams& params, const Spectrum& spectrum, double epsilon,
                        const SimConfig& config) {
    params.validate();
    if (params.sigma != 0.0)
        throw std::invalid_argument("empirical_settling: requires sigma = 0");
    if (!(epsilon > 0.0)) throw std::invalid_argument("empirical_settling: epsilon must be > 0");

    const int n = spectrum.n();
    std::vector<double> x0(static_cast<size_t>(n), 1.0), x1(static_cast<size_t>(n), 1.0);
    if (!config.initial_state.empty()) {
        if (config.initial_state.size() != static_cast<size_t>(2 * n))
            throw std::invalid_argument("empirical_settling: bad initial_state size");
        for (int i = 0; i < n; ++i) {
            x0[static_cast<size_t>(i)] = config.initial_state[static_cast<size_t>(2 * i)];
            x1[static_cast<size_t>(i)] = config.initial_state[static_cast<size_t>(2 * i) + 1];
        }
    }
    double norm0 = 0.0;
    for (int i = 0; i < n; ++i)
        norm0 += x0[static_cast<size_t>(i)] * x0[static_cast<size_t>(i)] +
                 x1[static_cast<size_t>(i)] * x1[static_cast<size_t>(i)];
    if (!(norm0 > 0.0))
        throw std::invalid_argument("empirical_settling: initial state must be nonzero");

    const auto coeffs = mode_coefficients(params, spectrum);
    const double target = epsilon * epsilon * norm0;
    double norm2 = norm0;
    for (long t = 0; t < config.steps; ++t) {
        if (norm2 <= target) return t;
        norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto [a, b] = coeffs[static_cast<size_t>(i)];
            const double nx = -b * x1[static_cast<size_t>(i)] - a * x0[static_cast<size_t>(i)];
            x0[static_cast<size_t>(i)] = x1[static_cast<size_t>(i)];
            x1[static_cast<size_t>(i)] = nx;
            norm2 += x0[static_cast<size_t>(i)] * x0[static_cast<size_t>(i)] + nx * nx;
        }
        if (norm2 > config.divergence_cap * config.divergence_cap)
            throw UnstableError("empirical_settling: diverged");
    }
    throw std::runtime_error("empirical_settling: did not reach epsilon within step budget");
}

}  // namespace momnoise
