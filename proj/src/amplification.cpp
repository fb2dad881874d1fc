#include "momnoise/amplification.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace momnoise {

namespace {

double jhat_from_distances(double d, double h, double l, double sigma_w) {
    if (!(d > 0.0 && h > 0.0 && l > 0.0))
        throw UnstableError("modal amplification: mode outside the stability triangle");
    return sigma_w * sigma_w * (d + l) / (2.0 * d * h * l);
}

// 1e-12 relative play in the comparison so bounds met with exact equality
// (heavy ball against the cubic envelope) stay satisfied under roundoff.
BoundCheck make_check(std::string id, double lhs, double rhs, bool lhs_le_rhs) {
    BoundCheck c;
    c.bound_id = std::move(id);
    c.lhs = lhs;
    c.rhs = rhs;
    const double tol = 1e-12 * std::max(std::fabs(lhs), std::fabs(rhs));
    c.satisfied = lhs_le_rhs ? lhs <= rhs + tol : lhs >= rhs - tol;
    c.slack = std::fabs(lhs - rhs);
    return c;
}

// Minimize the convex map lambda -> Jhat(lambda) over [lo, hi].
std::pair<double, double> minimize_jhat(const AlgoParams& params, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (modal_amplification_at(params, m1) <= modal_amplification_at(params, m2))
            hi = m2;
        else
            lo = m1;
        if (hi - lo <= 1e-12 * std::max(std::fabs(lo), std::fabs(hi))) break;
    }
    const double arg = 0.5 * (lo + hi);
    return {arg, modal_amplification_at(params, arg)};
}

}  // namespace

double modal_amplification(const ModalPoint& p, double sigma_w) {
    const DistanceTriple t = distances(p);
    return jhat_from_distances(t.d, t.h, t.l, sigma_w);
}

double modal_amplification_at(const AlgoParams& params, double lambda) {
    // d(lambda) = alpha * lambda exactly; l = 2 (1 + a) - d.
    const double a = params.beta - params.gamma * params.alpha * lambda;
    const double d = params.alpha * lambda;
    const double h = 1.0 - a;
    const double l = 2.0 * (1.0 + a) - d;
    return jhat_from_distances(d, h, l, params.sigma_w());
}

AmplificationReport total_amplification(const AlgoParams& params, const Spectrum& spectrum) {
    params.validate();
    if (!is_stable(convergence_rate(params, spectrum)))
        throw UnstableError("total_amplification: parameters do not stabilize the spectrum");

    AmplificationReport rep;
    rep.per_mode.reserve(static_cast<size_t>(spectrum.n()));
    for (double lambda : spectrum.eigenvalues()) {
        rep.per_mode.emplace_back(lambda, modal_amplification_at(params, lambda));
        rep.total += rep.per_mode.back().second;
    }

    const double m = spectrum.m();
    const double L = spectrum.L();
    const double jm = modal_amplification_at(params, m);
    const double jL = modal_amplification_at(params, L);
    rep.jhat_max = std::max(jm, jL);  // convex in lambda, max at an endpoint

    if (m == L) {
        rep.jhat_min = jm;
        rep.jhat_min_argument = m;
    } else if (params.gamma == 0.0) {
        // Horizontal segment a = beta: closest approach to b = 0 at (1+beta)/alpha.
        const double lam = std::clamp((1.0 + params.beta) / params.alpha, m, L);
        rep.jhat_min = modal_amplification_at(params, lam);
        rep.jhat_min_argument = lam;
    } else if (params.gamma == params.beta) {
        // Segment through the origin, crossed at lambda = 1/alpha.
        const double lam = std::clamp(1.0 / params.alpha, m, L);
        rep.jhat_min = modal_amplification_at(params, lam);
        rep.jhat_min_argument = lam;
    } else {
        const auto [arg, val] = minimize_jhat(params, m, L);
        rep.jhat_min = val;
        rep.jhat_min_argument = arg;
    }

    const double extra = static_cast<double>(spectrum.n() - 2);
    rep.class_max = jm + jL + extra * rep.jhat_max;
    rep.class_min = jm + jL + extra * rep.jhat_min;
    return rep;
}

double lyapunov_oracle(const AlgoParams& params, const Spectrum& spectrum) {
    params.validate();
    const double sw2 = params.sigma_w() * params.sigma_w();
    double total = 0.0;
    for (double lambda : spectrum.eigenvalues()) {
        const ModalPoint p = modal_coefficients(params, lambda);
        if (modal_spectral_radius(p) >= 1.0)
            throw UnstableError("lyapunov_oracle: mode at lambda = " + std::to_string(lambda) +
                                " is not stable");
        // P = A P A^T + B B^T for symmetric P, unknowns (p11, p12, p22).
        Eigen::Matrix3d M;
        Eigen::Vector3d rhs;
        M << 1.0, 0.0, -1.0,
             0.0, 1.0 + p.a, p.b,
             -p.a * p.a, -2.0 * p.a * p.b, 1.0 - p.b * p.b;
        rhs << 0.0, 0.0, sw2;
        const Eigen::Vector3d sol = M.partialPivLu().solve(rhs);
        if (!sol.allFinite())
            throw UnstableError("lyapunov_oracle: singular Lyapunov system");
        total += sol[0];
    }
    return total;
}

std::vector<BoundCheck> verify_bounds(const AlgoParams& params, double m, double L, int n) {
    if (n < 1) throw std::invalid_argument("verify_bounds: need n >= 1");
    const Spectrum ends = Spectrum::endpoints(m, L);
    const RateCertificate cert = certificate_or_throw(convergence_rate(params, ends));
    const AmplificationReport rep = total_amplification(params, ends);

    const double rho = cert.rho;
    const double ts = cert.settling_time;
    const double kappa = L / m;
    const double sw2 = params.sigma_w() * params.sigma_w();
    const double s2 = params.sigma * params.sigma;
    const double nn = static_cast<double>(n);

    const double jm = rep.per_mode.front().second;
    const double jL = rep.per_mode.back().second;
    const double jmax = jm + jL + (nn - 2.0) * rep.jhat_max;
    const double jmin = jm + jL + (nn - 2.0) * rep.jhat_min;

    std::vector<BoundCheck> checks;
    const double onep = 1.0 + rho;

    checks.push_back(make_check("j-cubic-ub", jmax,
                                sw2 * (1.0 + rho * rho) / (onep * onep * onep) * nn * ts * ts * ts,
                                true));
    checks.push_back(make_check(
        "jmax-ts-kappa2-lb", jmax * ts,
        sw2 * ((nn - 1.0) * kappa * kappa / 64.0 + (std::sqrt(kappa) + 1.0) / 2.0), false));
    checks.push_back(make_check(
        "jmin-ts-kappa2-lb", jmin * ts,
        sw2 * (kappa * kappa / 64.0 + (nn - 1.0) * (std::sqrt(kappa) + 1.0) / 2.0), false));
    checks.push_back(make_check("jmax-linear-lb", jmax,
                                sw2 * ((nn - 1.0) * ts / (2.0 * onep * onep) + 1.0), false));
    checks.push_back(make_check("jmin-linear-lb", jmin,
                                sw2 * (ts / (2.0 * onep * onep) + (nn - 1.0)), false));
    checks.push_back(
        make_check("jhatmax-linear-lb", rep.jhat_max, sw2 * ts / (2.0 * onep * onep), false));
    checks.push_back(make_check("jhatmin-unit-lb", rep.jhat_min, sw2, false));
    // Sharper per-mode constant from the same geometry as the kappa^2/64
    // bounds: Jhat(m) Ts >= sigma_w^2 kappa^2 / (2 (1 + rho)^5).
    checks.push_back(make_check("jhatm-ts-kappa2-sharp-lb", jm * ts,
                                sw2 * kappa * kappa / (2.0 * std::pow(onep, 5)), false));
    checks.push_back(stepsize_rate_bound(params, L, rho));

    if (params.noise_model == NoiseModel::Gradient) {
        checks.push_back(make_check(
            "j-cubic-ub-grad", jmax,
            s2 * onep * (1.0 + rho * rho) / (L * L) * nn * ts * ts * ts, true));
        const double tail = std::max(kappa * kappa / (ts * ts * ts), 0.25);
        checks.push_back(make_check(
            "jmax-ts-kappa2-lb-grad", jmax * ts,
            s2 / (L * L) * ((nn - 1.0) * kappa * kappa / 4.0 + tail), false));
        checks.push_back(make_check(
            "jmin-ts-kappa2-lb-grad", jmin * ts,
            s2 / (L * L) * (kappa * kappa / 4.0 + (nn - 1.0) * tail), false));
    }
    return checks;
}

BoundCheck stepsize_rate_bound(const AlgoParams& params, double L, double rho) {
    return make_check("stepsize-rate", params.alpha * L, (1.0 + rho) * (1.0 + rho), true);
}

}  // namespace momnoise
