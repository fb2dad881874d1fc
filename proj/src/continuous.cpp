#include "momnoise/continuous.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace momnoise {

namespace {

constexpr double kDiscriminantTol = 64.0 * std::numeric_limits<double>::epsilon();

}  // namespace

ModalPoint ct_coefficients(const CTParams& params, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("ct_coefficients: lambda must be positive");
    const double al = params.alpha * lambda;
    return ModalPoint{params.theta + params.gamma * al, al, lambda};
}

bool ct_stability(const ModalPoint& p, std::optional<double> rho) {
    if (!rho) return p.a > 0.0 && p.b > 0.0;
    return p.a >= *rho * (p.b - *rho) && p.b >= 2.0 * *rho;
}

double ct_modal_rate(const ModalPoint& p) {
    const double disc = p.b * p.b - 4.0 * p.a;
    const double scale = std::max(p.b * p.b, std::fabs(4.0 * p.a));
    if (std::fabs(disc) <= kDiscriminantTol * scale || disc < 0.0) return p.b / 2.0;
    return (p.b - std::sqrt(disc)) / 2.0;
}

std::variant<CtCertificate, Unstable> ct_convergence_rate(const CTParams& params, double m,
                                                          double L) {
    if (!(m > 0.0) || !(L >= m))
        throw std::invalid_argument("ct_convergence_rate: need 0 < m <= L");
    const ModalPoint pm = ct_coefficients(params, m);
    const ModalPoint pL = ct_coefficients(params, L);
    if (!ct_stability(pm) || !ct_stability(pL)) {
        const double worst = std::min(ct_modal_rate(pm), ct_modal_rate(pL));
        return Unstable{worst};
    }
    CtCertificate cert;
    cert.rho = std::min(ct_modal_rate(pm), ct_modal_rate(pL));
    cert.settling_time = 1.0 / cert.rho;
    cert.at_m = pm;
    cert.at_L = pL;
    return cert;
}

double CtOptimalFamily::theta(double v) const { return (2.0 - v) * rho; }

double CtOptimalFamily::gamma(double v) const { return v / rho; }

CTParams CtOptimalFamily::params(double v, double L, double sigma) const {
    if (!(v >= 0.0) || !(v <= 1.0))
        throw std::invalid_argument("CtOptimalFamily::params: need v in [0, 1]");
    return CTParams{theta(v), gamma(v), 1.0 / L, sigma};
}

double CtOptimalFamily::nesterov_v() const {
    if (kappa < 4.0)
        throw std::domain_error("accelerated-flow Nesterov tuning requires kappa >= 4");
    return (std::sqrt(kappa) - 2.0) / (kappa - 1.0);
}

CtOptimalFamily ct_optimal(double kappa) {
    if (!(kappa >= 1.0)) throw std::invalid_argument("ct_optimal: kappa must be >= 1");
    return CtOptimalFamily{kappa, 1.0 / std::sqrt(kappa)};
}

double ct_modal_amplification(const ModalPoint& p, CTKind kind, double sigma) {
    if (kind == CTKind::Gfd) {
        if (!(p.a > 0.0)) throw UnstableError("ct_modal_amplification: gfd mode not stable");
        return sigma * sigma / (2.0 * p.a);
    }
    if (!ct_stability(p)) throw UnstableError("ct_modal_amplification: mode not Hurwitz");
    return sigma * sigma / (2.0 * p.a * p.b);
}

CtClassExtremes ct_class_extremes(CtOptimalKind kind, double kappa, int n) {
    if (!(kappa >= 1.0)) throw std::invalid_argument("ct_class_extremes: kappa must be >= 1");
    if (n < 1) throw std::invalid_argument("ct_class_extremes: need n >= 1");
    const double nn = static_cast<double>(n);
    const double sk = std::sqrt(kappa);
    switch (kind) {
        case CtOptimalKind::Gfd:
            return CtClassExtremes{((nn - 1.0) * kappa + 1.0) / 2.0, (kappa + nn - 1.0) / 2.0};
        case CtOptimalKind::AgdHeavyBall:
            return CtClassExtremes{((nn - 1.0) * kappa * sk + sk) / 4.0,
                                   (kappa * sk + (nn - 1.0) * sk) / 4.0};
        case CtOptimalKind::AgdNesterov:
            return CtClassExtremes{((nn - 1.0) * kappa * sk + 2.0) / 4.0,
                                   (kappa * sk + 2.0 * (nn - 1.0)) / 4.0};
    }
    throw std::logic_error("ct_class_extremes: unknown kind");
}

CtClassExtremes ct_class_extremes_general(const CTParams& params, double m, double L, int n,
                                          CTKind kind) {
    if (n < 1) throw std::invalid_argument("ct_class_extremes_general: need n >= 1");
    const ModalPoint pm = ct_coefficients(params, m);
    const ModalPoint pL = ct_coefficients(params, L);
    const double jm = ct_modal_amplification(pm, kind, params.sigma);
    const double jL = ct_modal_amplification(pL, kind, params.sigma);

    double jhat_max = std::max(jm, jL);
    double jhat_min = std::min(jm, jL);
    if (kind == CTKind::Agd && params.gamma != 0.0 && L > m) {
        // Jhat = sigma^2 / (2 q(lambda)) with q(lambda) = a b quadratic in
        // lambda; an interior vertex of q can host the extreme of Jhat.
        const double vertex = -params.theta / (2.0 * params.gamma * params.alpha);
        if (vertex > m && vertex < L) {
            const double jv =
                ct_modal_amplification(ct_coefficients(params, vertex), kind, params.sigma);
            jhat_max = std::max(jhat_max, jv);
            jhat_min = std::min(jhat_min, jv);
        }
    }
    const double extra = static_cast<double>(n - 2);
    return CtClassExtremes{jm + jL + extra * jhat_max, jm + jL + extra * jhat_min};
}

std::vector<BoundCheck> ct_verify_bounds(const CTParams& params, double m, double L, int n) {
    if (std::fabs(params.alpha * L - 1.0) > 1e-9)
        throw std::invalid_argument("ct_verify_bounds: requires the normalization alpha = 1/L");
    const auto rate = ct_convergence_rate(params, m, L);
    const auto* cert = std::get_if<CtCertificate>(&rate);
    if (cert == nullptr) throw UnstableError("ct_verify_bounds: parameters not Hurwitz on [m, L]");

    const double rho = cert->rho;
    const double ts = cert->settling_time;
    const double kappa = L / m;
    const double nn = static_cast<double>(n);
    const double s2 = params.sigma * params.sigma;
    const CtClassExtremes ext = ct_class_extremes_general(params, m, L, n, CTKind::Agd);

    const auto lower = [](std::string id, double lhs, double rhs) {
        const double tol = 1e-12 * std::max(std::fabs(lhs), std::fabs(rhs));
        return BoundCheck{std::move(id), lhs, rhs, lhs >= rhs - tol, std::fabs(lhs - rhs)};
    };
    const double tail = s2 / (2.0 * (1.0 + rho * rho));
    std::vector<BoundCheck> checks;
    checks.push_back(lower("ct-jmax-ts-kappa2-lb", ext.jmax * ts,
                           s2 * (nn - 1.0) * kappa * kappa / 4.0 + tail));
    checks.push_back(lower("ct-jmin-ts-kappa2-lb", ext.jmin * ts,
                           s2 * kappa * kappa / 4.0 + (nn - 1.0) * tail));
    return checks;
}

double ct_lyapunov_oracle(const CTParams& params, const Spectrum& spectrum, CTKind kind) {
    const double s2 = params.sigma * params.sigma;
    double total = 0.0;
    for (double lambda : spectrum.eigenvalues()) {
        const ModalPoint p = ct_coefficients(params, lambda);
        if (kind == CTKind::Gfd) {
            if (!(p.a > 0.0)) throw UnstableError("ct_lyapunov_oracle: gfd mode not stable");
            // -2 a p = -sigma^2
            total += s2 / (2.0 * p.a);
            continue;
        }
        if (!ct_stability(p)) throw UnstableError("ct_lyapunov_oracle: mode not Hurwitz");
        // A P + P A^T = -B B^T for symmetric P, unknowns (p11, p12, p22).
        Eigen::Matrix3d M;
        Eigen::Vector3d rhs;
        M << 0.0, 2.0, 0.0,
             -p.a, -p.b, 1.0,
             0.0, -2.0 * p.a, -2.0 * p.b;
        rhs << 0.0, 0.0, -s2;
        const Eigen::Vector3d sol = M.partialPivLu().solve(rhs);
        if (!sol.allFinite()) throw UnstableError("ct_lyapunov_oracle: singular system");
        total += sol[0];
    }
    return total;
}

CTParams time_dilation(const CTParams& params, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("time_dilation: c must be positive");
    return CTParams{params.theta / c, c * params.gamma, params.alpha / (c * c),
                    params.sigma / (c * std::sqrt(c))};
}

}  // namespace momnoise
