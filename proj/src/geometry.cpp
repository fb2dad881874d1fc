#include "momnoise/geometry.hpp"

#include <cmath>
#include <limits>

namespace momnoise {

namespace {

// Relative tolerance for calling b^2 - 4a zero. 64 ulps absorbs the
// roundoff of forming b and a from (alpha, beta, gamma, lambda) while
// staying far below any distance scale the tests care about.
constexpr double kDiscriminantTol = 64.0 * std::numeric_limits<double>::epsilon();

double classified_discriminant(const ModalPoint& p, double tol, EigenRegime& regime) {
    const double disc = p.b * p.b - 4.0 * p.a;
    const double scale = std::max(p.b * p.b, std::fabs(4.0 * p.a));
    if (std::fabs(disc) <= tol * scale) {
        regime = EigenRegime::Repeated;
        return 0.0;
    }
    regime = disc > 0.0 ? EigenRegime::RealDistinct : EigenRegime::ComplexPair;
    return disc;
}

}  // namespace

DistanceTriple distances(const ModalPoint& p) {
    return DistanceTriple{p.a + p.b + 1.0, 1.0 - p.a, p.a - p.b + 1.0};
}

bool in_delta(const ModalPoint& p) {
    return std::fabs(p.b) - 1.0 < p.a && p.a < 1.0;
}

bool in_delta_rho(const ModalPoint& p, double rho) {
    if (!(rho > 0.0) || !(rho < 1.0))
        throw std::invalid_argument("in_delta_rho: rho must lie in (0, 1)");
    return rho * (std::fabs(p.b) - rho) <= p.a && p.a <= rho * rho;
}

ModalPoint vertex_x(double rho) { return ModalPoint{-2.0 * rho, rho * rho}; }
ModalPoint vertex_y(double rho) { return ModalPoint{2.0 * rho, rho * rho}; }
ModalPoint vertex_z(double rho) { return ModalPoint{0.0, -rho * rho}; }
ModalPoint nesterov_extreme_point(double rho) {
    return ModalPoint{2.0 * rho / 3.0, -rho * rho / 3.0};
}

double modal_spectral_radius(const ModalPoint& p) {
    EigenRegime regime;
    const double disc = classified_discriminant(p, kDiscriminantTol, regime);
    switch (regime) {
        case EigenRegime::Repeated:
            return std::fabs(p.b) / 2.0;
        case EigenRegime::RealDistinct:
            return (std::fabs(p.b) + std::sqrt(disc)) / 2.0;
        case EigenRegime::ComplexPair:
        default:
            return std::sqrt(p.a);  // |root|^2 = a when roots are complex
    }
}

EigenRegime eigen_regime(const ModalPoint& p, double tol) {
    EigenRegime regime;
    classified_discriminant(p, tol, regime);
    return regime;
}

bool is_stable(const RateResult& r) {
    return std::holds_alternative<RateCertificate>(r);
}

const RateCertificate& certificate_or_throw(const RateResult& r) {
    if (const auto* cert = std::get_if<RateCertificate>(&r)) return *cert;
    throw UnstableError("no convergence certificate: spectral radius " +
                        std::to_string(std::get<Unstable>(r).spectral_radius));
}

RateResult convergence_rate(const AlgoParams& params, const Spectrum& spectrum) {
    params.validate();
    const ModalPoint pm = modal_coefficients(params, spectrum.m());
    const ModalPoint pL = modal_coefficients(params, spectrum.L());
    const double rm = modal_spectral_radius(pm);
    const double rL = modal_spectral_radius(pL);
    const double rho = std::max(rm, rL);
    if (!(rho < 1.0)) return Unstable{rho};

    RateCertificate cert;
    cert.rho = rho;
    cert.settling_time = 1.0 / (1.0 - rho);
    cert.at_m = RateWitness{pm, rm, rm <= rho};
    cert.at_L = RateWitness{pL, rL, rL <= rho};
    return cert;
}

double max_radius_on_grid(const AlgoParams& params, double m, double L, int points) {
    if (points < 2) throw std::invalid_argument("max_radius_on_grid: need >= 2 points");
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double lambda = m + (L - m) * static_cast<double>(i) / (points - 1);
        worst = std::max(worst, modal_spectral_radius(modal_coefficients(params, lambda)));
    }
    return worst;
}

TunedMethod optimal_params(Method method, double m, double L, NoiseModel noise_model,
                           double sigma) {
    if (!(m > 0.0) || !(L >= m))
        throw std::invalid_argument("optimal_params: need 0 < m <= L");
    const double kappa = L / m;

    AlgoParams p;
    p.noise_model = noise_model;
    p.sigma = sigma;
    switch (method) {
        case Method::GD:
            p.alpha = 2.0 / (L + m);
            break;
        case Method::HB: {
            const double sk = std::sqrt(kappa);
            p.alpha = 4.0 / ((std::sqrt(L) + std::sqrt(m)) * (std::sqrt(L) + std::sqrt(m)));
            const double r = (sk - 1.0) / (sk + 1.0);
            p.beta = r * r;
            break;
        }
        case Method::NA: {
            p.alpha = 4.0 / (3.0 * L + m);
            p.beta = p.gamma = 1.0 - 4.0 / (std::sqrt(3.0 * kappa + 1.0) + 2.0);
            break;
        }
    }
    return TunedMethod{p, certificate_or_throw(convergence_rate(p, Spectrum::endpoints(m, L)))};
}

double fundamental_settling_bound(double kappa) {
    if (!(kappa >= 1.0))
        throw std::invalid_argument("fundamental_settling_bound: kappa must be >= 1");
    return (std::sqrt(kappa) + 1.0) / 2.0;
}

}  // namespace momnoise
