#pragma once

#include <optional>
#include <vector>

#include "momnoise/amplification.hpp"
#include "momnoise/model.hpp"

namespace momnoise {

/// Parameters of the noisy gradient flows
///   gfd:  dx/dt + alpha grad f(x) = sigma w
///   agd:  d2x/dt2 + theta dx/dt + alpha grad f(x + gamma dx/dt) = sigma w
/// with theta = 1 - beta. The analysis normalizes alpha = 1/L, sigma = 1;
/// time dilation recovers every other scaling.
struct CTParams {
    double theta = 0.0;
    double gamma = 0.0;
    double alpha = 0.0;
    double sigma = 1.0;

    double beta() const { return 1.0 - theta; }
};

enum class CTKind { Gfd, Agd };

/// Modal coefficients of the accelerated flow: a = alpha lambda,
/// b = theta + gamma alpha lambda. The modal matrix is [[0,1],[-a,-b]],
/// the same companion shape as in discrete time.
ModalPoint ct_coefficients(const CTParams& params, double lambda);

/// Routh-Hurwitz for s^2 + b s + a. Without a rate: Hurwitz iff a, b > 0.
/// With rate rho: all root real parts <= -rho iff a >= rho (b - rho) and
/// b >= 2 rho (non-strict). Under the normalization a <= 1 the rho-set is
/// the triangle with vertices (2 rho, rho^2), (2 rho, 1), (rho + 1/rho, 1).
bool ct_stability(const ModalPoint& p, std::optional<double> rho = std::nullopt);

/// Exponential decay rate of one mode, -max Re(roots of s^2 + b s + a):
/// (b - sqrt(b^2 - 4a))/2 for real roots, b/2 for a complex pair. Repeated
/// roots are classified with the same tolerance as the discrete case.
double ct_modal_rate(const ModalPoint& p);

struct CtCertificate {
    double rho = 0.0;
    double settling_time = 0.0;  ///< 1 / rho
    ModalPoint at_m;
    ModalPoint at_L;
};

/// Exponential rate on [m, L]: the minimum of the endpoint modal rates
/// (the rho-stability set is convex and the segment affine in lambda).
/// Unstable when some endpoint is not Hurwitz.
std::variant<CtCertificate, Unstable> ct_convergence_rate(const CTParams& params, double m,
                                                          double L);

/// Rate-optimal tuning of the accelerated flow at alpha = 1/L:
/// rho = 1/sqrt(kappa) for the one-parameter family
///   beta = 1 + (v - 2)/sqrt(kappa), gamma = v sqrt(kappa),  v in [0, 1].
/// v = 0 is heavy ball; gamma = beta requires v = (sqrt(kappa)-2)/(kappa-1)
/// and hence kappa >= 4.
struct CtOptimalFamily {
    double kappa = 0.0;
    double rho = 0.0;  ///< 1 / sqrt(kappa)

    double theta(double v) const;
    double gamma(double v) const;
    CTParams params(double v, double L, double sigma = 1.0) const;

    static constexpr double heavy_ball_v = 0.0;
    double nesterov_v() const;  ///< throws std::domain_error for kappa < 4
};

CtOptimalFamily ct_optimal(double kappa);

/// Steady-state modal variance: 1/(2a) for gfd, 1/(2ab) for agd (times
/// sigma^2). Throws UnstableError when the mode is not Hurwitz.
double ct_modal_amplification(const ModalPoint& p, CTKind kind, double sigma = 1.0);

struct CtClassExtremes {
    double jmax = 0.0;
    double jmin = 0.0;
};

enum class CtOptimalKind { Gfd, AgdHeavyBall, AgdNesterov };

/// Closed-form class extremes at the rate-optimal parameters
/// (alpha = 1/L, sigma = 1):
///   gfd:     Jmax = ((n-1) kappa + 1)/2,            Jmin = (kappa + n - 1)/2
///   agd hb:  Jmax = ((n-1) kappa^1.5 + sqrt(kappa))/4, Jmin = (kappa^1.5 + (n-1) sqrt(kappa))/4
///   agd na:  Jmax = ((n-1) kappa^1.5 + 2)/4,        Jmin = (kappa^1.5 + 2 (n-1))/4
CtClassExtremes ct_class_extremes(CtOptimalKind kind, double kappa, int n);

/// Generic class extremes for any Hurwitz-stabilizing parameters: the modal
/// variance is 1/(2 q(lambda)) with q = a b a positive quadratic on [m, L],
/// so its extremes are at the endpoints or at the (clamped) vertex of q.
CtClassExtremes ct_class_extremes_general(const CTParams& params, double m, double L, int n,
                                          CTKind kind);

/// Product bounds for the accelerated flow at alpha = 1/L with exact rate
/// rho = 1/Ts:
///   Jmax Ts >= (n-1) kappa^2/4 + 1/(2 (1 + rho^2))
///   Jmin Ts >= kappa^2/4 + (n-1)/(2 (1 + rho^2))
std::vector<BoundCheck> ct_verify_bounds(const CTParams& params, double m, double L, int n);

/// Independent route to J: per mode, solve A P + P A^T = -B B^T (scalar for
/// gfd, three unknowns for agd) and sum the output variances.
double ct_lyapunov_oracle(const CTParams& params, const Spectrum& spectrum, CTKind kind);

/// Time dilation s = c t maps (theta, gamma, alpha, sigma) to
/// (theta/c, c gamma, alpha/c^2, sigma/(c sqrt(c))); modal rates scale by
/// 1/c and c = sqrt(alpha L) recovers the normalized form.
CTParams time_dilation(const CTParams& params, double c);

}  // namespace momnoise
