#pragma once

#include <variant>

#include "momnoise/model.hpp"

namespace momnoise {

/// Signed distances of a modal point (b, a) to the edges of the stability
/// triangle: d and l are horizontal distances to the left and right edges,
/// h is the vertical distance to the top edge.
///   d = a + b + 1,  h = 1 - a,  l = a - b + 1
/// The point is stable iff all three are positive. For a point built from
/// eigenvalue lambda, d equals alpha * lambda.
struct DistanceTriple {
    double d = 0.0;
    double h = 0.0;
    double l = 0.0;
};

DistanceTriple distances(const ModalPoint& p);

/// Jury stability test for z^2 + b z + a: spectral radius < 1 iff
/// |b| - 1 < a < 1 (open triangle with vertices (-2,1), (2,1), (0,-1)).
bool in_delta(const ModalPoint& p);

/// Contraction test: spectral radius <= rho iff
/// rho (|b| - rho) <= a <= rho^2 (closed triangle, vertices
/// (-2 rho, rho^2), (2 rho, rho^2), (0, -rho^2)). Requires 0 < rho < 1.
bool in_delta_rho(const ModalPoint& p, double rho);

/// Vertices of the rho-contraction triangle and the auxiliary point on its
/// right edge through which the steepest stable Nesterov segment passes.
ModalPoint vertex_x(double rho);                 ///< (-2 rho, rho^2)
ModalPoint vertex_y(double rho);                 ///< ( 2 rho, rho^2)
ModalPoint vertex_z(double rho);                 ///< ( 0,    -rho^2)
ModalPoint nesterov_extreme_point(double rho);   ///< ( 2 rho / 3, -rho^2 / 3)

/// Larger root modulus of z^2 + b z + a via the quadratic formula.
/// The discriminant sign is classified with a relative tolerance so that
/// genuinely repeated roots (b^2 = 4a up to roundoff) return exactly |b|/2
/// instead of |b|/2 + O(sqrt(eps)).
double modal_spectral_radius(const ModalPoint& p);

enum class EigenRegime { RealDistinct, Repeated, ComplexPair };

/// Root type of z^2 + b z + a from the sign of b^2 - 4a; |b^2 - 4a| below
/// tol (relative to max(b^2, |4a|)) counts as repeated.
EigenRegime eigen_regime(const ModalPoint& p, double tol = 1e-12);

/// One endpoint of the segment traced by the modal coefficients, with its
/// root modulus and the (by construction true at the binding endpoint)
/// verdict that it lies in the rho-contraction triangle of the certificate.
struct RateWitness {
    ModalPoint point;
    double spectral_radius = 0.0;
    bool in_rho_triangle = false;
};

/// Exact linear convergence rate together with the endpoint witnesses that
/// prove it: the rate is attained at lambda = m or lambda = L because the
/// segment of modal points is affine in lambda and the contraction set is
/// convex.
struct RateCertificate {
    double rho = 0.0;
    double settling_time = 0.0;  ///< 1 / (1 - rho)
    RateWitness at_m;
    RateWitness at_L;
};

struct Unstable {
    double spectral_radius = 0.0;  ///< largest endpoint root modulus (>= 1)
};

using RateResult = std::variant<RateCertificate, Unstable>;

bool is_stable(const RateResult& r);
const RateCertificate& certificate_or_throw(const RateResult& r);

/// rho = max of the modal spectral radii at lambda = m and lambda = L;
/// Unstable when rho >= 1. Sweeps over parameter grids legitimately probe
/// unstable regions, hence a result variant rather than an exception.
RateResult convergence_rate(const AlgoParams& params, const Spectrum& spectrum);

/// Debug cross-check for the endpoint reduction: largest modal spectral
/// radius over a dense lambda grid in [m, L].
double max_radius_on_grid(const AlgoParams& params, double m, double L, int points);

/// The three classic methods with rate-optimal tuning.
enum class Method { GD, HB, NA };

struct TunedMethod {
    AlgoParams params;
    RateCertificate certificate;
};

/// Rate-optimal parameters on [m, L]:
///   GD: alpha = 2/(L+m),            rho = (kappa-1)/(kappa+1)
///   HB: alpha = 4/(sqrt(L)+sqrt(m))^2, beta = rho^2, rho = (sqrt(kappa)-1)/(sqrt(kappa)+1)
///   NA: alpha = 4/(3L+m), beta = gamma = 1 - 4/(sqrt(3 kappa + 1) + 2),
///       rho = 1 - 2/sqrt(3 kappa + 1)
TunedMethod optimal_params(Method method, double m, double L,
                           NoiseModel noise_model = NoiseModel::Iterate, double sigma = 1.0);

/// Settling-time floor (sqrt(kappa) + 1) / 2 for any constant stabilizing
/// parameters; attained by rate-optimal heavy ball.
double fundamental_settling_bound(double kappa);

}  // namespace momnoise
