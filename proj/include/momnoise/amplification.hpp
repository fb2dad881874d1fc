#pragma once

#include <string>
#include <utility>
#include <vector>

#include "momnoise/geometry.hpp"
#include "momnoise/model.hpp"

namespace momnoise {

/// One evaluated inequality: lhs vs rhs with the direction folded into
/// `satisfied` (with 1e-12 relative play so exact-equality cases survive
/// roundoff), and |lhs - rhs| recorded so sweeps can emit slack surfaces.
/// Unsatisfied checks are reported, never thrown; a false entry here means
/// an implementation bug, not a user error.
struct BoundCheck {
    std::string bound_id;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    double slack = 0.0;
};

/// Steady-state output variance of one noisy mode,
///   Jhat = sigma_w^2 (d + l) / (2 d h l),
/// in terms of the distances of (b, a) to the stability-triangle edges.
/// Throws UnstableError outside the stability triangle.
double modal_amplification(const ModalPoint& p, double sigma_w);

/// Same quantity evaluated from (params, lambda) with d = alpha * lambda
/// taken directly; avoids the cancellation of forming a + b + 1 when the
/// mode sits close to the left edge.
double modal_amplification_at(const AlgoParams& params, double lambda);

/// Noise amplification of a full spectrum plus the modal extremes over
/// [m, L] and the extreme values J can take over all spectra sharing
/// (m, L, n):
///   class_max = Jhat(m) + Jhat(L) + (n - 2) max Jhat
///   class_min = Jhat(m) + Jhat(L) + (n - 2) min Jhat
struct AmplificationReport {
    std::vector<std::pair<double, double>> per_mode;  ///< (lambda, Jhat)
    double total = 0.0;                               ///< J = sum of per-mode values
    double jhat_max = 0.0;                            ///< max Jhat over [m, L] (at an endpoint)
    double jhat_min = 0.0;                            ///< min Jhat over [m, L]
    double jhat_min_argument = 0.0;                   ///< minimizing lambda
    double class_max = 0.0;
    double class_min = 0.0;
};

/// Jhat is convex in lambda for stabilizing parameters, so the maximum over
/// [m, L] sits at an endpoint and the minimum is found by ternary search
/// (or in closed form when gamma = 0 or gamma = beta, where the segment's
/// closest approach to the origin is known).
AmplificationReport total_amplification(const AlgoParams& params, const Spectrum& spectrum);

/// Independent route to J: per mode, solve the 2x2 discrete Lyapunov
/// equation P = A P A^T + B B^T as a linear system in the three unknowns
/// of symmetric P and sum the (1,1) entries.
double lyapunov_oracle(const AlgoParams& params, const Spectrum& spectrum);

/// Evaluate the catalogue of rate/amplification inequalities for the given
/// parameters on the class of quadratics with extreme eigenvalues (m, L)
/// and dimension n. Requires stabilizing parameters.
std::vector<BoundCheck> verify_bounds(const AlgoParams& params, double m, double L, int n);

/// alpha * L <= (1 + rho)^2, a consequence of the right endpoint staying
/// inside the rho-contraction triangle.
BoundCheck stepsize_rate_bound(const AlgoParams& params, double L, double rho);

}  // namespace momnoise
