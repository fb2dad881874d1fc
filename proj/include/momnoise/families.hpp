#pragma once

#include <optional>
#include <string>
#include <vector>

#include "momnoise/amplification.hpp"
#include "momnoise/model.hpp"

namespace momnoise {

/// One-parameter families interpolating between rate-optimal gradient
/// descent and the corresponding accelerated method, plus the two
/// reduced-stepsize variants.
enum class Family { HBLike, NALike, GDReduced, HBReduced };

const char* to_string(Family f);

/// Strong types so constructors can take either a rate or a settling time.
struct Rate {
    double rho;
};
struct SettlingTime {
    double ts;
    double rho() const { return 1.0 - 1.0 / ts; }
};

/// Modal amplification at the three distinguished eigenvalues of a family
/// point: the two endpoints and the interior minimizer (the midpoint
/// (m+L)/2 for heavy-ball-like parameters, 1/alpha for Nesterov-like).
struct FamilyClosedForms {
    double jhat_m = 0.0;
    double jhat_L = 0.0;
    double jhat_inner = 0.0;
    double inner_lambda = 0.0;
};

struct FamilyPoint {
    Family family;
    double c = 0.0;    ///< interpolation scalar
    double rho = 0.0;  ///< achieved convergence rate
    double m = 0.0;
    double L = 0.0;
    AlgoParams params;
    std::optional<FamilyClosedForms> closed_forms{};
    std::string note{};  ///< diagnostics (e.g. root selection)

    double kappa() const { return L / m; }
    double settling_time() const { return 1.0 / (1.0 - rho); }
};

struct ClassExtremes {
    double jmax = 0.0;
    double jmin = 0.0;
};

/// Extreme amplification over all spectra with the point's (m, L) and
/// dimension n, assembled from the family's closed forms.
ClassExtremes class_extremes(const FamilyPoint& point, int n);

/// Heavy-ball-like family: beta = c rho^2, alpha = (1+rho)(1+c rho)/L,
/// gamma = 0, with c chosen so both segment endpoints sit on the slanted
/// edges of the rho-contraction triangle. c = 1 is rate-optimal heavy ball,
/// c = 0 rate-optimal gradient descent, c < 0 the decelerated regime.
/// Feasible for Ts >= (sqrt(kappa) + 1) / 2.
FamilyPoint hb_like(Rate r, double m, double L, NoiseModel noise_model = NoiseModel::Iterate,
                    double sigma = 1.0);
FamilyPoint hb_like(SettlingTime t, double m, double L,
                    NoiseModel noise_model = NoiseModel::Iterate, double sigma = 1.0);

/// Equivalent construction of the heavy-ball-like parameters through the
/// momentum ratio beta = rho (kappa - R)/(kappa + R), R = (1+rho)/(1-rho),
/// alpha = (1+rho)(1 + beta/rho)/L. Used as an algebraic cross-check of
/// the interpolation form.
AlgoParams hb_like_momentum_form(double rho, double m, double L,
                                 NoiseModel noise_model = NoiseModel::Iterate,
                                 double sigma = 1.0);

/// Closed-form products J_max Ts and J_min Ts for a heavy-ball-like point,
/// with the coefficient values exposed so their ranges can be audited:
///   p1 in [1/64, 1/2] and p2 in [1/16, 1]   for c in [0, 1]
///   p3 in [1/(4 L^2), 1/L^2], p4 in [1/(4 L^2), 4/L^2] for c in [-1, 1]
///   p5 in [1/8, 1/2] and p6 in [1/8, 2]     for c in [-1, 0]
struct HbLikeProducts {
    double jmax_ts = 0.0;
    double jmin_ts = 0.0;
    double jmax = 0.0;  ///< J_max itself (c <= 0: sigma_w^2 p5 n (1+1/kappa) Ts)
    double jmin = 0.0;
    double q = 0.0;
    double p1 = 0.0, p2 = 0.0, p3 = 0.0, p4 = 0.0;
    double p5 = 0.0, p6 = 0.0;  ///< NaN unless c <= 0
};

HbLikeProducts hb_like_products(const FamilyPoint& point, int n, NoiseModel noise_model);

/// Nesterov-like family: gamma = beta, segment through the origin with
/// slope -c rho, endpoints on the slanted triangle edges. The scalar
/// c in [0, 1/2] solves the quadratic
///   kappa (1-rho)(1 - c rho - c^2 (1+rho)) = (1+rho)(1 - c rho - c^2 (1-rho)).
/// c = 0 recovers gradient descent, c = 1/2 rate-optimal Nesterov.
/// Feasible for Ts in [sqrt(3 kappa + 1)/2, (kappa + 1)/2].
FamilyPoint na_like(Rate r, double m, double L, NoiseModel noise_model = NoiseModel::Iterate,
                    double sigma = 1.0);
FamilyPoint na_like(SettlingTime t, double m, double L,
                    NoiseModel noise_model = NoiseModel::Iterate, double sigma = 1.0);

/// The scalar r = l(m) / d(L) in [1, 3] of a Nesterov-like point, and the
/// modal values it enters.
double na_like_ratio_r(const FamilyPoint& point);

/// Gradient descent with reduced stepsize alpha = (1 + c rho)/L for
/// c in [-1, 1]; the left endpoint stays at (-rho, 0), so
/// rho = (kappa - 1)/(kappa + c) and Ts = (kappa + c)/(c + 1).
FamilyPoint gd_reduced(double c, double m, double L,
                       NoiseModel noise_model = NoiseModel::Gradient, double sigma = 1.0);

/// Heavy-ball-like method with reduced stepsize alpha = (1-rho)^2/m,
/// beta = rho^2: the left endpoint is pinned at the triangle's left vertex
/// for any rho >= (sqrt(kappa)-1)/(sqrt(kappa)+1).
FamilyPoint hb_reduced(Rate r, double m, double L,
                       NoiseModel noise_model = NoiseModel::Gradient, double sigma = 1.0);
FamilyPoint hb_reduced(SettlingTime t, double m, double L,
                       NoiseModel noise_model = NoiseModel::Gradient, double sigma = 1.0);

/// Reference upper bound sigma^2 n kappa^2 (1 - rho^4) / (L^2 (1+rho)^4)
/// on J_max of the reduced heavy-ball family under gradient noise. Equals
/// n Jhat(m), hence >= the exact class maximum (n-1) Jhat(m) + Jhat(L),
/// with equality at the fastest feasible rate.
double hb_reduced_jmax_reference(const FamilyPoint& point, int n);

/// One grid point of a settling-time sweep: the family's achieved class
/// extremes next to every applicable bound envelope. Columns are fixed;
/// inapplicable entries are NaN. Infeasible grid points are kept and
/// flagged via `status`.
struct TradeoffRow {
    double ts = 0.0;
    double rho = 0.0;
    double c = 0.0;
    bool feasible = false;
    std::string status{};  ///< "ok" or reason for infeasibility
    double jmax = 0.0;
    double jmin = 0.0;
    double jmax_ts = 0.0;
    double jmin_ts = 0.0;
    double j_ub_cubic = 0.0;           ///< n Ts^3-type upper bound on J
    double jmax_ts_lb = 0.0;           ///< kappa^2-type lower bound on Jmax Ts
    double jmin_ts_lb = 0.0;
    double jmax_lb_linear = 0.0;       ///< Ts-linear lower bound on Jmax
    double jmin_lb_linear = 0.0;
    double jmax_ts_ub_family = 0.0;    ///< family upper bound on Jmax Ts (NaN if n/a)
    double jmin_ts_ub_family = 0.0;
    double jmax_ub_linear_family = 0.0;  ///< decelerated-regime upper bound (NaN if n/a)
    double jmin_ub_linear_family = 0.0;
};

enum class GridSpacing { Linear, Log };

struct TsGrid {
    double min = 0.0;
    double max = 0.0;
    int points = 0;
    GridSpacing spacing = GridSpacing::Linear;

    std::vector<double> values() const;
};

std::vector<TradeoffRow> tradeoff_curve(Family family, double kappa, int n,
                                        NoiseModel noise_model, const TsGrid& grid,
                                        double sigma = 1.0);

/// The family-specific inequalities satisfied by a point (the upper
/// envelopes a family achieves); lower bounds shared by all stabilizing
/// parameters come from verify_bounds.
std::vector<BoundCheck> family_bound_checks(const FamilyPoint& point, int n);

}  // namespace momnoise
