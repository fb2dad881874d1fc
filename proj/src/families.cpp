#include "momnoise/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "momnoise/parallel.hpp"

namespace momnoise {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBoundaryTol = 1e-12;

void check_range(double m, double L) {
    if (!(m > 0.0) || !(L >= m))
        throw std::invalid_argument("family constructor: need 0 < m <= L");
}

void check_rho(double rho) {
    if (!(rho >= 0.0) || !(rho < 1.0))
        throw std::invalid_argument("family constructor: need rho in [0, 1)");
}

BoundCheck upper(std::string id, double lhs, double rhs) {
    const double tol = 1e-12 * std::max(std::fabs(lhs), std::fabs(rhs));
    return BoundCheck{std::move(id), lhs, rhs, lhs <= rhs + tol, std::fabs(lhs - rhs)};
}

BoundCheck lower(std::string id, double lhs, double rhs) {
    const double tol = 1e-12 * std::max(std::fabs(lhs), std::fabs(rhs));
    return BoundCheck{std::move(id), lhs, rhs, lhs >= rhs - tol, std::fabs(lhs - rhs)};
}

}  // namespace

const char* to_string(Family f) {
    switch (f) {
        case Family::HBLike: return "hb-like";
        case Family::NALike: return "na-like";
        case Family::GDReduced: return "gd-reduced";
        case Family::HBReduced: return "hb-reduced";
    }
    return "?";
}

ClassExtremes class_extremes(const FamilyPoint& point, int n) {
    if (n < 1) throw std::invalid_argument("class_extremes: need n >= 1");
    if (!point.closed_forms) throw std::invalid_argument("class_extremes: missing closed forms");
    const auto& cf = *point.closed_forms;
    const double extra = static_cast<double>(n - 2);
    const double jhat_max = std::max(cf.jhat_m, cf.jhat_L);
    return ClassExtremes{cf.jhat_m + cf.jhat_L + extra * jhat_max,
                         cf.jhat_m + cf.jhat_L + extra * cf.jhat_inner};
}

FamilyPoint hb_like(Rate r, double m, double L, NoiseModel noise_model, double sigma) {
    check_range(m, L);
    check_rho(r.rho);
    const double kappa = L / m;
    const double rho = r.rho;
    const double sk = std::sqrt(kappa);
    const double rho_floor = (sk - 1.0) / (sk + 1.0);
    if (rho < rho_floor * (1.0 - kBoundaryTol) - kBoundaryTol)
        throw std::domain_error("hb_like: settling time below the fundamental bound");

    double c;
    if (rho == 0.0) {
        c = -1.0;  // kappa == 1 limit; beta = c rho^2 vanishes either way
    } else {
        const double R = (1.0 + rho) / (1.0 - rho);
        c = (kappa - R) / (rho * (kappa + R));
        c = std::clamp(c, -1.0, 1.0);
    }

    FamilyPoint pt;
    pt.family = Family::HBLike;
    pt.c = c;
    pt.rho = rho;
    pt.m = m;
    pt.L = L;
    pt.params = AlgoParams{(1.0 + rho) * (1.0 + c * rho) / L, c * rho * rho, 0.0, noise_model,
                           sigma};

    const double sw2 = pt.params.sigma_w() * pt.params.sigma_w();
    FamilyClosedForms cf;
    cf.jhat_m = sw2 * (kappa + 1.0) /
                (2.0 * (1.0 - c * rho * rho) * (1.0 + rho) * (1.0 + c * rho));
    cf.jhat_L = cf.jhat_m;  // symmetric about the midpoint
    cf.jhat_inner = sw2 / ((1.0 + c * rho * rho) * (1.0 - c * rho * rho));
    cf.inner_lambda = 0.5 * (m + L);
    pt.closed_forms = cf;
    return pt;
}

FamilyPoint hb_like(SettlingTime t, double m, double L, NoiseModel noise_model, double sigma) {
    if (!(t.ts >= 1.0)) throw std::invalid_argument("hb_like: settling time must be >= 1");
    return hb_like(Rate{t.rho()}, m, L, noise_model, sigma);
}

AlgoParams hb_like_momentum_form(double rho, double m, double L, NoiseModel noise_model,
                                 double sigma) {
    check_range(m, L);
    check_rho(rho);
    const double kappa = L / m;
    double beta = 0.0;
    if (rho > 0.0) {
        const double R = (1.0 + rho) / (1.0 - rho);
        beta = rho * (kappa - R) / (kappa + R);
    }
    // beta / rho -> 0 as rho -> 0, leaving alpha = 1/L
    const double alpha =
        rho > 0.0 ? (1.0 + rho) * (1.0 + beta / rho) / L : 1.0 / L;
    return AlgoParams{alpha, beta, 0.0, noise_model, sigma};
}

HbLikeProducts hb_like_products(const FamilyPoint& point, int n, NoiseModel noise_model) {
    if (point.family != Family::HBLike)
        throw std::invalid_argument("hb_like_products: point is not heavy-ball-like");
    if (n < 1) throw std::invalid_argument("hb_like_products: need n >= 1");

    const double rho = point.rho;
    const double c = point.c;
    const double kappa = point.kappa();
    const double L = point.L;
    const double ts = point.settling_time();
    const double s2 = point.params.sigma * point.params.sigma;
    const double sw2 = noise_model == NoiseModel::Gradient
                           ? point.params.alpha * point.params.alpha * s2
                           : s2;
    const double nn = static_cast<double>(n);

    const double q = (1.0 - c * rho) / (1.0 - c * rho * rho);
    const double q_neg = (1.0 + c * rho) / (1.0 + c * rho * rho);
    const double onep = 1.0 + rho;

    HbLikeProducts out;
    out.q = q;
    out.p1 = q / (2.0 * onep * onep * (1.0 + c * rho) * (1.0 + c * rho));
    out.p2 = q / (onep * (1.0 + c * rho * rho) * (1.0 + c * rho));
    out.p3 = q / (2.0 * L * L);
    out.p4 = q * q_neg * onep / (L * L);

    if (noise_model == NoiseModel::Gradient) {
        out.jmax_ts = s2 * out.p3 * nn * kappa * (kappa + 1.0);
        out.jmin_ts = s2 * kappa * (2.0 * out.p3 * (kappa + 1.0) + (nn - 2.0) * out.p4);
    } else {
        out.jmax_ts = sw2 * out.p1 * nn * kappa * (kappa + 1.0);
        out.jmin_ts = sw2 * kappa * (2.0 * out.p1 * (kappa + 1.0) + (nn - 2.0) * out.p2);
    }

    if (c <= 0.0) {
        const double ac = std::fabs(c);
        out.p5 = 1.0 / (2.0 * (1.0 + ac * rho) * (1.0 + ac * rho * rho));
        out.p6 = 2.0 * onep * out.p5 * q_neg;
        out.jmax = sw2 * out.p5 * nn * (1.0 + 1.0 / kappa) * ts;
        out.jmin = sw2 * (2.0 * out.p5 * (1.0 + 1.0 / kappa) + out.p6 * (nn - 2.0) / kappa) * ts;
    } else {
        out.p5 = out.p6 = out.jmax = out.jmin = kNaN;
    }
    return out;
}

FamilyPoint na_like(Rate r, double m, double L, NoiseModel noise_model, double sigma) {
    check_range(m, L);
    check_rho(r.rho);
    const double kappa = L / m;
    const double rho = r.rho;
    const double rho_floor = 1.0 - 2.0 / std::sqrt(3.0 * kappa + 1.0);
    const double rho_ceil = (kappa - 1.0) / (kappa + 1.0);
    if (rho < rho_floor * (1.0 - kBoundaryTol) - kBoundaryTol ||
        rho > rho_ceil * (1.0 + kBoundaryTol) + kBoundaryTol)
        throw std::domain_error("na_like: settling time outside the feasible range");

    // ka (1-rho)(1 - c rho - c^2 (1+rho)) = (1+rho)(1 - c rho - c^2 (1-rho))
    // rearranged as a2 c^2 + a1 c + a0 = 0 with a2 = (1-rho^2)(1-kappa),
    // a1 = -rho D, a0 = D, D = kappa (1-rho) - (1+rho). The roots straddle
    // zero; the admissible one has the cancellation-free form below.
    const double D = kappa * (1.0 - rho) - (1.0 + rho);
    FamilyPoint pt;
    pt.family = Family::NALike;
    pt.rho = rho;
    pt.m = m;
    pt.L = L;

    double c = 0.0;
    if (D > 0.0 && rho > 0.0) {
        const double disc = rho * rho * D * D + 4.0 * (1.0 - rho * rho) * (kappa - 1.0) * D;
        c = 2.0 * D / (rho * D + std::sqrt(disc));
        if (c > 0.5 + 1e-9)
            throw std::runtime_error("na_like: no admissible interpolation root in [0, 1/2]; got " +
                                     std::to_string(c));
        const double other = (rho * D + std::sqrt(disc)) /
                             (2.0 * (1.0 - rho * rho) * (1.0 - kappa));
        if (other >= -kBoundaryTol && other <= 0.5 + kBoundaryTol && other < c)
            pt.note = "both quadratic roots admissible; smaller chosen";
        c = std::clamp(c, 0.0, 0.5);
    }
    pt.c = c;

    const double alpha = (1.0 + rho) * (1.0 + c - c * rho) / (L * (1.0 + c));
    // beta = c rho^2 / ((alpha L - 1)(1 + c)) with alpha L - 1 = rho (1 - c rho)/(1 + c).
    const double beta = (c == 0.0 || rho == 0.0) ? 0.0 : c * rho / (1.0 - c * rho);
    pt.params = AlgoParams{alpha, beta, beta, noise_model, sigma};

    const double sw2 = pt.params.sigma_w() * pt.params.sigma_w();
    const double rr = (1.0 + c) * (1.0 - c + c * rho) / ((1.0 - c) * (1.0 + c - c * rho));
    FamilyClosedForms cf;
    cf.jhat_m = sw2 * (1.0 - c) * (1.0 - c) * (rr * kappa + 1.0) /
                (2.0 * (1.0 - c - c * rho * rho) * (1.0 + rho) * (1.0 - c + c * rho));
    cf.jhat_L = sw2 * (1.0 + c) * (1.0 + c) * (1.0 + c - c * rho * rho) /
                ((1.0 - rho * rho) * (1.0 + c - c * rho) * (1.0 + c + c * rho) *
                 (1.0 + c + c * rho * rho));
    cf.jhat_inner = sw2;
    cf.inner_lambda = std::clamp(1.0 / alpha, m, L);
    pt.closed_forms = cf;
    return pt;
}

FamilyPoint na_like(SettlingTime t, double m, double L, NoiseModel noise_model, double sigma) {
    if (!(t.ts >= 1.0)) throw std::invalid_argument("na_like: settling time must be >= 1");
    return na_like(Rate{t.rho()}, m, L, noise_model, sigma);
}

double na_like_ratio_r(const FamilyPoint& point) {
    if (point.family != Family::NALike)
        throw std::invalid_argument("na_like_ratio_r: point is not Nesterov-like");
    const double c = point.c;
    const double rho = point.rho;
    return (1.0 + c) * (1.0 - c + c * rho) / ((1.0 - c) * (1.0 + c - c * rho));
}

FamilyPoint gd_reduced(double c, double m, double L, NoiseModel noise_model, double sigma) {
    check_range(m, L);
    if (!(c >= -1.0) || !(c <= 1.0))
        throw std::invalid_argument("gd_reduced: need c in [-1, 1]");
    const double kappa = L / m;
    const double rho = kappa == 1.0 ? 0.0 : (kappa - 1.0) / (kappa + c);
    if (!(rho < 1.0)) throw std::domain_error("gd_reduced: c = -1 leaves no stepsize margin");

    FamilyPoint pt;
    pt.family = Family::GDReduced;
    pt.c = c;
    pt.rho = rho;
    pt.m = m;
    pt.L = L;
    pt.params = AlgoParams{(1.0 + c * rho) / L, 0.0, 0.0, noise_model, sigma};

    const double sw2 = pt.params.sigma_w() * pt.params.sigma_w();
    FamilyClosedForms cf;
    cf.jhat_m = sw2 / (1.0 - rho * rho);
    cf.jhat_L = sw2 / (1.0 - c * c * rho * rho);
    if (c >= 0.0) {
        cf.jhat_inner = sw2;
        cf.inner_lambda = std::clamp(1.0 / pt.params.alpha, m, L);
    } else {
        cf.jhat_inner = cf.jhat_L;
        cf.inner_lambda = L;
    }
    pt.closed_forms = cf;
    return pt;
}

FamilyPoint hb_reduced(Rate r, double m, double L, NoiseModel noise_model, double sigma) {
    check_range(m, L);
    check_rho(r.rho);
    const double kappa = L / m;
    const double rho = r.rho;
    const double sk = std::sqrt(kappa);
    const double rho_floor = (sk - 1.0) / (sk + 1.0);
    if (rho < rho_floor * (1.0 - kBoundaryTol) - kBoundaryTol)
        throw std::domain_error("hb_reduced: rate below the fundamental bound");

    FamilyPoint pt;
    pt.family = Family::HBReduced;
    pt.rho = rho;
    pt.m = m;
    pt.L = L;
    // c' parameterizes where the right endpoint lands on the top edge.
    pt.c = rho > 0.0 ? (kappa * (1.0 - rho) * (1.0 - rho) - (1.0 + rho * rho)) / (2.0 * rho)
                     : 0.0;
    pt.params =
        AlgoParams{(1.0 - rho) * (1.0 - rho) / m, rho * rho, 0.0, noise_model, sigma};

    const double sw2 = pt.params.sigma_w() * pt.params.sigma_w();
    const double one_m = 1.0 - rho;
    const double one_p = 1.0 + rho;
    FamilyClosedForms cf;
    cf.jhat_m = sw2 * (1.0 + rho * rho) / (one_m * one_m * one_m * one_p * one_p * one_p);
    cf.jhat_L = modal_amplification_at(pt.params, L);
    const double bL = kappa * one_m * one_m - (1.0 + rho * rho);
    if (bL >= 0.0) {
        cf.jhat_inner = sw2 / ((1.0 + rho * rho) * (1.0 - rho * rho));
        cf.inner_lambda = (1.0 + rho * rho) / pt.params.alpha;
    } else {
        cf.jhat_inner = cf.jhat_L;
        cf.inner_lambda = L;
    }
    pt.closed_forms = cf;
    return pt;
}

FamilyPoint hb_reduced(SettlingTime t, double m, double L, NoiseModel noise_model, double sigma) {
    if (!(t.ts >= 1.0)) throw std::invalid_argument("hb_reduced: settling time must be >= 1");
    return hb_reduced(Rate{t.rho()}, m, L, noise_model, sigma);
}

double hb_reduced_jmax_reference(const FamilyPoint& point, int n) {
    if (point.family != Family::HBReduced)
        throw std::invalid_argument("hb_reduced_jmax_reference: wrong family");
    if (point.params.noise_model != NoiseModel::Gradient)
        throw std::invalid_argument("hb_reduced_jmax_reference: defined for gradient noise");
    const double rho = point.rho;
    const double kappa = point.kappa();
    const double s2 = point.params.sigma * point.params.sigma;
    const double onep = 1.0 + rho;
    return s2 * n * kappa * kappa * (1.0 - std::pow(rho, 4)) /
           (point.L * point.L * onep * onep * onep * onep);
}

std::vector<double> TsGrid::values() const {
    if (points < 0) throw std::invalid_argument("TsGrid: negative point count");
    if (points == 0) return {};
    if (!(min > 0.0) || !(max >= min)) throw std::invalid_argument("TsGrid: need 0 < min <= max");
    if (spacing == GridSpacing::Log && !(min > 0.0))
        throw std::invalid_argument("TsGrid: log spacing needs positive min");
    std::vector<double> out(static_cast<size_t>(points));
    if (points == 1) {
        out[0] = min;
        return out;
    }
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        out[static_cast<size_t>(i)] = spacing == GridSpacing::Log
                                          ? min * std::pow(max / min, t)
                                          : min + (max - min) * t;
    }
    out.front() = min;
    out.back() = max;
    return out;
}

namespace {

FamilyPoint build_family_point(Family family, double ts, double m, double L,
                               NoiseModel noise_model, double sigma) {
    switch (family) {
        case Family::HBLike: return hb_like(SettlingTime{ts}, m, L, noise_model, sigma);
        case Family::NALike: return na_like(SettlingTime{ts}, m, L, noise_model, sigma);
        case Family::HBReduced: return hb_reduced(SettlingTime{ts}, m, L, noise_model, sigma);
        case Family::GDReduced: {
            const double kappa = L / m;
            const double c = ts == 1.0 && kappa == 1.0 ? 1.0 : (kappa - ts) / (ts - 1.0);
            if (!(c >= -1.0 - kBoundaryTol) || !(c <= 1.0 + kBoundaryTol))
                throw std::domain_error("gd_reduced: settling time outside feasible range");
            return gd_reduced(std::clamp(c, -1.0, 1.0), m, L, noise_model, sigma);
        }
    }
    throw std::logic_error("build_family_point: unknown family");
}

}  // namespace

std::vector<TradeoffRow> tradeoff_curve(Family family, double kappa, int n,
                                        NoiseModel noise_model, const TsGrid& grid,
                                        double sigma) {
    if (!(kappa >= 1.0)) throw std::invalid_argument("tradeoff_curve: kappa must be >= 1");
    if (n < 1) throw std::invalid_argument("tradeoff_curve: need n >= 1");
    const double m = 1.0;
    const double L = kappa;
    const double nn = static_cast<double>(n);

    const std::vector<double> ts_values = grid.values();
    std::vector<TradeoffRow> rows(ts_values.size());
    // grid points are independent; rows land in their own slots, so the
    // output order never depends on scheduling
    parallel_for(static_cast<int>(ts_values.size()), [&](int idx) {
        const double ts = ts_values[static_cast<size_t>(idx)];
        TradeoffRow row;
        row.ts = ts;
        try {
            const FamilyPoint pt = build_family_point(family, ts, m, L, noise_model, sigma);
            const ClassExtremes ext = class_extremes(pt, n);
            const double rho = pt.rho;
            const double onep = 1.0 + rho;
            const double sw2 = pt.params.sigma_w() * pt.params.sigma_w();
            const double s2 = sigma * sigma;

            row.feasible = true;
            row.status = "ok";
            row.rho = rho;
            row.c = pt.c;
            row.jmax = ext.jmax;
            row.jmin = ext.jmin;
            row.jmax_ts = ext.jmax * ts;
            row.jmin_ts = ext.jmin * ts;
            row.j_ub_cubic = sw2 * (1.0 + rho * rho) / (onep * onep * onep) * nn * ts * ts * ts;
            row.jmax_ts_lb =
                sw2 * ((nn - 1.0) * kappa * kappa / 64.0 + (std::sqrt(kappa) + 1.0) / 2.0);
            row.jmin_ts_lb =
                sw2 * (kappa * kappa / 64.0 + (nn - 1.0) * (std::sqrt(kappa) + 1.0) / 2.0);
            row.jmax_lb_linear = sw2 * ((nn - 1.0) * ts / (2.0 * onep * onep) + 1.0);
            row.jmin_lb_linear = sw2 * (ts / (2.0 * onep * onep) + (nn - 1.0));

            row.jmax_ts_ub_family = kNaN;
            row.jmin_ts_ub_family = kNaN;
            row.jmax_ub_linear_family = kNaN;
            row.jmin_ub_linear_family = kNaN;
            if (family == Family::HBLike) {
                if (noise_model == NoiseModel::Gradient) {
                    row.jmax_ts_ub_family = s2 * nn * kappa * (kappa + 1.0) / (L * L);
                    row.jmin_ts_ub_family =
                        2.0 * s2 * kappa * (kappa + 4.0 * nn - 7.0) / (L * L);
                } else if (pt.c >= 0.0) {
                    row.jmax_ts_ub_family = sw2 * nn * kappa * (kappa + 1.0) / 2.0;
                    row.jmin_ts_ub_family = sw2 * kappa * (kappa + nn - 1.0);
                }
                if (pt.c <= 0.0) {
                    row.jmax_ub_linear_family = sw2 * nn * ts;
                    row.jmin_ub_linear_family = 2.0 * sw2 * (1.0 + (nn - 2.0) / kappa) * ts;
                }
            }
        } catch (const std::domain_error& e) {
            row.feasible = false;
            row.status = std::string("infeasible: ") + e.what();
            row.rho = row.c = row.jmax = row.jmin = row.jmax_ts = row.jmin_ts = kNaN;
            row.j_ub_cubic = row.jmax_ts_lb = row.jmin_ts_lb = kNaN;
            row.jmax_lb_linear = row.jmin_lb_linear = kNaN;
            row.jmax_ts_ub_family = row.jmin_ts_ub_family = kNaN;
            row.jmax_ub_linear_family = row.jmin_ub_linear_family = kNaN;
        }
        rows[static_cast<size_t>(idx)] = std::move(row);
    });
    return rows;
}

std::vector<BoundCheck> family_bound_checks(const FamilyPoint& point, int n) {
    if (n < 1) throw std::invalid_argument("family_bound_checks: need n >= 1");
    const ClassExtremes ext = class_extremes(point, n);
    const double ts = point.settling_time();
    const double kappa = point.kappa();
    const double nn = static_cast<double>(n);
    const double sw2 = point.params.sigma_w() * point.params.sigma_w();
    const double s2 = point.params.sigma * point.params.sigma;
    const double L = point.L;

    std::vector<BoundCheck> checks;
    if (point.family == Family::HBLike) {
        if (point.c >= 0.0) {
            checks.push_back(upper("jmax-ts-family-ub", ext.jmax * ts,
                                   sw2 * nn * kappa * (kappa + 1.0) / 2.0));
            checks.push_back(
                upper("jmin-ts-family-ub", ext.jmin * ts, sw2 * kappa * (kappa + nn - 1.0)));
        }
        if (point.params.noise_model == NoiseModel::Gradient) {
            checks.push_back(upper("jmax-ts-family-ub-grad", ext.jmax * ts,
                                   s2 * nn * kappa * (kappa + 1.0) / (L * L)));
            checks.push_back(upper("jmin-ts-family-ub-grad", ext.jmin * ts,
                                   2.0 * s2 * kappa * (kappa + 4.0 * nn - 7.0) / (L * L)));
        }
        if (point.c <= 0.0) {
            checks.push_back(upper("jmax-linear-family-ub", ext.jmax, sw2 * nn * ts));
            checks.push_back(upper("jmin-linear-family-ub", ext.jmin,
                                   2.0 * sw2 * (1.0 + (nn - 2.0) / kappa) * ts));
        }
    } else if (point.family == Family::NALike) {
        const double root = std::sqrt(3.0 * kappa + 1.0);
        checks.push_back(lower("jmax-ts-na-lb", ext.jmax * ts,
                               sw2 * ((nn - 1.0) * kappa * (kappa + 1.0) / 32.0 + root / 2.0)));
        checks.push_back(
            upper("jmax-ts-na-ub", ext.jmax * ts, 6.0 * sw2 * nn * kappa * (3.0 * kappa + 1.0)));
        checks.push_back(lower("jmin-ts-na-lb", ext.jmin * ts,
                               sw2 * (kappa * (kappa + 1.0) / 32.0 + (nn - 1.0) * root / 2.0)));
        checks.push_back(upper("jmin-ts-na-ub", ext.jmin * ts,
                               sw2 * (6.0 * kappa * (3.0 * kappa + 1.0) +
                                      (nn - 1.0) * (kappa + 1.0) / 2.0)));
    }
    return checks;
}

}  // namespace momnoise
