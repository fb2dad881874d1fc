// Command-line front end: rate certificates, amplification reports,
// settling-time sweeps, bound/oracle verification, and Monte Carlo runs.
//
// Exit codes: 0 ok, 1 invalid input, 2 unstable, 3 bound violation,
// 4 oracle mismatch.

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "momnoise/amplification.hpp"
#include "momnoise/continuous.hpp"
#include "momnoise/families.hpp"
#include "momnoise/geometry.hpp"
#include "momnoise/io.hpp"
#include "momnoise/model.hpp"
#include "momnoise/simulate.hpp"

namespace mn = momnoise;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUnstable = 2;
constexpr int kExitBoundViolation = 3;
constexpr int kExitOracleMismatch = 4;

constexpr const char* kSweepSchema = "momnoise/sweep/1";
constexpr const char* kSimSchema = "momnoise/simulate/1";
constexpr const char* kAmplifySchema = "momnoise/amplify/1";

std::string env_name(const std::string& flag) {
    std::string out = "MOMNOISE_";
    for (char c : flag) out.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(c)));
    return out;
}

struct Options {
    std::string command;

    std::optional<double> kappa, m, L;
    int n = 2;
    std::string noise = "iterate";
    std::string family;
    std::optional<double> ts, rho, c;
    std::optional<double> alpha;
    double beta = 0.0, gamma = 0.0;
    double sigma = 1.0;

    double grid_min = 0.0, grid_max = 0.0;
    int grid_points = 0;
    std::string grid_spacing = "linear";
    std::string grid_spec;

    std::uint64_t seed = 0;
    long steps = 1'000'000;
    long burn_in = -1;
    int trials = 1;

    std::string out;
    std::string format = "csv";
    std::string config_path;

    std::string scope = "all";
    int density = 1;
    std::string inject_fault;

    std::string kind = "agd-hb";
    std::optional<double> ct_beta, ct_gamma;
    bool grid_check = false;
};

mn::NoiseModel parse_noise(const std::string& s) {
    if (s == "iterate") return mn::NoiseModel::Iterate;
    if (s == "gradient") return mn::NoiseModel::Gradient;
    throw std::invalid_argument("unknown noise model: " + s);
}

mn::GridSpacing parse_spacing(const std::string& s) {
    if (s == "linear") return mn::GridSpacing::Linear;
    if (s == "log") return mn::GridSpacing::Log;
    throw std::invalid_argument("unknown grid spacing: " + s);
}

// "min:max:points[:linear|log]"
void apply_grid_spec(Options& opt) {
    if (opt.grid_spec.empty()) return;
    std::stringstream ss(opt.grid_spec);
    std::string item;
    std::vector<std::string> parts;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4)
        throw std::invalid_argument("bad --grid spec, want min:max:points[:spacing]");
    opt.grid_min = std::stod(parts[0]);
    opt.grid_max = std::stod(parts[1]);
    opt.grid_points = std::stoi(parts[2]);
    if (parts.size() == 4) opt.grid_spacing = parts[3];
}

void resolve_range(Options& opt) {
    if (opt.m && opt.L) {
        if (opt.kappa && std::fabs(*opt.L / *opt.m - *opt.kappa) > 1e-9)
            throw std::invalid_argument("--kappa disagrees with --m/--L");
        return;
    }
    if (opt.kappa) {
        opt.m = opt.m.value_or(1.0);
        opt.L = *opt.m * *opt.kappa;
        return;
    }
    if (opt.m || opt.L) throw std::invalid_argument("need both --m and --L (or --kappa)");
    throw std::invalid_argument("need --kappa or --m/--L");
}

struct ResolvedParams {
    mn::AlgoParams params;
    double m = 0.0;
    double L = 0.0;
    std::string description;
    std::optional<mn::FamilyPoint> family_point;
};

double requested_rate(const Options& opt) {
    if (opt.rho && opt.ts) throw std::invalid_argument("give --rho or --ts, not both");
    if (opt.rho) return *opt.rho;
    if (opt.ts) return mn::SettlingTime{*opt.ts}.rho();
    throw std::invalid_argument("family '" + opt.family + "' needs --ts or --rho");
}

ResolvedParams resolve_params(Options& opt) {
    resolve_range(opt);
    const double m = *opt.m;
    const double L = *opt.L;
    const mn::NoiseModel nm = parse_noise(opt.noise);

    ResolvedParams rp;
    rp.m = m;
    rp.L = L;
    if (opt.alpha) {
        if (!opt.family.empty())
            throw std::invalid_argument("give either --family or explicit --alpha/--beta/--gamma");
        rp.params = mn::AlgoParams{*opt.alpha, opt.beta, opt.gamma, nm, opt.sigma};
        rp.params.validate();
        rp.description = "explicit";
        return rp;
    }
    const std::string fam = opt.family.empty() ? "gd" : opt.family;
    rp.description = fam;
    if (fam == "gd" || fam == "hb" || fam == "na") {
        const mn::Method method = fam == "gd"   ? mn::Method::GD
                                  : fam == "hb" ? mn::Method::HB
                                                : mn::Method::NA;
        rp.params = mn::optimal_params(method, m, L, nm, opt.sigma).params;
        return rp;
    }
    if (fam == "hb-like")
        rp.family_point = mn::hb_like(mn::Rate{requested_rate(opt)}, m, L, nm, opt.sigma);
    else if (fam == "na-like")
        rp.family_point = mn::na_like(mn::Rate{requested_rate(opt)}, m, L, nm, opt.sigma);
    else if (fam == "gd-reduced") {
        if (opt.c)
            rp.family_point = mn::gd_reduced(*opt.c, m, L, nm, opt.sigma);
        else if (opt.ts)
            rp.family_point =
                mn::gd_reduced((L / m - *opt.ts) / (*opt.ts - 1.0), m, L, nm, opt.sigma);
        else
            throw std::invalid_argument("gd-reduced needs --c or --ts");
    } else if (fam == "hb-reduced")
        rp.family_point = mn::hb_reduced(mn::Rate{requested_rate(opt)}, m, L, nm, opt.sigma);
    else
        throw std::invalid_argument("unknown family: " + fam);
    rp.params = rp.family_point->params;
    return rp;
}

// ---------------------------------------------------------------- config --

std::string trim(const std::string& s) {
    const size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Flat `key = value` lines with optional [grid] and [sim] blocks. Keys map
// onto the long CLI flags; explicit command-line flags win over the file.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);

    static const std::vector<std::string> flat = {
        "command", "kappa", "m",       "L",    "n",     "noise",  "family",  "ts",
        "rho",     "c",     "alpha",   "beta", "gamma", "sigma",  "seed",    "out",
        "format",  "scope", "density", "kind", "steps", "trials", "burn-in"};
    static const std::vector<std::string> grid_keys = {"min", "max", "points", "spacing"};
    static const std::vector<std::string> sim_keys = {"steps", "trials", "burn-in", "seed"};

    std::vector<std::string> tokens;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            if (section != "grid" && section != "sim")
                throw std::invalid_argument("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            if (std::find(flat.begin(), flat.end(), key) == flat.end())
                throw std::invalid_argument("config: unknown key '" + key + "'");
            if (key == "command") continue;  // informational; the subcommand comes from argv
            tokens.push_back("--" + key);
        } else if (section == "grid") {
            if (std::find(grid_keys.begin(), grid_keys.end(), key) == grid_keys.end())
                throw std::invalid_argument("config: unknown key 'grid." + key + "'");
            tokens.push_back("--grid-" + key);
        } else {
            if (std::find(sim_keys.begin(), sim_keys.end(), key) == sim_keys.end())
                throw std::invalid_argument("config: unknown key 'sim." + key + "'");
            tokens.push_back("--" + key);
        }
        tokens.push_back(value);
    }
    return tokens;
}

// ----------------------------------------------------------------- output --

void print_check(const mn::BoundCheck& c) {
    std::cout << (c.satisfied ? "  [ok]   " : "  [FAIL] ") << c.bound_id
              << "  lhs=" << mn::format_full(c.lhs) << "  rhs=" << mn::format_full(c.rhs)
              << "  slack=" << mn::format_full(c.slack) << "\n";
}

// ------------------------------------------------------------------- rate --

int run_rate(Options& opt) {
    ResolvedParams rp = resolve_params(opt);
    const auto result = mn::convergence_rate(rp.params, mn::Spectrum::endpoints(rp.m, rp.L));
    std::cout << "family: " << rp.description << "\n"
              << "alpha = " << mn::format_full(rp.params.alpha)
              << "  beta = " << mn::format_full(rp.params.beta)
              << "  gamma = " << mn::format_full(rp.params.gamma) << "\n";
    if (!mn::is_stable(result)) {
        std::cout << "unstable: endpoint spectral radius = "
                  << mn::format_full(std::get<mn::Unstable>(result).spectral_radius) << "\n";
        return kExitUnstable;
    }
    const auto& cert = std::get<mn::RateCertificate>(result);
    std::cout << "rho = " << mn::format_full(cert.rho) << "\n"
              << "settling_time = " << mn::format_full(cert.settling_time) << "\n";
    for (const auto* w : {&cert.at_m, &cert.at_L}) {
        const auto d = mn::distances(w->point);
        std::cout << "endpoint lambda = " << mn::format_full(w->point.lambda.value_or(0.0))
                  << ": (b, a) = (" << mn::format_full(w->point.b) << ", "
                  << mn::format_full(w->point.a)
                  << ")  radius = " << mn::format_full(w->spectral_radius)
                  << "  d,h,l = " << mn::format_full(d.d) << ", " << mn::format_full(d.h) << ", "
                  << mn::format_full(d.l)
                  << (w->in_rho_triangle ? "  [in contraction triangle]" : "  [outside]") << "\n";
    }
    if (opt.grid_check) {
        const double grid_max = mn::max_radius_on_grid(rp.params, rp.m, rp.L, 2001);
        std::cout << "grid check: max radius over 2001 interior points = "
                  << mn::format_full(grid_max) << "\n";
        if (grid_max > cert.rho + 1e-12) return kExitBoundViolation;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- amplify --

mn::Spectrum cli_spectrum(const ResolvedParams& rp, int n) {
    // n = 1 keeps the single mode at L so one-mode runs match the modal
    // analysis at the upper endpoint
    return n == 1 ? mn::Spectrum({rp.L}) : mn::Spectrum::linear(rp.m, rp.L, n);
}

int run_amplify(Options& opt) {
    ResolvedParams rp = resolve_params(opt);
    const mn::Spectrum spec = cli_spectrum(rp, opt.n);
    const auto rep = mn::total_amplification(rp.params, spec);
    const double oracle = mn::lyapunov_oracle(rp.params, spec);
    const double rel = std::fabs(rep.total - oracle) / std::max(1e-300, std::fabs(oracle));

    std::cout << "J (evenly spaced spectrum, n = " << opt.n
              << ") = " << mn::format_full(rep.total) << "\n"
              << "lyapunov cross-check = " << mn::format_full(oracle)
              << "  (rel diff = " << mn::format_full(rel) << ")\n"
              << "jhat(m) = " << mn::format_full(rep.per_mode.front().second)
              << "  jhat(L) = " << mn::format_full(rep.per_mode.back().second) << "\n"
              << "jhat_max = " << mn::format_full(rep.jhat_max)
              << "  jhat_min = " << mn::format_full(rep.jhat_min)
              << " at lambda = " << mn::format_full(rep.jhat_min_argument) << "\n"
              << "class_max = " << mn::format_full(rep.class_max)
              << "  class_min = " << mn::format_full(rep.class_min) << "\n";

    if (!opt.out.empty()) {
        mn::Dataset ds;
        ds.schema = kAmplifySchema;
        ds.columns = {"lambda", "jhat"};
        for (const auto& [lambda, jhat] : rep.per_mode)
            ds.add_row({mn::format_full(lambda), mn::format_full(jhat)});
        mn::write_dataset_file(ds, opt.out, opt.format);
    }
    if (rel > 1e-10) {
        std::cout << "oracle mismatch above 1e-10\n";
        return kExitOracleMismatch;
    }
    return kExitOk;
}

// ------------------------------------------------------------------ sweep --

mn::Family parse_family(const std::string& s) {
    if (s == "hb-like") return mn::Family::HBLike;
    if (s == "na-like") return mn::Family::NALike;
    if (s == "gd-reduced") return mn::Family::GDReduced;
    if (s == "hb-reduced") return mn::Family::HBReduced;
    throw std::invalid_argument(
        "sweep needs --family in {hb-like, na-like, gd-reduced, hb-reduced}");
}

int run_sweep(Options& opt) {
    resolve_range(opt);
    const double kappa = *opt.L / *opt.m;
    const mn::Family family = parse_family(opt.family.empty() ? "hb-like" : opt.family);
    const mn::NoiseModel nm = parse_noise(opt.noise);
    apply_grid_spec(opt);
    const mn::TsGrid grid{opt.grid_min, opt.grid_max, opt.grid_points,
                          parse_spacing(opt.grid_spacing)};
    const auto rows = mn::tradeoff_curve(family, kappa, opt.n, nm, grid, opt.sigma);

    mn::Dataset ds;
    ds.schema = kSweepSchema;
    ds.columns = {"family", "noise", "kappa", "n", "ts", "rho", "c", "status", "jmax", "jmin",
                  "jmax_ts", "jmin_ts", "j_ub_cubic", "jmax_ts_lb", "jmin_ts_lb",
                  "jmax_lb_linear", "jmin_lb_linear", "jmax_ts_ub_family", "jmin_ts_ub_family",
                  "jmax_ub_linear_family", "jmin_ub_linear_family"};
    for (const auto& r : rows) {
        ds.add_row({mn::to_string(family), mn::to_string(nm), mn::format_full(kappa),
                    std::to_string(opt.n), mn::format_full(r.ts), mn::format_full(r.rho),
                    mn::format_full(r.c), r.feasible ? "ok" : r.status, mn::format_full(r.jmax),
                    mn::format_full(r.jmin), mn::format_full(r.jmax_ts),
                    mn::format_full(r.jmin_ts), mn::format_full(r.j_ub_cubic),
                    mn::format_full(r.jmax_ts_lb), mn::format_full(r.jmin_ts_lb),
                    mn::format_full(r.jmax_lb_linear), mn::format_full(r.jmin_lb_linear),
                    mn::format_full(r.jmax_ts_ub_family), mn::format_full(r.jmin_ts_ub_family),
                    mn::format_full(r.jmax_ub_linear_family),
                    mn::format_full(r.jmin_ub_linear_family)});
    }
    if (opt.out.empty()) {
        if (opt.format == "csv")
            mn::write_csv(ds, std::cout);
        else
            mn::write_jsonl(ds, std::cout);
    } else {
        mn::write_dataset_file(ds, opt.out, opt.format);
        std::cout << "wrote " << rows.size() << " rows to " << opt.out << "\n";
    }
    return kExitOk;
}

// ----------------------------------------------------------------- verify --

struct VerifyState {
    int checks = 0;
    std::vector<std::string> violations;
    std::vector<std::string> mismatches;
    std::string inject_fault;

    void take(std::vector<mn::BoundCheck> cs) {
        for (auto& c : cs) {
            if (!inject_fault.empty() && c.bound_id == inject_fault) c.satisfied = false;
            ++checks;
            if (!c.satisfied)
                violations.push_back(c.bound_id + " (lhs=" + mn::format_full(c.lhs) +
                                     ", rhs=" + mn::format_full(c.rhs) + ")");
        }
    }
};

std::uint64_t splitmix_step(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit_draw(std::uint64_t& s) {
    return static_cast<double>(splitmix_step(s) >> 11) * 0x1.0p-53;
}

void verify_discrete(VerifyState& st, int density) {
    // independent-route agreement on random stabilizing configurations
    std::uint64_t s = 12345;
    int accepted = 0;
    double worst = 0.0;
    while (accepted < 400 * density) {
        const double kappa = 1.5 + 98.5 * unit_draw(s);
        mn::AlgoParams p{(0.2 + 3.7 * unit_draw(s)) / kappa, -0.95 + 1.9 * unit_draw(s),
                         -0.4 + 1.6 * unit_draw(s),
                         unit_draw(s) < 0.5 ? mn::NoiseModel::Iterate : mn::NoiseModel::Gradient,
                         0.2 + 1.8 * unit_draw(s)};
        const auto rate = mn::convergence_rate(p, mn::Spectrum::endpoints(1.0, kappa));
        const auto* cert = std::get_if<mn::RateCertificate>(&rate);
        if (cert == nullptr || cert->rho > 0.99) continue;
        ++accepted;
        std::vector<double> eigs{1.0, kappa};
        const int extra = static_cast<int>(unit_draw(s) * 6.0);
        for (int i = 0; i < extra; ++i) eigs.push_back(1.0 + (kappa - 1.0) * unit_draw(s));
        const mn::Spectrum spec(eigs);
        const double a = mn::total_amplification(p, spec).total;
        const double b = mn::lyapunov_oracle(p, spec);
        worst = std::max(worst, std::fabs(a - b) / std::fabs(b));
    }
    ++st.checks;
    std::cout << "discrete oracle agreement: " << accepted
              << " draws, worst rel diff = " << mn::format_full(worst) << "\n";
    if (worst > 1e-10 || st.inject_fault == "oracle-agreement")
        st.mismatches.push_back("oracle-agreement (worst rel diff " + mn::format_full(worst) +
                                ")");

    // inequality catalogue over the family grids
    for (double kappa : {10.0, 100.0, 1000.0}) {
        for (int n : {1, 10, 100}) {
            for (const auto nm : {mn::NoiseModel::Iterate, mn::NoiseModel::Gradient}) {
                const double hb_floor = (std::sqrt(kappa) + 1.0) / 2.0;
                const mn::TsGrid hb_grid{hb_floor, 5.0 * kappa, 20, mn::GridSpacing::Log};
                for (double ts : hb_grid.values()) {
                    const auto pt = mn::hb_like(mn::SettlingTime{ts}, 1.0, kappa, nm);
                    st.take(mn::verify_bounds(pt.params, 1.0, kappa, n));
                    st.take(mn::family_bound_checks(pt, n));
                }
                const mn::TsGrid na_grid{std::sqrt(3.0 * kappa + 1.0) / 2.0, (kappa + 1.0) / 2.0,
                                         20, mn::GridSpacing::Linear};
                for (double ts : na_grid.values()) {
                    const auto pt = mn::na_like(mn::SettlingTime{ts}, 1.0, kappa, nm);
                    st.take(mn::verify_bounds(pt.params, 1.0, kappa, n));
                    st.take(mn::family_bound_checks(pt, n));
                }
            }
        }
    }
}

void verify_continuous(VerifyState& st, int density) {
    // closed forms against the continuous Lyapunov route
    std::uint64_t s = 777;
    double worst = 0.0;
    int accepted = 0;
    while (accepted < 200 * density) {
        const double kappa = 1.5 + 150.0 * unit_draw(s);
        const mn::CTParams p{0.05 + 2.5 * unit_draw(s),
                             (-0.3 + 2.5 * unit_draw(s)) * std::sqrt(kappa), 1.0 / kappa, 1.0};
        const auto pm = mn::ct_coefficients(p, 1.0);
        const auto pL = mn::ct_coefficients(p, kappa);
        if (!mn::ct_stability(pm) || !mn::ct_stability(pL)) continue;
        if (mn::ct_modal_rate(pm) < 1e-3 || mn::ct_modal_rate(pL) < 1e-3) continue;
        ++accepted;
        std::vector<double> eigs{1.0, kappa};
        for (int i = 0; i < 3; ++i) eigs.push_back(1.0 + (kappa - 1.0) * unit_draw(s));
        const mn::Spectrum spec(eigs);
        double closed = 0.0;
        for (double lambda : spec.eigenvalues())
            closed += mn::ct_modal_amplification(mn::ct_coefficients(p, lambda), mn::CTKind::Agd);
        const double oracle = mn::ct_lyapunov_oracle(p, spec, mn::CTKind::Agd);
        worst = std::max(worst, std::fabs(closed - oracle) / std::fabs(oracle));
    }
    ++st.checks;
    std::cout << "continuous oracle agreement: " << accepted
              << " draws, worst rel diff = " << mn::format_full(worst) << "\n";
    if (worst > 1e-10 || st.inject_fault == "ct-oracle-agreement")
        st.mismatches.push_back("ct-oracle-agreement (worst rel diff " + mn::format_full(worst) +
                                ")");

    // optimal-tuning class extremes against the generic evaluation
    double worst_table = 0.0;
    for (double kappa : {4.0, 16.0}) {
        const auto fam = mn::ct_optimal(kappa);
        for (int n : {2, 3}) {
            const auto hb = mn::ct_class_extremes_general(fam.params(0.0, kappa), 1.0, kappa, n,
                                                          mn::CTKind::Agd);
            const auto want = mn::ct_class_extremes(mn::CtOptimalKind::AgdHeavyBall, kappa, n);
            worst_table = std::max(worst_table, std::fabs(hb.jmax - want.jmax) / want.jmax);
            worst_table = std::max(worst_table, std::fabs(hb.jmin - want.jmin) / want.jmin);
        }
    }
    ++st.checks;
    if (worst_table > 1e-12 || st.inject_fault == "ct-optimal-extremes")
        st.mismatches.push_back("ct-optimal-extremes (worst rel diff " +
                                mn::format_full(worst_table) + ")");

    // product floor over a (beta, gamma) sweep and the rate ceiling
    for (double kappa : {4.0, 100.0}) {
        for (int bi = 0; bi <= 10; ++bi) {
            for (int gi = 0; gi <= 10; ++gi) {
                const mn::CTParams p{0.05 + 0.3 * bi, (0.3 * gi) * std::sqrt(kappa), 1.0 / kappa,
                                     1.0};
                const auto pm = mn::ct_coefficients(p, 1.0);
                const auto pL = mn::ct_coefficients(p, kappa);
                if (!mn::ct_stability(pm) || !mn::ct_stability(pL)) continue;
                for (int n : {1, 5}) st.take(mn::ct_verify_bounds(p, 1.0, kappa, n));
            }
        }
        double best = 0.0;
        for (int i = 0; i < 3000 * density; ++i) {
            const mn::CTParams p{3.0 * unit_draw(s), 3.0 * std::sqrt(kappa) * unit_draw(s),
                                 1.0 / kappa, 1.0};
            const auto rate = mn::ct_convergence_rate(p, 1.0, kappa);
            if (const auto* cert = std::get_if<mn::CtCertificate>(&rate))
                best = std::max(best, cert->rho);
        }
        ++st.checks;
        if (best > 1.0 / std::sqrt(kappa) + 1e-9 || st.inject_fault == "ct-rate-ceiling")
            st.violations.push_back("ct-rate-ceiling (kappa " + mn::format_full(kappa) +
                                    ", best " + mn::format_full(best) + ")");
    }
}

int run_verify(Options& opt) {
    if (opt.scope != "discrete" && opt.scope != "continuous" && opt.scope != "all")
        throw std::invalid_argument("unknown --scope: " + opt.scope);
    VerifyState st;
    st.inject_fault = opt.inject_fault;
    if (opt.scope == "discrete" || opt.scope == "all") verify_discrete(st, opt.density);
    if (opt.scope == "continuous" || opt.scope == "all") verify_continuous(st, opt.density);

    std::cout << st.checks << " checks";
    if (st.violations.empty() && st.mismatches.empty()) {
        std::cout << ", all satisfied\n";
        return kExitOk;
    }
    std::cout << "\n";
    for (const auto& v : st.violations) std::cout << "violated bound: " << v << "\n";
    for (const auto& m : st.mismatches) std::cout << "oracle mismatch: " << m << "\n";
    return st.mismatches.empty() ? kExitBoundViolation : kExitOracleMismatch;
}

// --------------------------------------------------------------- simulate --

int run_simulate(Options& opt) {
    ResolvedParams rp = resolve_params(opt);
    const mn::Spectrum spec = cli_spectrum(rp, opt.n);
    mn::SimConfig cfg;
    cfg.steps = opt.steps;
    cfg.burn_in = opt.burn_in;
    cfg.trials = opt.trials;
    cfg.seed = opt.seed;
    const mn::SimResult res = mn::simulate(rp.params, spec, cfg);
    const double analytic = mn::total_amplification(rp.params, spec).total;
    const double z = res.j_standard_error > 0.0
                         ? (res.j_estimate - analytic) / res.j_standard_error
                         : (res.j_estimate == analytic ? 0.0 : INFINITY);

    std::cout << "estimate = " << mn::format_full(res.j_estimate)
              << "  stderr = " << mn::format_full(res.j_standard_error)
              << "  analytic = " << mn::format_full(analytic) << "  z = " << mn::format_full(z)
              << "\n";

    if (!opt.out.empty()) {
        mn::Dataset ds;
        ds.schema = kSimSchema;
        ds.columns = {"family", "noise", "kappa",      "n",        "sigma",      "steps",
                      "trials", "seed",  "j_estimate", "j_stderr", "j_analytic", "z_score"};
        ds.add_row({rp.description, opt.noise, mn::format_full(rp.L / rp.m),
                    std::to_string(opt.n), mn::format_full(opt.sigma), std::to_string(opt.steps),
                    std::to_string(opt.trials), std::to_string(opt.seed),
                    mn::format_full(res.j_estimate), mn::format_full(res.j_standard_error),
                    mn::format_full(analytic), mn::format_full(z)});
        mn::write_dataset_file(ds, opt.out, opt.format);
    }
    return kExitOk;
}

// ------------------------------------------------------------- continuous --

int run_continuous(Options& opt) {
    resolve_range(opt);
    const double m = *opt.m;
    const double L = *opt.L;
    const double kappa = L / m;

    mn::CTParams params{};
    std::string label;
    if (opt.ct_beta || opt.ct_gamma) {
        params = mn::CTParams{1.0 - opt.ct_beta.value_or(0.0), opt.ct_gamma.value_or(0.0),
                              1.0 / L, opt.sigma};
        label = "custom";
    } else {
        if (opt.kind == "gfd") {
            params = mn::CTParams{0.0, 0.0, 1.0 / L, opt.sigma};
            label = "gfd";
        } else {
            const auto fam = mn::ct_optimal(kappa);
            if (opt.kind == "agd-hb") {
                params = fam.params(0.0, L, opt.sigma);
                label = "agd-hb";
            } else if (opt.kind == "agd-na") {
                params = fam.params(fam.nesterov_v(), L, opt.sigma);
                label = "agd-na";
            } else {
                throw std::invalid_argument("unknown --kind: " + opt.kind);
            }
        }
    }

    if (label == "gfd") {
        const double rate = params.alpha * m;
        const auto ext = mn::ct_class_extremes_general(params, m, L, opt.n, mn::CTKind::Gfd);
        std::cout << "kind = gfd\nrho = " << mn::format_full(rate)
                  << "\nsettling_time = " << mn::format_full(1.0 / rate) << "\n"
                  << "jmax = " << mn::format_full(ext.jmax)
                  << "  jmin = " << mn::format_full(ext.jmin) << "\n";
        return kExitOk;
    }

    const auto rate = mn::ct_convergence_rate(params, m, L);
    if (!std::holds_alternative<mn::CtCertificate>(rate)) {
        std::cout << "not Hurwitz on [m, L]\n";
        return kExitUnstable;
    }
    const auto& cert = std::get<mn::CtCertificate>(rate);
    const auto ext = mn::ct_class_extremes_general(params, m, L, opt.n, mn::CTKind::Agd);
    std::cout << "kind = " << label << "\n"
              << "theta = " << mn::format_full(params.theta)
              << "  gamma = " << mn::format_full(params.gamma)
              << "  alpha = " << mn::format_full(params.alpha) << "\n"
              << "rho = " << mn::format_full(cert.rho)
              << "\nsettling_time = " << mn::format_full(cert.settling_time) << "\n"
              << "jmax = " << mn::format_full(ext.jmax)
              << "  jmin = " << mn::format_full(ext.jmin) << "\n";
    bool ok = true;
    for (const auto& c : mn::ct_verify_bounds(params, m, L, opt.n)) {
        print_check(c);
        ok = ok && c.satisfied;
    }
    return ok ? kExitOk : kExitBoundViolation;
}

// ------------------------------------------------------------------- main --

void add_common_flags(CLI::App* sub, Options& opt) {
    sub->add_option("--kappa", opt.kappa, "condition number (uses m = 1, L = kappa)")
        ->envname(env_name("kappa"));
    sub->add_option("--m", opt.m, "smallest Hessian eigenvalue")->envname(env_name("m"));
    sub->add_option("--L", opt.L, "largest Hessian eigenvalue")->envname(env_name("L"));
    sub->add_option("--n", opt.n, "problem dimension")->envname(env_name("n"));
    sub->add_option("--noise", opt.noise, "noise model: iterate|gradient")
        ->envname(env_name("noise"));
    sub->add_option("--sigma", opt.sigma, "base noise magnitude")->envname(env_name("sigma"));
    sub->add_option("--config", opt.config_path, "config file (key = value with [grid] block)")
        ->envname(env_name("config"));
    sub->add_option("--family", opt.family, "gd|hb|na|hb-like|na-like|gd-reduced|hb-reduced")
        ->envname(env_name("family"));
    sub->add_option("--ts", opt.ts, "target settling time")->envname(env_name("ts"));
    sub->add_option("--rho", opt.rho, "target convergence rate")->envname(env_name("rho"));
    sub->add_option("--c", opt.c, "interpolation scalar (gd-reduced)")->envname(env_name("c"));
    sub->add_option("--alpha", opt.alpha, "explicit stepsize")->envname(env_name("alpha"));
    sub->add_option("--beta", opt.beta, "explicit momentum")->envname(env_name("beta"));
    sub->add_option("--gamma", opt.gamma, "explicit extrapolation")->envname(env_name("gamma"));
}

void add_output_flags(CLI::App* sub, Options& opt) {
    sub->add_option("--out", opt.out, "output file path")->envname(env_name("out"));
    sub->add_option("--format", opt.format, "csv|jsonl")->envname(env_name("format"));
}

int dispatch(const std::string& command, Options& opt) {
    if (command == "rate") return run_rate(opt);
    if (command == "amplify") return run_amplify(opt);
    if (command == "sweep") return run_sweep(opt);
    if (command == "verify") return run_verify(opt);
    if (command == "simulate") return run_simulate(opt);
    if (command == "continuous") return run_continuous(opt);
    throw std::invalid_argument("unknown command: " + command);
}

int parse_and_run(std::vector<std::string> args) {
    Options opt;
    CLI::App app{"noise-amplification and convergence-rate analysis of noisy two-step "
                 "momentum methods on strongly convex quadratics"};
    app.require_subcommand(1);

    auto* rate = app.add_subcommand("rate", "convergence-rate certificate");
    add_common_flags(rate, opt);
    rate->add_flag("--grid-check", opt.grid_check, "cross-check the rate on a dense grid");

    auto* amplify = app.add_subcommand("amplify", "noise-amplification report");
    add_common_flags(amplify, opt);
    add_output_flags(amplify, opt);

    auto* sweep = app.add_subcommand("sweep", "settling-time tradeoff curves");
    add_common_flags(sweep, opt);
    add_output_flags(sweep, opt);
    sweep->add_option("--grid", opt.grid_spec, "settling-time grid min:max:points[:linear|log]")
        ->envname(env_name("grid"));
    sweep->add_option("--grid-min", opt.grid_min, "grid lower end");
    sweep->add_option("--grid-max", opt.grid_max, "grid upper end");
    sweep->add_option("--grid-points", opt.grid_points, "grid point count");
    sweep->add_option("--grid-spacing", opt.grid_spacing, "linear|log");

    auto* verify = app.add_subcommand("verify", "run the bound and oracle suites");
    verify->add_option("--scope", opt.scope, "discrete|continuous|all")
        ->envname(env_name("scope"));
    verify->add_option("--density", opt.density, "work multiplier")->envname(env_name("density"));
    verify
        ->add_option("--inject-fault", opt.inject_fault,
                     "force the named bound to fail (harness self-test)")
        ->group("");  // hidden
    verify->add_option("--config", opt.config_path, "config file");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of J");
    add_common_flags(simulate, opt);
    add_output_flags(simulate, opt);
    simulate->add_option("--steps", opt.steps, "steps per trial")->envname(env_name("steps"));
    simulate->add_option("--trials", opt.trials, "independent trials")
        ->envname(env_name("trials"));
    simulate->add_option("--burn-in", opt.burn_in, "burn-in steps (-1 = auto)")
        ->envname(env_name("burn-in"));
    simulate->add_option("--seed", opt.seed, "PRNG seed")->envname(env_name("seed"));

    auto* continuous = app.add_subcommand("continuous", "gradient-flow analysis");
    continuous->add_option("--kappa", opt.kappa)->envname(env_name("kappa"));
    continuous->add_option("--m", opt.m);
    continuous->add_option("--L", opt.L);
    continuous->add_option("--n", opt.n)->envname(env_name("n"));
    continuous->add_option("--sigma", opt.sigma);
    continuous->add_option("--kind", opt.kind, "gfd|agd-hb|agd-na")->envname(env_name("kind"));
    continuous->add_option("--beta", opt.ct_beta, "custom flow momentum");
    continuous->add_option("--gamma", opt.ct_gamma, "custom flow extrapolation");
    continuous->add_option("--config", opt.config_path, "config file");

    for (auto* sub : app.get_subcommands({}))
        for (auto& o : sub->get_options()) o->take_last();

    std::vector<const char*> argv;
    argv.push_back("momnoise");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), const_cast<char**>(argv.data()));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    const std::string command = app.get_subcommands().front()->get_name();

    if (!opt.config_path.empty()) {
        // re-parse with config-derived tokens first so explicit flags win
        std::vector<std::string> merged = config_tokens(opt.config_path);
        merged.insert(merged.begin(), command);
        bool skip_next = false;
        for (size_t i = 1; i < args.size(); ++i) {  // args[0] is the command
            if (skip_next) {
                skip_next = false;
                continue;
            }
            if (args[i] == "--config") {
                skip_next = true;
                continue;
            }
            if (args[i].rfind("--config=", 0) == 0) continue;
            merged.push_back(args[i]);
        }
        return parse_and_run(std::move(merged));
    }

    return dispatch(command, opt);
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return parse_and_run(std::move(args));
    } catch (const mn::UnstableError& e) {
        std::cerr << "unstable: " << e.what() << "\n";
        return kExitUnstable;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}
