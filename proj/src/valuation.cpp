#include "landval/valuation.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "landval/errors.hpp"

namespace landval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kKinkTol = 1e-12;

struct BasePoint {
    int state = -1;
    double log_z = 0.0;  // log(A_H/A_X)
    double log_w = 0.0;
    double log_p = 0.0;
};

BasePoint base_from_logs(const ProductionModel& m, double beta, double log_a_h, double log_a_x,
                         int state) {
    LogMarginals lm = log_marginals(m, {log_a_h, log_a_x});
    BasePoint b;
    b.state = state;
    b.log_z = log_a_h - log_a_x;
    b.log_w = lm.log_fh + log_a_h;
    b.log_p = std::log(beta) + b.log_w;
    return b;
}

// log D_T along one path: D_T = prod_{j=1..T} (1 + y_j/beta)^(-1) with
// y_j = r_j/w_j. Compensated so the drift against the closed-form bound for
// constant-share models stays at a few ulps regardless of T.
double accumulate_log_d(const ProductionModel& m, const ProductivityPath& path, double log_beta) {
    CompensatedSum acc;
    for (std::size_t j = 1; j < path.records.size(); ++j) {
        const PathRecord& rec = path.records[j];
        LogMarginals lm = log_marginals(m, {rec.log_a_h, rec.log_a_x});
        double log_y = (lm.log_fx + rec.log_a_x) - (lm.log_fh + rec.log_a_h);
        acc.add(-log1pexp(log_y - log_beta));
    }
    return acc.value();
}

double log_mrs_at(const ProductionModel& m, double la) {
    LogMarginals lm = log_marginals(m, {la, 0.0});
    return lm.log_fx - lm.log_fh;
}

// Infimum of sigma_F over the ray {(h, 1): h >= exp(la)}. For every supported
// technology sigma_F is nondecreasing along that ray, so the infimum sits at
// the threshold itself. A two-sector ray that still crosses the regime kink
// keeps a sigma = 1 stretch, which blocks any geometric certificate.
Elasticity sigma_ray_infimum(const ProductionModel& m, double la) {
    switch (m.kind()) {
        case TechKind::cobb_douglas: return Elasticity::finite(1.0);
        case TechKind::ces:
        case TechKind::urban:
            if (m.is_cobb_douglas_like()) return Elasticity::finite(1.0);
            return elasticity_of_substitution_log(m, {la, 0.0});
        case TechKind::two_sector: {
            const auto& q = m.two_sector_params();
            double gap = std::log(q.alpha * q.a1 / q.a2) - (1.0 - q.alpha) * la;
            if (gap < -kKinkTol) return Elasticity::inf();
            return Elasticity::finite(1.0);
        }
    }
    fail(errc::internal, "unknown production kind");
}

void validate_config(const ValuationConfig& cfg) {
    if (cfg.horizon < 1) fail(errc::domain, "valuation horizon must be at least 1");
    if (cfg.n_paths < 1) fail(errc::domain, "n_paths must be at least 1");
    if (!(cfg.tail_tolerance > 0.0)) fail(errc::domain, "tail tolerance must be positive");
    if (cfg.hard_cap < 1) fail(errc::domain, "term cap must be at least 1");
}

long term_cap(const ValuationConfig& cfg) {
    return std::min(std::max(cfg.hard_cap, 1L), 2000000000L);
}

double threshold_log(const ValuationConfig& cfg, double log_z) {
    return cfg.mrt_threshold > 0.0 ? std::log(cfg.mrt_threshold) : std::max(0.0, log_z);
}

std::uint64_t seed_at(std::uint64_t seed, int t) {
    return derive_seed(seed, static_cast<std::uint64_t>(t));
}

std::vector<double> run_engine(const ProductionModel& m, const Process& cont, long horizon,
                               long n_paths, std::uint64_t seed_t, double log_beta,
                               int parallelism) {
    std::vector<double> d(static_cast<std::size_t>(n_paths));
    auto chunk = [&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            ProductivityPath p = sample_path(cont, static_cast<int>(horizon),
                                             derive_seed(seed_t, static_cast<std::uint64_t>(i)));
            d[static_cast<std::size_t>(i)] = std::exp(accumulate_log_d(m, p, log_beta));
        }
    };
    int workers = std::clamp(parallelism, 1, 128);
    if (workers > n_paths) workers = static_cast<int>(n_paths);
    if (workers == 1) {
        chunk(0, n_paths);
        return d;
    }
    // Path i is a pure function of (seed_t, i), so chunk boundaries cannot
    // change any output byte.
    std::exception_ptr first_error;
    std::mutex mu;
    long per = (n_paths + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int k = 0; k < workers; ++k) {
        long lo = k * per;
        long hi = std::min(n_paths, lo + per);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                chunk(lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return d;
}

struct CdPlan {
    long horizon = 0;
    double log_kappa = 0.0;
    double bound_rel = 0.0;
    bool capped = false;
};

// Constant-share models discount every period by the same factor
// kappa = beta*alpha/(beta*alpha + 1 - alpha), so the remaining tail after T
// terms is exactly P * kappa^T.
CdPlan plan_cd(const ProductionModel& m, double log_beta, const ValuationConfig& cfg) {
    CdPlan plan;
    double alpha_eff = m.effective_alpha();
    double log_y = std::log(1.0 - alpha_eff) - std::log(alpha_eff);
    plan.log_kappa = -log1pexp(log_y - log_beta);
    long cap = term_cap(cfg);
    double log_tol = std::log(cfg.tail_tolerance);
    plan.horizon = std::max(cfg.horizon, 1L);
    if (plan.horizon * plan.log_kappa > log_tol) {
        long need = static_cast<long>(std::ceil(log_tol / plan.log_kappa));
        plan.horizon = std::max(plan.horizon, need);
    }
    while (plan.horizon * plan.log_kappa > log_tol && plan.horizon < cap) ++plan.horizon;
    plan.horizon = std::min(plan.horizon, cap);
    plan.bound_rel = std::exp(plan.horizon * plan.log_kappa);
    plan.capped = plan.bound_rel > cfg.tail_tolerance;
    return plan;
}

ValuationResult assemble(int t, const BasePoint& base, const std::vector<double>& d, long horizon,
                         double bound_rel, bool certified, CertificateRoute route,
                         std::string note) {
    MeanSe ms = mean_and_se(d);
    ValuationResult out;
    out.t = t;
    out.log_p = base.log_p;
    out.d_mean = ms.mean;
    out.se_rel = ms.se;
    out.bound_rel = bound_rel;
    out.terms = horizon;
    out.certified = certified;
    out.route = route;
    out.note = std::move(note);
    return out;
}

}  // namespace

const char* route_name(CertificateRoute r) {
    switch (r) {
        case CertificateRoute::cd_exact: return "cd_exact";
        case CertificateRoute::mrt_geometric: return "mrt_geometric";
        case CertificateRoute::markov_spectral: return "markov_spectral";
        case CertificateRoute::none: return "none";
    }
    return "none";
}

ValuationResult fundamental_value_deterministic(const ProductionModel& m,
                                                const DeterministicExponential& proc, double beta,
                                                int t, const ValuationConfig& cfg) {
    if (!(beta > 0.0 && beta < 1.0)) fail(errc::domain, "beta must lie in (0, 1)");
    if (t < 0) fail(errc::domain, "valuation period must be nonnegative");
    validate_config(cfg);
    if (!(proc.g_h > 0.0 && proc.g_x > 0.0 && proc.a_h0 > 0.0 && proc.a_x0 > 0.0))
        fail(errc::domain, "deterministic process fields must all be positive");

    double log_gh = std::log(proc.g_h);
    double log_gx = std::log(proc.g_x);
    double log_a_h = std::log(proc.a_h0) + t * log_gh;
    double log_a_x = std::log(proc.a_x0) + t * log_gx;
    BasePoint base = base_from_logs(m, beta, log_a_h, log_a_x, -1);
    double log_beta = std::log(beta);
    long cap = term_cap(cfg);

    auto engine_single = [&](long horizon) {
        // Continuation path built directly in logs; linear initial levels at
        // period t may already be outside double range.
        ProductivityPath path;
        path.markov = false;
        path.records.resize(static_cast<std::size_t>(horizon) + 1);
        for (long j = 0; j <= horizon; ++j) {
            PathRecord& rec = path.records[static_cast<std::size_t>(j)];
            rec.t = static_cast<int>(j);
            rec.state = -1;
            rec.log_a_h = log_a_h + j * log_gh;
            rec.log_a_x = log_a_x + j * log_gx;
        }
        return std::exp(accumulate_log_d(m, path, log_beta));
    };

    if (m.is_cobb_douglas_like()) {
        CdPlan plan = plan_cd(m, log_beta, cfg);
        std::vector<double> d{engine_single(plan.horizon)};
        return assemble(t, base, d, plan.horizon, plan.bound_rel, true, CertificateRoute::cd_exact,
                        plan.capped ? "term cap reached before tail tolerance" : "");
    }

    double la = threshold_log(cfg, base.log_z);
    Elasticity sigma_lb = sigma_ray_infimum(m, la);
    double log_g = log_gh - log_gx;
    if (!((sigma_lb.infinite || sigma_lb.value > 1.0) && log_g > 0.0)) {
        double d = engine_single(std::max(cfg.horizon, 1L));
        char buf[192];
        std::snprintf(buf, sizeof buf,
                      "no tail certificate: series not provably convergent "
                      "(sigma_F >= %.6g on the ray, ratio growth %.6g); partial V = %.17g at T = %ld",
                      sigma_lb.infinite ? kInf : sigma_lb.value, std::exp(log_g),
                      std::exp(base.log_p) * (1.0 - d), std::max(cfg.horizon, 1L));
        fail(errc::no_certificate, buf);
    }

    double rho = sigma_lb.rho();
    double log_q = (rho - 1.0) * log_g;  // < 0 here
    double log_q_geo = log_q - std::log(-std::expm1(log_q));
    double base_term =
        log_mrs_at(m, la) - rho * la + (rho - 1.0) * base.log_z - log_beta + log_q_geo;
    double log_tol = std::log(cfg.tail_tolerance);
    long horizon = std::max(cfg.horizon, 1L);
    if (base.log_z < la)  // the bound needs A_{t+s} >= A for every tail period
        horizon = std::max(horizon, static_cast<long>(std::ceil((la - base.log_z) / log_g)));
    if (base_term + log_q * horizon > log_tol) {
        long need = static_cast<long>(std::ceil((log_tol - base_term) / log_q));
        horizon = std::max(horizon, need);
    }
    while (base_term + log_q * horizon > log_tol && horizon < cap) ++horizon;
    horizon = std::min(horizon, cap);
    double bound_rel = std::exp(base_term + log_q * horizon);
    std::vector<double> d{engine_single(horizon)};
    return assemble(t, base, d, horizon, bound_rel, true, CertificateRoute::mrt_geometric,
                    bound_rel > cfg.tail_tolerance ? "term cap reached before tail tolerance" : "");
}

ValuationResult fundamental_value_mc(const ProductionModel& m, const MarkovMultiplicative& proc,
                                     double beta, const ProductivityPath& base_path, int t,
                                     const ValuationConfig& cfg) {
    if (!(beta > 0.0 && beta < 1.0)) fail(errc::domain, "beta must lie in (0, 1)");
    validate_config(cfg);
    proc.validate();
    if (!base_path.markov) fail(errc::domain, "Monte Carlo valuation needs a Markov base path");
    if (t < 0 || static_cast<std::size_t>(t) >= base_path.records.size())
        fail(errc::domain, "valuation period lies outside the base path");

    const PathRecord& rec = base_path.records[static_cast<std::size_t>(t)];
    BasePoint base = base_from_logs(m, beta, rec.log_a_h, rec.log_a_x, rec.state);
    double log_beta = std::log(beta);
    long cap = term_cap(cfg);
    std::uint64_t seed_t = seed_at(cfg.seed, t);

    MarkovMultiplicative cont = proc;
    cont.n0 = base.state;
    cont.a0 = std::exp(base.log_z);
    if (!(cont.a0 > 0.0) || !std::isfinite(cont.a0))
        fail(errc::numeric, "relative productivity at t left the double range");
    Process cont_proc{cont};

    if (m.is_cobb_douglas_like()) {
        // D_T is path-independent for constant shares: one sampled path
        // exercises the full engine; replication would add identical values.
        CdPlan plan = plan_cd(m, log_beta, cfg);
        std::vector<double> d =
            run_engine(m, cont_proc, plan.horizon, 1, seed_t, log_beta, 1);
        return assemble(t, base, d, plan.horizon, plan.bound_rel, true, CertificateRoute::cd_exact,
                        plan.capped ? "term cap reached before tail tolerance" : "");
    }

    bool spectral_applicable = m.kind() == TechKind::ces && m.ces_params().sigma > 1.0;
    if (!spectral_applicable) {
        long horizon = std::max(cfg.horizon, 1L);
        std::vector<double> d =
            run_engine(m, cont_proc, horizon, cfg.n_paths, seed_t, log_beta, cfg.parallelism);
        return assemble(t, base, d, horizon, kInf, false, CertificateRoute::none,
                        "no tail certificate for this technology under Markov growth");
    }

    double sigma = m.ces_params().sigma;
    std::vector<double> k = k_matrix(proc, sigma);
    double radius = spectral_radius(k, proc.n);
    if (radius >= 1.0) {
        long horizon = std::max(cfg.horizon, 1L);
        std::vector<double> d =
            run_engine(m, cont_proc, horizon, cfg.n_paths, seed_t, log_beta, cfg.parallelism);
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "spectral radius %.8f is not below 1: condition fails, no tail certificate",
                      radius);
        return assemble(t, base, d, horizon, kInf, false, CertificateRoute::none, buf);
    }

    SVector s = solve_s(k, proc.n);
    double la = threshold_log(cfg, base.log_z);
    double rho = 1.0 / sigma;
    double base_term = log_mrs_at(m, la) - rho * la + (rho - 1.0) * base.log_z - log_beta;
    double log_tol = std::log(cfg.tail_tolerance);
    std::size_t un = static_cast<std::size_t>(proc.n);
    std::size_t state = static_cast<std::size_t>(base.state);

    // Walk u = K^T s forward until the bound meets the tolerance; entries of
    // K^T s decrease in T, so the first crossing is the minimal extension.
    std::vector<double> u = s.s;
    std::vector<double> ku(un);
    long horizon = 0;
    double log_u_state = 0.0;
    for (;;) {
        for (std::size_t i = 0; i < un; ++i) {
            CompensatedSum row;
            for (std::size_t j = 0; j < un; ++j) row.add(k[i * un + j] * u[j]);
            ku[i] = row.value();
        }
        u = ku;
        ++horizon;
        log_u_state = std::log(u[state]);
        if (horizon >= std::max(cfg.horizon, 1L) &&
            (base_term + log_u_state <= log_tol || horizon >= cap))
            break;
    }
    double bound_rel = std::exp(base_term + log_u_state);
    std::vector<double> d =
        run_engine(m, cont_proc, horizon, cfg.n_paths, seed_t, log_beta, cfg.parallelism);
    return assemble(t, base, d, horizon, bound_rel, true, CertificateRoute::markov_spectral,
                    bound_rel > cfg.tail_tolerance ? "term cap reached before tail tolerance" : "");
}

BubbleVerdict bubble_decompose_exact(double p, double b, double se, double tail_bound,
                                     double band) {
    if (!(se >= 0.0) || !(tail_bound >= 0.0))
        fail(errc::domain, "standard error and tail bound must be nonnegative");
    // Cushion so comparisons between mathematically tied quantities cannot
    // flip on accumulated last-ulp differences.
    double cushion = 64.0 * DBL_EPSILON * std::abs(p);
    BubbleVerdict out;
    out.b = b;
    if (b > band * se + tail_bound + cushion)
        out.verdict = "overvalued";
    else if (std::abs(b) <= tail_bound + cushion)
        out.verdict = "fundamental";
    else
        out.verdict = "inconclusive";
    return out;
}

BubbleVerdict bubble_decompose(double p, double v, double se, double tail_bound, double band) {
    return bubble_decompose_exact(p, p - v, se, tail_bound, band);
}

VpSeries vp_ratio_series(const EquilibriumPath& path, const std::vector<ValuationResult>& vals) {
    VpSeries out;
    for (const ValuationResult& v : vals) {
        const EquilibriumPoint* pt = nullptr;
        if (v.t >= 0 && static_cast<std::size_t>(v.t) < path.points.size() &&
            path.points[static_cast<std::size_t>(v.t)].t == v.t)
            pt = &path.points[static_cast<std::size_t>(v.t)];
        else
            for (const EquilibriumPoint& cand : path.points)
                if (cand.t == v.t) pt = &cand;
        if (pt == nullptr) fail(errc::domain, "valuation period missing from equilibrium path");
        out.t.push_back(v.t);
        out.v_over_p.push_back(v.v_over_p());
        out.price_rent.push_back(std::exp(pt->log_p - pt->log_r));
    }
    std::size_t n = path.points.size();
    if (n >= 2) {
        double mean_t = 0.0;
        double mean_y = 0.0;
        for (const EquilibriumPoint& pt : path.points) {
            mean_t += pt.t;
            mean_y += pt.log_p - pt.log_r;
        }
        mean_t /= static_cast<double>(n);
        mean_y /= static_cast<double>(n);
        CompensatedSum num;
        CompensatedSum den;
        for (const EquilibriumPoint& pt : path.points) {
            double dt = pt.t - mean_t;
            num.add(dt * (pt.log_p - pt.log_r - mean_y));
            den.add(dt * dt);
        }
        out.log_price_rent_slope = num.value() / den.value();
    }
    return out;
}

std::vector<ContinuationStats> continuation_statistics(const ProductionModel& m,
                                                       const MarkovMultiplicative& proc,
                                                       double beta,
                                                       const ProductivityPath& base_path, int t,
                                                       long horizon, long n_paths,
                                                       std::uint64_t seed) {
    if (!(beta > 0.0 && beta < 1.0)) fail(errc::domain, "beta must lie in (0, 1)");
    proc.validate();
    if (!base_path.markov) fail(errc::domain, "continuation statistics need a Markov base path");
    if (t < 0 || static_cast<std::size_t>(t) >= base_path.records.size())
        fail(errc::domain, "valuation period lies outside the base path");
    if (horizon < 1 || n_paths < 1) fail(errc::domain, "horizon and n_paths must be positive");

    const PathRecord& rec = base_path.records[static_cast<std::size_t>(t)];
    BasePoint base = base_from_logs(m, beta, rec.log_a_h, rec.log_a_x, rec.state);
    double log_beta = std::log(beta);
    double w_t = std::exp(base.log_w);

    MarkovMultiplicative cont = proc;
    cont.n0 = base.state;
    cont.a0 = std::exp(base.log_z);
    Process cont_proc{cont};
    std::uint64_t seed_t = seed_at(seed, t);

    std::vector<ContinuationStats> out(static_cast<std::size_t>(n_paths));
    for (long i = 0; i < n_paths; ++i) {
        ProductivityPath path = sample_path(cont_proc, static_cast<int>(horizon),
                                            derive_seed(seed_t, static_cast<std::uint64_t>(i)));
        CompensatedSum log_d;
        CompensatedSum v_sum;
        CompensatedSum ub_sum;
        for (long j = 1; j <= horizon; ++j) {
            const PathRecord& r = path.records[static_cast<std::size_t>(j)];
            LogMarginals lm = log_marginals(m, {r.log_a_h, r.log_a_x});
            double log_y = (lm.log_fx + r.log_a_x) - (lm.log_fh + r.log_a_h);
            log_d.add(-log1pexp(log_y - log_beta));
            double y = std::exp(log_y);
            v_sum.add(y * std::exp(log_d.value()));
            ub_sum.add(y);
        }
        ContinuationStats& cs = out[static_cast<std::size_t>(i)];
        cs.d_final = std::exp(log_d.value());
        cs.v_path = w_t * v_sum.value();
        cs.v_ub_path = w_t * ub_sum.value();
    }
    return out;
}

}  // namespace landval
