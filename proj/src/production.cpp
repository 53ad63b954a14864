#include "landval/production.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "landval/errors.hpp"

namespace landval {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSigmaOneTol = 1e-9;   // |sigma - 1| below this routes to Cobb-Douglas
constexpr double kKinkTol = 1e-12;      // log-space distance treated as "on the kink"
constexpr double kBoundSlack = 1e-12;   // FP slack when comparing bound sides

[[noreturn]] void fail_param(const char* name, const char* what, double got) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s must %s, got %g", name, what, got);
    fail(errc::domain, buf);
}

void require_unit_interval(double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) fail_param(name, "lie in (0, 1)", v);
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail_param(name, "be positive and finite", v);
}

void require_point(LogFactorPoint p) {
    if (!std::isfinite(p.lh) || !std::isfinite(p.lx))
        fail(errc::domain, "factor point must be strictly positive and finite");
}

bool sigma_is_one(double sigma) { return std::abs(sigma - 1.0) <= kSigmaOneTol; }

// Shared CES core in logs: value, both marginals, and the factor shares.
// Also used for the urban inner aggregate. The shares are kept as logs so a
// vanishing share (extreme factor ratios) stays representable.
struct CesLog {
    double log_f = 0.0;
    double log_fu = 0.0;
    double log_fv = 0.0;
    double log_su = 0.0;  // log(u F_u / F)
    double log_sv = 0.0;  // log(v F_v / F)
};

CesLog ces_log(double alpha, double sigma, double lu, double lv) {
    CesLog out;
    if (sigma_is_one(sigma)) {
        out.log_f = alpha * lu + (1.0 - alpha) * lv;
        out.log_fu = std::log(alpha) + out.log_f - lu;
        out.log_fv = std::log(1.0 - alpha) + out.log_f - lv;
        out.log_su = std::log(alpha);
        out.log_sv = std::log(1.0 - alpha);
        return out;
    }
    double p = 1.0 - 1.0 / sigma;
    double la = std::log(alpha) + p * lu;
    double lb = std::log(1.0 - alpha) + p * lv;
    double lsum = logsumexp2(la, lb);
    out.log_f = lsum / p;
    out.log_fu = std::log(alpha) + (p - 1.0) * lu + (1.0 - p) * out.log_f;
    out.log_fv = std::log(1.0 - alpha) + (p - 1.0) * lv + (1.0 - p) * out.log_f;
    out.log_su = la - lsum;
    out.log_sv = lb - lsum;
    return out;
}

// log F_uv for the CES core: F_uv = rho * F_u * F_v / F with rho = 1/sigma.
// The sigma = 1 branch uses the same sum-of-logs pieces as ces_log so the
// elasticity identity F_H F_X / (F F_HX) cancels to exactly 1.
double ces_log_cross(double alpha, double sigma, double lu, double lv, const CesLog& c) {
    if (sigma_is_one(sigma))
        return std::log(alpha) + std::log(1.0 - alpha) + c.log_f - lu - lv;
    return std::log(1.0 / sigma) + c.log_fu + c.log_fv - c.log_f;
}

// Urban technology in logs: Y = A3 ((1-theta) H)^alpha * E(A1 theta H, A2 X)^(1-alpha),
// inner E a CES aggregate. Marginals follow from the inner shares:
//   Y_H = (Y/H) (alpha + (1-alpha) s_u),   Y_X = (Y/X) (1-alpha) s_v,
//   Y_HX = (Y/(H X)) (1-alpha) s_v (alpha (1-s_u) + rho_E s_u).
struct UrbanLog {
    CesLog inner;
    double log_y = 0.0;
    double log_yh = 0.0;
    double log_yx = 0.0;
    double log_cross = 0.0;
};

UrbanLog urban_log(const UrbanParams& q, double lh, double lx) {
    double lu = std::log(q.a1 * q.theta) + lh;
    double lv = std::log(q.a2) + lx;
    UrbanLog out;
    out.inner = ces_log(q.alpha_e, q.sigma_e, lu, lv);
    double su = std::exp(out.inner.log_su);
    double rho_e = sigma_is_one(q.sigma_e) ? 1.0 : 1.0 / q.sigma_e;
    double c = std::log(q.a3) + q.alpha * std::log(1.0 - q.theta);
    out.log_y = c + q.alpha * lh + (1.0 - q.alpha) * out.inner.log_f;
    out.log_yh = out.log_y - lh + std::log(q.alpha + (1.0 - q.alpha) * su);
    out.log_yx = out.log_y - lx + std::log(1.0 - q.alpha) + out.inner.log_sv;
    out.log_cross = out.log_y - lh - lx + std::log(1.0 - q.alpha) + out.inner.log_sv +
                    std::log(q.alpha * (1.0 - su) + rho_e * su);
    return out;
}

// Two-sector regime indicator in logs: positive selects the Cobb-Douglas
// branch (all labor in sector 1), negative the linear branch.
double two_sector_gap(const TwoSectorParams& q, double lh, double lx) {
    return std::log(q.alpha * q.a1 / q.a2) - (1.0 - q.alpha) * (lh - lx);
}

double two_sector_log_kappa(const TwoSectorParams& q) {
    return std::log(1.0 - q.alpha) +
           (q.alpha * std::log(q.alpha) + std::log(q.a1) - q.alpha * std::log(q.a2)) /
               (1.0 - q.alpha);
}

[[noreturn]] void fail_kink(double gap) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "factor point lies on the two-sector regime boundary (log gap %.3e)", gap);
    fail(errc::kink, buf);
}

}  // namespace

ProductionModel ProductionModel::ces(double alpha, double sigma) {
    require_unit_interval(alpha, "alpha");
    require_positive(sigma, "sigma");
    ProductionModel m;
    m.kind_ = TechKind::ces;
    m.ces_ = CESParams{alpha, sigma};
    return m;
}

ProductionModel ProductionModel::cobb_douglas(double alpha) {
    require_unit_interval(alpha, "alpha");
    ProductionModel m;
    m.kind_ = TechKind::cobb_douglas;
    m.ces_ = CESParams{alpha, 1.0};
    return m;
}

ProductionModel ProductionModel::two_sector(double alpha, double a1, double a2) {
    require_unit_interval(alpha, "alpha");
    require_positive(a1, "A1");
    require_positive(a2, "A2");
    ProductionModel m;
    m.kind_ = TechKind::two_sector;
    m.ts_ = TwoSectorParams{alpha, a1, a2};
    return m;
}

ProductionModel ProductionModel::urban(const UrbanParams& p) {
    require_unit_interval(p.alpha, "alpha");
    require_unit_interval(p.theta, "theta");
    require_unit_interval(p.alpha_e, "alphaE");
    require_positive(p.sigma_e, "sigmaE");
    require_positive(p.a1, "A1");
    require_positive(p.a2, "A2");
    require_positive(p.a3, "A3");
    ProductionModel m;
    m.kind_ = TechKind::urban;
    m.urban_ = p;
    return m;
}

bool ProductionModel::is_cobb_douglas_like() const {
    switch (kind_) {
        case TechKind::cobb_douglas: return true;
        case TechKind::ces: return sigma_is_one(ces_.sigma);
        case TechKind::urban: return sigma_is_one(urban_.sigma_e);
        case TechKind::two_sector: return false;
    }
    return false;
}

double ProductionModel::effective_alpha() const {
    switch (kind_) {
        case TechKind::cobb_douglas:
        case TechKind::ces: return ces_.alpha;
        case TechKind::urban: return urban_.alpha + (1.0 - urban_.alpha) * urban_.alpha_e;
        case TechKind::two_sector: break;
    }
    fail(errc::internal, "effective_alpha requested for a model without constant shares");
}

double log_evaluate(const ProductionModel& m, LogFactorPoint p) {
    require_point(p);
    switch (m.kind()) {
        case TechKind::cobb_douglas:
        case TechKind::ces: {
            const auto& q = m.ces_params();
            return ces_log(q.alpha, q.sigma, p.lh, p.lx).log_f;
        }
        case TechKind::urban: return urban_log(m.urban_params(), p.lh, p.lx).log_y;
        case TechKind::two_sector: {
            const auto& q = m.two_sector_params();
            double gap = two_sector_gap(q, p.lh, p.lx);
            if (gap >= 0.0)
                return std::log(q.a1) + q.alpha * p.lh + (1.0 - q.alpha) * p.lx;
            return logsumexp2(std::log(q.a2) + p.lh, two_sector_log_kappa(q) + p.lx);
        }
    }
    fail(errc::internal, "unknown production kind");
}

LogMarginals log_marginals(const ProductionModel& m, LogFactorPoint p) {
    require_point(p);
    switch (m.kind()) {
        case TechKind::cobb_douglas:
        case TechKind::ces: {
            const auto& q = m.ces_params();
            CesLog c = ces_log(q.alpha, q.sigma, p.lh, p.lx);
            return {c.log_fu, c.log_fv};
        }
        case TechKind::urban: {
            UrbanLog u = urban_log(m.urban_params(), p.lh, p.lx);
            return {u.log_yh, u.log_yx};
        }
        case TechKind::two_sector: {
            const auto& q = m.two_sector_params();
            double gap = two_sector_gap(q, p.lh, p.lx);
            if (std::abs(gap) <= kKinkTol) fail_kink(gap);
            if (gap > 0.0) {
                double lf = std::log(q.a1) + q.alpha * p.lh + (1.0 - q.alpha) * p.lx;
                return {std::log(q.alpha) + lf - p.lh, std::log(1.0 - q.alpha) + lf - p.lx};
            }
            return {std::log(q.a2), two_sector_log_kappa(q)};
        }
    }
    fail(errc::internal, "unknown production kind");
}

double log_cross(const ProductionModel& m, LogFactorPoint p) {
    require_point(p);
    switch (m.kind()) {
        case TechKind::cobb_douglas:
        case TechKind::ces: {
            const auto& q = m.ces_params();
            CesLog c = ces_log(q.alpha, q.sigma, p.lh, p.lx);
            return ces_log_cross(q.alpha, q.sigma, p.lh, p.lx, c);
        }
        case TechKind::urban: return urban_log(m.urban_params(), p.lh, p.lx).log_cross;
        case TechKind::two_sector: {
            const auto& q = m.two_sector_params();
            double gap = two_sector_gap(q, p.lh, p.lx);
            if (std::abs(gap) <= kKinkTol) fail_kink(gap);
            if (gap > 0.0) {
                double lf = std::log(q.a1) + q.alpha * p.lh + (1.0 - q.alpha) * p.lx;
                return std::log(q.alpha) + std::log(1.0 - q.alpha) + lf - p.lh - p.lx;
            }
            return kNegInf;
        }
    }
    fail(errc::internal, "unknown production kind");
}

double evaluate(const ProductionModel& m, FactorPoint p) {
    if (!(p.h > 0.0) || !(p.x > 0.0))
        fail(errc::domain, "factor point must be strictly positive");
    return std::exp(log_evaluate(m, {std::log(p.h), std::log(p.x)}));
}

std::pair<double, double> marginals(const ProductionModel& m, FactorPoint p) {
    if (!(p.h > 0.0) || !(p.x > 0.0))
        fail(errc::domain, "factor point must be strictly positive");
    LogMarginals lm = log_marginals(m, {std::log(p.h), std::log(p.x)});
    return {std::exp(lm.log_fh), std::exp(lm.log_fx)};
}

Elasticity elasticity_of_substitution_log(const ProductionModel& m, LogFactorPoint p) {
    if (m.is_cobb_douglas_like()) return Elasticity::finite(1.0);
    double lc = log_cross(m, p);
    if (lc == kNegInf) return Elasticity::inf();
    LogMarginals lm = log_marginals(m, p);
    double lf = log_evaluate(m, p);
    double sigma = std::exp(lm.log_fh + lm.log_fx - lf - lc);
    if (!(sigma > 0.0)) fail(errc::internal, "computed elasticity is not positive");
    return Elasticity::finite(sigma);
}

Elasticity elasticity_of_substitution(const ProductionModel& m, FactorPoint p) {
    if (!(p.h > 0.0) || !(p.x > 0.0))
        fail(errc::domain, "factor point must be strictly positive");
    return elasticity_of_substitution_log(m, {std::log(p.h), std::log(p.x)});
}

Elasticity elasticity_of_substitution_fd(const ProductionModel& m, FactorPoint p) {
    if (!(p.h > 0.0) || !(p.x > 0.0))
        fail(errc::domain, "factor point must be strictly positive");
    double f = evaluate(m, p);
    double h1 = std::max(1e-6 * p.h, 1e-9);
    double k1 = std::max(1e-6 * p.x, 1e-9);
    double fh = (evaluate(m, {p.h + h1, p.x}) - evaluate(m, {p.h - h1, p.x})) / (2.0 * h1);
    double fx = (evaluate(m, {p.h, p.x + k1}) - evaluate(m, {p.h, p.x - k1})) / (2.0 * k1);
    double h2 = std::max(2e-4 * p.h, 1e-9);
    double k2 = std::max(2e-4 * p.x, 1e-9);
    double fpp = evaluate(m, {p.h + h2, p.x + k2});
    double fpm = evaluate(m, {p.h + h2, p.x - k2});
    double fmp = evaluate(m, {p.h - h2, p.x + k2});
    double fmm = evaluate(m, {p.h - h2, p.x - k2});
    double fhx = ((fpp - fpm) - (fmp - fmm)) / (4.0 * h2 * k2);
    // Dimensionless curvature; below the 4-point roundoff floor (~1e-9 at
    // these steps) the surface is numerically linear in the cross direction.
    double curvature = fhx * p.h * p.x / f;
    if (std::abs(curvature) < 1e-7) return Elasticity::inf();
    double sigma = fh * fx / (f * fhx);
    if (!(sigma > 0.0)) fail(errc::internal, "finite-difference elasticity is not positive");
    return Elasticity::finite(sigma);
}

UrbanReduction urban_reduce(const UrbanParams& p) {
    require_positive(p.a1, "A1");
    require_positive(p.a2, "A2");
    require_positive(p.a3, "A3");
    UrbanParams outer = p;
    outer.a1 = 1.0 / p.theta;
    outer.a2 = 1.0;
    outer.a3 = std::pow(1.0 - p.theta, -p.alpha);
    double lambda = std::pow(p.a1 * p.theta / (1.0 - p.theta), p.alpha) / p.a3;
    return UrbanReduction{lambda, p.a1 * p.theta / lambda, p.a2 / lambda,
                          ProductionModel::urban(outer)};
}

double sigmaF_from_sigmaE(const UrbanParams& p, FactorPoint point) {
    require_unit_interval(p.alpha, "alpha");
    require_unit_interval(p.alpha_e, "alphaE");
    require_positive(p.sigma_e, "sigmaE");
    if (!(point.h > 0.0) || !(point.x > 0.0))
        fail(errc::domain, "factor point must be strictly positive");
    if (sigma_is_one(p.sigma_e)) return 1.0;
    double lu = std::log(p.a1 * p.theta) + std::log(point.h);
    double lv = std::log(p.a2) + std::log(point.x);
    CesLog inner = ces_log(p.alpha_e, p.sigma_e, lu, lv);
    double t = std::exp(inner.log_sv - inner.log_su);  // (X E_X)/(H E_H)
    return 1.0 + (p.sigma_e - 1.0) / (1.0 + p.alpha * t * p.sigma_e);
}

MrtBound mrt_bound_check(const ProductionModel& m, double a_threshold, Elasticity sigma_lb,
                         double a_h, double a_x) {
    require_positive(a_threshold, "threshold A");
    require_positive(a_h, "A_H");
    require_positive(a_x, "A_X");
    double lz = std::log(a_h) - std::log(a_x);
    double la = std::log(a_threshold);
    if (lz < la - kBoundSlack) fail(errc::domain, "A_H/A_X below the bound threshold A");
    LogMarginals at_point = log_marginals(m, {std::log(a_h), std::log(a_x)});
    LogMarginals at_threshold = log_marginals(m, {la, 0.0});
    double log_left = at_point.log_fx - at_point.log_fh;
    double rho = sigma_lb.rho();
    double log_right = (at_threshold.log_fx - at_threshold.log_fh) + rho * (lz - la);
    MrtBound out{};
    out.left = std::exp(log_left);
    out.right = std::exp(log_right);
    out.holds = log_left <= log_right + kBoundSlack;
    return out;
}

}  // namespace landval
