#include "landval/equilibrium.hpp"

#include <cmath>

#include "landval/errors.hpp"
#include "landval/numeric.hpp"

namespace landval {

EquilibriumPath compute_path(const ProductionModel& m, const ProductivityPath& path, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) fail(errc::domain, "beta must lie in (0, 1)");
    if (path.records.empty()) fail(errc::domain, "productivity path is empty");

    EquilibriumPath out;
    out.beta = beta;
    out.points.resize(path.records.size());
    double log_beta = std::log(beta);
    double log_one_minus_beta = std::log(1.0 - beta);
    for (std::size_t i = 0; i < path.records.size(); ++i) {
        const PathRecord& rec = path.records[i];
        EquilibriumPoint& pt = out.points[i];
        LogMarginals lm = log_marginals(m, {rec.log_a_h, rec.log_a_x});
        pt.t = rec.t;
        pt.state = rec.state;
        pt.log_w = lm.log_fh + rec.log_a_h;
        pt.log_r = lm.log_fx + rec.log_a_x;
        pt.log_p = log_beta + pt.log_w;
        pt.log_cy = log_one_minus_beta + pt.log_w;
        pt.log_co = logsumexp2(log_beta + pt.log_w, pt.log_r);
    }
    for (std::size_t i = 0; i + 1 < out.points.size(); ++i)
        out.points[i].log_m_next = out.points[i].log_p - out.points[i + 1].log_co;
    for (std::size_t i = 1; i < out.points.size(); ++i)
        out.points[i].log_gross_return =
            logsumexp2(out.points[i].log_p, out.points[i].log_r) - out.points[i - 1].log_p;
    return out;
}

double sdf(const EquilibriumPoint& at_t, const EquilibriumPoint& at_t1) {
    return std::exp(at_t.log_p - at_t1.log_co);
}

double gross_return(const EquilibriumPoint& at_t, const EquilibriumPoint& at_t1) {
    return std::exp(logsumexp2(at_t1.log_p, at_t1.log_r) - at_t.log_p);
}

std::vector<PathologyRow> pathology_check(double alpha, double sigma, double g_h, double g_x,
                                          double beta, int horizon) {
    if (horizon < 1) fail(errc::domain, "pathology check needs at least one period");
    ProductionModel model = ProductionModel::ces(alpha, sigma);
    DeterministicExponential proc{g_h, g_x, 1.0, 1.0};
    ProductivityPath path = sample_path(Process{proc}, horizon, 0);
    EquilibriumPath eq = compute_path(model, path, beta);

    double rho = 1.0 / sigma;
    double log_pref = std::log(1.0 - alpha) - std::log(alpha) - std::log(beta) + std::log(g_x);
    double log_ratio_growth = std::log(g_h) - std::log(g_x);
    std::vector<PathologyRow> rows(static_cast<std::size_t>(horizon));
    for (int t = 1; t <= horizon; ++t) {
        PathologyRow& row = rows[static_cast<std::size_t>(t - 1)];
        const EquilibriumPoint& cur = eq.points[static_cast<std::size_t>(t)];
        const EquilibriumPoint& prev = eq.points[static_cast<std::size_t>(t - 1)];
        row.t = t;
        row.r_gross = std::exp(cur.log_gross_return);
        double log_lower = cur.log_r - std::log(beta) - prev.log_w;
        double log_asym = log_pref + (rho - 1.0) * (t - 1) * log_ratio_growth;
        row.lower_term = std::exp(log_lower);
        row.asymptote = std::exp(log_asym);
        row.ratio = std::exp(log_lower - log_asym);
    }
    return rows;
}

}  // namespace landval
