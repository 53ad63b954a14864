#include "landval/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "landval/errors.hpp"
#include "landval/numeric.hpp"

namespace landval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s must be positive, got %g", name, v);
        fail(errc::domain, buf);
    }
}

}  // namespace

TransitionReport malthus_to_modern(double alpha, double a1, double a2, double g1, double g2,
                                   double beta, int horizon) {
    if (!(alpha > 0.0 && alpha < 1.0)) fail(errc::domain, "alpha must lie in (0, 1)");
    if (!(beta > 0.0 && beta < 1.0)) fail(errc::domain, "beta must lie in (0, 1)");
    require_positive(a1, "A1");
    require_positive(a2, "A2");
    require_positive(g1, "G1");
    require_positive(g2, "G2");
    if (horizon < 0) fail(errc::domain, "horizon must be nonnegative");

    TransitionReport rep;
    double log_s0 = std::log(alpha) + std::log(a1) - std::log(a2);
    double log_growth_gap = std::log(g2) - std::log(g1);
    rep.t_star = log_growth_gap != 0.0 ? log_s0 / log_growth_gap
                                       : (log_s0 >= 0.0 ? kInf : -kInf);

    double inv = 1.0 / (1.0 - alpha);
    rep.condition_ratio = std::exp(-inv * log_growth_gap);  // (G1/G2)^(1/(1-alpha))
    rep.verdict = rep.condition_ratio < 1.0 ? "overvalued" : "fundamental";

    rep.switch_period = -1;
    CompensatedSum partial;
    rep.rows.reserve(static_cast<std::size_t>(horizon) + 1);
    for (int t = 0; t <= horizon; ++t) {
        double log_a1t = std::log(a1) + t * std::log(g1);
        double log_a2t = std::log(a2) + t * std::log(g2);
        double log_s = std::log(alpha) + log_a1t - log_a2t;
        TransitionRow row;
        row.t = t;
        row.malthusian = log_s >= 0.0;
        double log_min = std::min(log_s, 0.0);
        row.w = std::exp(std::max(std::log(alpha) + log_a1t, log_a2t));
        row.h1 = std::exp(inv * log_min);
        row.r = std::exp(std::log(1.0 - alpha) + log_a1t + alpha * inv * log_min);
        if (!row.malthusian && rep.switch_period < 0) rep.switch_period = t;
        partial.add(std::exp(inv * (log_a1t - log_a2t)));
        rep.rows.push_back(row);
    }
    rep.condition_partial = partial.value();
    rep.permanent_malthus =
        rep.condition_ratio >= 1.0 && !rep.rows.empty() && rep.rows.back().malthusian;
    return rep;
}

RecurrentScenario recurrent_scenario(std::uint64_t seed, int horizon,
                                     const ValuationConfig& vcfg) {
    if (horizon < 1) fail(errc::domain, "horizon must be at least 1");

    RecurrentScenario sc;
    sc.process.n = 2;
    sc.process.pi = {2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0};
    sc.process.growth.resize(4);
    for (int src = 0; src < 2; ++src)
        for (int dst = 0; dst < 2; ++dst)
            sc.process.growth[static_cast<std::size_t>(src * 2 + dst)].g =
                src == 0 ? 1.1 : 0.95;
    sc.process.n0 = 0;
    sc.process.a0 = 1.0;

    sc.path = sample_path(Process{sc.process}, horizon, seed);
    sc.equilibrium = compute_path(sc.model, sc.path, sc.beta);

    double sigma = sc.model.ces_params().sigma;
    sc.k = k_matrix(sc.process, sigma);
    sc.radius = spectral_radius(sc.k, sc.process.n);
    sc.s = solve_s(sc.k, sc.process.n);
    sc.radius_below_one = sc.radius < 1.0;
    sc.verdict = sc.radius_below_one ? "overvalued" : "fundamental";

    ValuationConfig cfg = vcfg;
    cfg.seed = seed;
    sc.valuation0 = fundamental_value_mc(sc.model, sc.process, sc.beta, sc.path, 0, cfg);

    VpSeries series = vp_ratio_series(sc.equilibrium, {sc.valuation0});
    sc.log_price_rent_slope = series.log_price_rent_slope;
    sc.slope_positive = sc.log_price_rent_slope > 0.0;
    return sc;
}

UrbanScenario urban_scenario(const UrbanParams& p, double g1, double g2, double beta, int horizon,
                             int stride, const ValuationConfig& vcfg) {
    require_positive(g1, "g1");
    require_positive(g2, "g2");
    if (horizon < 0) fail(errc::domain, "horizon must be nonnegative");
    if (stride < 1) fail(errc::domain, "stride must be at least 1");

    UrbanScenario sc{.reduction = urban_reduce(p),
                     .reduced_process = {},
                     .equilibrium = {},
                     .valuations = {},
                     .sigma_f = {},
                     .verdict = ""};
    // Sector TFPs A1, A2 growing at g1, g2 map to factor-augmenting growth
    // G_H = g1^(1-alpha), G_X = g2/g1^alpha on the time-invariant outer model.
    sc.reduced_process.g_h = std::pow(g1, 1.0 - p.alpha);
    sc.reduced_process.g_x = g2 / std::pow(g1, p.alpha);
    sc.reduced_process.a_h0 = sc.reduction.a_h;
    sc.reduced_process.a_x0 = sc.reduction.a_x;

    ProductivityPath path = sample_path(Process{sc.reduced_process}, horizon, 0);
    sc.equilibrium = compute_path(sc.reduction.outer, path, beta);

    sc.sigma_f.reserve(static_cast<std::size_t>(horizon) + 1);
    for (int t = 0; t <= horizon; ++t) {
        UrbanParams pt = p;
        pt.a1 = p.a1 * std::pow(g1, t);
        pt.a2 = p.a2 * std::pow(g2, t);
        sc.sigma_f.push_back(sigmaF_from_sigmaE(pt, {1.0, 1.0}));
    }

    for (int t = 0; t <= horizon; t += stride)
        sc.valuations.push_back(
            fundamental_value_deterministic(sc.reduction.outer, sc.reduced_process, beta, t, vcfg));

    const ValuationResult& v0 = sc.valuations.front();
    sc.verdict = bubble_decompose_exact(v0.p(), v0.b(), v0.se(), v0.tail_bound(), vcfg.se_band)
                     .verdict;
    return sc;
}

PathologyScenario pathology_scenario(double alpha, double sigma, double g_h, double g_x,
                                     double beta, int horizon) {
    PathologyScenario sc;
    sc.rows = pathology_check(alpha, sigma, g_h, g_x, beta, horizon);
    double r1 = sc.rows.front().r_gross;
    double worst = 0.0;
    for (const PathologyRow& row : sc.rows) worst = std::max(worst, row.r_gross / r1);
    sc.r_growth_factor = worst;
    sc.final_ratio = sc.rows.back().ratio;
    bool diverging = sc.r_growth_factor > 10.0 && std::abs(sc.final_ratio - 1.0) <= 0.01;
    sc.verdict = diverging ? "diverging_interest_rate" : "bounded";
    return sc;
}

}  // namespace landval
