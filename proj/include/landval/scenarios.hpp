#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "landval/equilibrium.hpp"
#include "landval/valuation.hpp"

namespace landval {

struct TransitionRow {
    int t = 0;
    double w = 0.0;
    double h1 = 0.0;  // sector-1 employment share, in (0, 1]
    double r = 0.0;
    bool malthusian = false;
};

struct TransitionReport {
    std::vector<TransitionRow> rows;
    double t_star = 0.0;        // real-valued critical time
    int switch_period = 0;      // first period in the modern regime (-1: never)
    bool permanent_malthus = false;
    double condition_ratio = 0.0;  // per-period ratio q of the summability test
    double condition_partial = 0.0;
    std::string verdict;        // overvalued | fundamental
};

// Two-sector transition: w_t = max(alpha*A_1t, A_2t),
// H_1t = min(alpha*A_1t/A_2t, 1)^(1/(1-alpha)),
// r_t = (1-alpha)*A_1t*min(alpha*A_1t/A_2t, 1)^(alpha/(1-alpha)),
// t* = log(alpha*A1/A2)/log(G2/G1). The overvaluation verdict comes from the
// summability of (A_1t/A_2t)^(1/(1-alpha)) (geometric ratio test).
TransitionReport malthus_to_modern(double alpha, double a1, double a2, double g1, double g2,
                                   double beta, int horizon);

struct RecurrentScenario {
    ProductionModel model = ProductionModel::ces(0.8, 1.25);
    MarkovMultiplicative process;
    double beta = 0.5;

    EquilibriumPath equilibrium;
    ProductivityPath path;
    std::vector<double> k;
    double radius = 0.0;
    SVector s;
    ValuationResult valuation0;
    double log_price_rent_slope = 0.0;
    std::string verdict;       // spectral-criterion verdict
    bool radius_below_one = false;
    bool slope_positive = false;
};

// Recurrent boom-bust benchmark: beta = 0.5, alpha = 0.8, sigma = 1.25,
// 2-state chain with 1/3 off-diagonal transitions and growth 1.1 / 0.95 by
// source state. Emits the price path, the ratio diagnostics, the spectral
// certificate, and the t = 0 valuation.
RecurrentScenario recurrent_scenario(std::uint64_t seed, int horizon,
                                     const ValuationConfig& vcfg);

struct UrbanScenario {
    UrbanReduction reduction;
    DeterministicExponential reduced_process;
    EquilibriumPath equilibrium;
    std::vector<ValuationResult> valuations;  // at the configured stride
    std::vector<double> sigma_f;              // per period, share formula
    std::string verdict;
};

// Urban economy with sector TFPs A1, A2 growing at g1, g2: reduces to the
// composed outer technology with factor-augmenting growth G_H = g1^(1-alpha),
// G_X = g2/g1^alpha, then runs equilibrium + valuation on the reduction.
UrbanScenario urban_scenario(const UrbanParams& p, double g1, double g2, double beta,
                             int horizon, int stride, const ValuationConfig& vcfg);

struct PathologyScenario {
    std::vector<PathologyRow> rows;
    double r_growth_factor = 0.0;  // max_t R_t / R_1 within the horizon
    double final_ratio = 0.0;      // lower_term/asymptote at the last period
    std::string verdict;           // diverging_interest_rate | bounded
};

PathologyScenario pathology_scenario(double alpha, double sigma, double g_h, double g_x,
                                     double beta, int horizon);

}  // namespace landval
