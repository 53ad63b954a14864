#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "landval/equilibrium.hpp"
#include "landval/process.hpp"
#include "landval/production.hpp"

namespace landval {

struct ValuationConfig {
    long horizon = 2000;        // truncation length (starting point when auto-extended)
    long n_paths = 10000;       // Monte Carlo continuation paths
    std::uint64_t seed = 1;
    double tail_tolerance = 1e-6;  // extend T until tail_bound < tol * P_t
    double mrt_threshold = 0.0;    // ratio level A; <= 0 means auto: max(1, A_t)
    double se_band = 3.0;          // verdict band multiplier on the standard error
    int parallelism = 1;           // MC worker threads; never affects output bytes
    long hard_cap = 1000000;       // absolute cap on series terms
};

enum class CertificateRoute {
    cd_exact,        // constant factor shares: geometric sum in closed form
    mrt_geometric,   // deterministic marginal-rate bound with geometric tail
    markov_spectral, // marginal-rate bound composed with the s-vector
    none,            // no certificate; estimate carried with a note
};

const char* route_name(CertificateRoute r);

// The discounted-dividend sum telescopes pathwise: with y = r/w and
// D_s = prod_{j<=s} (1 + y_{t+j}/beta)^(-1),
//   sum_{s<=T} m_{t->t+s} r_{t+s} = P_t (1 - D_T)  identically.
// The engine tracks D multiplicatively, so V, the gap B = P*D, the standard
// error, and every verdict stay meaningful when the gap is many orders of
// magnitude below P (plain summation of the series would drown P - V in
// rounding noise at ~1e-16 * P). Scale-free fields below are relative to P_t.
struct ValuationResult {
    int t = 0;
    double log_p = 0.0;       // log of P_t
    double d_mean = 0.0;      // mean of D_T over continuations: B/P
    double se_rel = 0.0;      // standard error / P_t
    double bound_rel = 0.0;   // tail bound / P_t
    long terms = 0;           // T actually used
    bool certified = false;
    CertificateRoute route = CertificateRoute::none;
    std::string note;

    double p() const { return std::exp(log_p); }
    double v() const { return p() * (1.0 - d_mean); }
    double b() const { return p() * d_mean; }
    double se() const { return p() * se_rel; }
    double tail_bound() const { return p() * bound_rel; }
    double v_over_p() const { return 1.0 - d_mean; }
};

ValuationResult fundamental_value_deterministic(const ProductionModel& m,
                                                const DeterministicExponential& proc, double beta,
                                                int t, const ValuationConfig& cfg);

ValuationResult fundamental_value_mc(const ProductionModel& m, const MarkovMultiplicative& proc,
                                     double beta, const ProductivityPath& base_path, int t,
                                     const ValuationConfig& cfg);

struct BubbleVerdict {
    double b = 0.0;
    const char* verdict = "inconclusive";  // overvalued | fundamental | inconclusive
};

// B = P - V. Overvalued when the gap exceeds band*se + tail_bound (the whole
// uncertainty interval lies above zero); fundamental when the certified
// truncation error alone explains the gap (|B| <= tail_bound); inconclusive
// in between, where the noise band straddles both readings.
BubbleVerdict bubble_decompose(double p, double v, double se, double tail_bound,
                               double band = 3.0);

// Same decision rule evaluated on the cancellation-free gap b = P - V.
BubbleVerdict bubble_decompose_exact(double p, double b, double se, double tail_bound,
                                     double band = 3.0);

struct VpSeries {
    std::vector<int> t;
    std::vector<double> v_over_p;
    std::vector<double> price_rent;
    // Least-squares slope of log(P_t/r_t) against t over the full path.
    double log_price_rent_slope = 0.0;
};

VpSeries vp_ratio_series(const EquilibriumPath& path, const std::vector<ValuationResult>& vals);

// Per-continuation diagnostics on the same seeded paths the estimator uses:
// the final discount product, the discounted dividend sum, and the
// undiscounted upper-bound sum w_t * sum y (per-path inequality oracle).
struct ContinuationStats {
    double d_final = 0.0;
    double v_path = 0.0;    // w_t * sum y_s D_s
    double v_ub_path = 0.0; // w_t * sum y_s
};

std::vector<ContinuationStats> continuation_statistics(const ProductionModel& m,
                                                       const MarkovMultiplicative& proc,
                                                       double beta,
                                                       const ProductivityPath& base_path, int t,
                                                       long horizon, long n_paths,
                                                       std::uint64_t seed);

}  // namespace landval
