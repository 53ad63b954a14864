#pragma once

#include <vector>

#include "landval/process.hpp"
#include "landval/production.hpp"

namespace landval {

// One period of the closed-form equilibrium. Log values are authoritative;
// the linear fields are exponentials and may round to 0/inf at extreme growth
// horizons, which only affects display.
struct EquilibriumPoint {
    int t = 0;
    int state = -1;

    double log_w = 0.0;
    double log_r = 0.0;
    double log_p = 0.0;
    double log_cy = 0.0;
    double log_co = 0.0;

    double w() const { return std::exp(log_w); }
    double r() const { return std::exp(log_r); }
    double p() const { return std::exp(log_p); }
    double c_y() const { return std::exp(log_cy); }
    double c_o() const { return std::exp(log_co); }

    // log of the one-period SDF realized into t+1; NaN at the final period.
    double log_m_next = std::numeric_limits<double>::quiet_NaN();
    // log of the gross land return from t-1 into t; NaN at t = 0.
    double log_gross_return = std::numeric_limits<double>::quiet_NaN();
};

struct EquilibriumPath {
    double beta = 0.5;
    std::vector<EquilibriumPoint> points;
};

// Proposition-style closed form per period: w = F_H(A_H, A_X) * A_H,
// r = F_X(A_H, A_X) * A_X, P = beta * w, c_y = (1-beta) w, c_o = beta w + r.
EquilibriumPath compute_path(const ProductionModel& m, const ProductivityPath& path, double beta);

// m = beta*w_t / (beta*w_{t+1} + r_{t+1}) = P_t / c_o,t+1.
double sdf(const EquilibriumPoint& at_t, const EquilibriumPoint& at_t1);

// R = (P_{t+1} + r_{t+1}) / P_t.
double gross_return(const EquilibriumPoint& at_t, const EquilibriumPoint& at_t1);

struct PathologyRow {
    int t = 0;
    double r_gross = 0.0;     // exact gross land return R_t
    double lower_term = 0.0;  // r_t / (beta * w_{t-1}), the divergent part of R_t
    double asymptote = 0.0;   // ((1-alpha)/(alpha*beta)) * G_X * (G_H/G_X)^((rho-1)(t-1))
    double ratio = 0.0;       // lower_term / asymptote
};

// Interest-rate blow-up diagnostic for sigma < 1 with G_H > G_X: the exact
// return series against its closed-form asymptote.
std::vector<PathologyRow> pathology_check(double alpha, double sigma, double g_h, double g_x,
                                          double beta, int horizon);

}  // namespace landval
