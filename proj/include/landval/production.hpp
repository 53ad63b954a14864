#pragma once

#include <utility>

#include "landval/numeric.hpp"

namespace landval {

enum class TechKind { ces, cobb_douglas, two_sector, urban };

struct CESParams {
    double alpha = 0.5;
    double sigma = 1.0;
};

struct TwoSectorParams {
    double alpha = 0.5;
    double a1 = 1.0;
    double a2 = 1.0;
};

struct UrbanParams {
    double alpha = 0.5;
    double theta = 0.5;
    double sigma_e = 1.0;
    double alpha_e = 0.5;
    double a1 = 1.0;
    double a2 = 1.0;
    double a3 = 1.0;
};

struct FactorPoint {
    double h = 1.0;
    double x = 1.0;
};

// Same point in log coordinates; every model evaluates in logs internally so
// thousand-period exponential growth cannot overflow.
struct LogFactorPoint {
    double lh = 0.0;
    double lx = 0.0;
};

struct LogMarginals {
    double log_fh;
    double log_fx;
};

class ProductionModel {
public:
    static ProductionModel ces(double alpha, double sigma);
    static ProductionModel cobb_douglas(double alpha);
    static ProductionModel two_sector(double alpha, double a1, double a2);
    static ProductionModel urban(const UrbanParams& p);

    TechKind kind() const { return kind_; }
    const CESParams& ces_params() const { return ces_; }
    const TwoSectorParams& two_sector_params() const { return ts_; }
    const UrbanParams& urban_params() const { return urban_; }

    // True when the model is exactly Cobb-Douglas after sigma ~ 1 routing
    // (CES with |sigma-1| <= 1e-9, or urban with an inner elasticity that
    // routes to Cobb-Douglas). Such models have constant factor shares.
    bool is_cobb_douglas_like() const;

    // Effective Cobb-Douglas labor share when is_cobb_douglas_like().
    double effective_alpha() const;

private:
    ProductionModel() = default;
    TechKind kind_ = TechKind::ces;
    CESParams ces_;
    TwoSectorParams ts_;
    UrbanParams urban_;
};

// Log-domain core. All other entry points are wrappers around these.
double log_evaluate(const ProductionModel& m, LogFactorPoint p);
LogMarginals log_marginals(const ProductionModel& m, LogFactorPoint p);
// log F_HX; -infinity when the cross derivative is exactly 0 (linear region).
double log_cross(const ProductionModel& m, LogFactorPoint p);

double evaluate(const ProductionModel& m, FactorPoint p);
std::pair<double, double> marginals(const ProductionModel& m, FactorPoint p);

// Analytic elasticity of substitution F_H F_X / (F F_HX).
Elasticity elasticity_of_substitution(const ProductionModel& m, FactorPoint p);
Elasticity elasticity_of_substitution_log(const ProductionModel& m, LogFactorPoint p);

// Finite-difference fallback. First derivatives use central differences with
// step max(1e-6*input, 1e-9). The mixed second difference uses a wider step,
// max(2e-4*input, 1e-9): at 1e-6 the four-point cross difference is
// roundoff-dominated (observed ~1e-2 relative error) while eps^(1/4)-scaled
// steps keep both truncation and roundoff below ~1e-5.
Elasticity elasticity_of_substitution_fd(const ProductionModel& m, FactorPoint p);

struct UrbanReduction {
    double lambda;
    double a_h;
    double a_x;
    ProductionModel outer;  // F(H,X) = H^alpha E(H,X)^(1-alpha)
};

// Rewrites the three-factor urban technology Y as F(A_H*H, A_X*X) for the
// outer neoclassical model F. The returned values satisfy the defining system
// (A_H^alpha lam^(alpha-1), lam*A_H, lam*A_X) = (A3(1-theta)^alpha, A1*theta, A2),
// so Y(H,X) == evaluate(outer, (A_H*H, A_X*X)) identically, and
// A_H/A_X = theta*A1/A2 independent of A3.
UrbanReduction urban_reduce(const UrbanParams& p);

// sigma_F via the share formula sigma_F - 1 = (sigma_E - 1)/(1 + alpha*t*sigma_E)
// with t = (X E_X)/(H E_H) evaluated at the inner factor point.
double sigmaF_from_sigmaE(const UrbanParams& p, FactorPoint point);

struct MrtBound {
    double left;   // F_X/F_H at (A_H, A_X)
    double right;  // (F_X/F_H)(A,1) * A^(-rho) * (A_H/A_X)^rho
    bool holds;    // left <= right (with 1e-12 relative slack for FP ties)
};

// Marginal-rate bound: for A_H/A_X >= A and sigma_F(h,1) >= sigma_lb on
// h >= A, the rent-wage ratio obeys F_X/F_H <= (F_X/F_H)(A,1) * A^(-rho) *
// (A_H/A_X)^rho with rho = 1/sigma_lb. Returns both sides.
MrtBound mrt_bound_check(const ProductionModel& m, double a_threshold, Elasticity sigma_lb,
                         double a_h, double a_x);

}  // namespace landval
