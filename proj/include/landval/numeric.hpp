#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

namespace landval {

// Neumaier-compensated running sum. Using it everywhere keeps reductions
// independent of chunking, so threaded runs reproduce single-threaded bytes.
class CompensatedSum {
public:
    void add(double x) {
        double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

inline double logsumexp2(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = a > b ? a : b;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// log(1 + e^z) without overflow; for z > 40 the correction to z is below
// double resolution.
inline double log1pexp(double z) {
    if (z > 40.0) return z;
    if (z < -745.0) return 0.0;
    return std::log1p(std::exp(z));
}

// 1 / (1 + e^z), the one-step discount-product factor beta/(beta+y) with
// z = log(y/beta). Exact to a ulp across the full range of z.
inline double inv_one_plus_exp(double z) {
    if (z > 40.0) return std::exp(-z);
    return 1.0 / (1.0 + std::exp(z));
}

// Elasticity of substitution with an exact tagged infinity so that
// rho = 1/sigma is exactly 0 in linear regions.
struct Elasticity {
    double value = 0.0;
    bool infinite = false;

    double rho() const { return infinite ? 0.0 : 1.0 / value; }
    static Elasticity finite(double v) { return {v, false}; }
    static Elasticity inf() { return {0.0, true}; }
};

// Sample mean and standard error (sample std / sqrt(n)), two-pass with
// compensated sums so the result does not depend on reduction order.
struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_and_se(const std::vector<double>& xs) {
    MeanSe out;
    if (xs.empty()) return out;
    CompensatedSum s;
    for (double x : xs) s.add(x);
    out.mean = s.value() / static_cast<double>(xs.size());
    if (xs.size() < 2) return out;
    CompensatedSum q;
    for (double x : xs) {
        double d = x - out.mean;
        q.add(d * d);
    }
    double var = q.value() / static_cast<double>(xs.size() - 1);
    out.se = std::sqrt(var / static_cast<double>(xs.size()));
    return out;
}

}  // namespace landval
