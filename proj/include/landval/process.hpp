#pragma once

#include <cmath>
#include <cstdint>
#include <variant>
#include <vector>

#include "landval/rng.hpp"

namespace landval {

struct DeterministicExponential {
    double g_h = 1.0;
    double g_x = 1.0;
    double a_h0 = 1.0;
    double a_x0 = 1.0;
};

// Growth-factor distribution attached to one Markov transition: a point mass
// or a lognormal(mu, s). Both have closed-form (rho-1)-moments, which keeps
// the spectral criterion exact rather than sampled.
struct GrowthSpec {
    bool lognormal = false;
    double g = 1.0;   // point mass value
    double mu = 0.0;  // lognormal log-mean
    double s = 0.0;   // lognormal log-sd

    double log_draw(SplitMix64& rng) const;
    // E[G^e] for exponent e = rho - 1.
    double moment(double e) const;
};

struct MarkovMultiplicative {
    int n = 1;
    std::vector<double> pi;         // n*n row-stochastic, row-major
    std::vector<GrowthSpec> growth; // n*n, indexed by (source, destination)
    int n0 = 0;                     // initial state, 0-based
    double a0 = 1.0;                // initial relative productivity

    void validate() const;
};

struct PathRecord {
    int t = 0;
    int state = -1;  // -1 when the process has no state (deterministic)
    double log_a_h = 0.0;
    double log_a_x = 0.0;
    // Realized log growth increment of A_H/A_X into this period (exact value
    // of the drawn factor; NaN at t = 0).
    double log_step = 0.0;

    double a_h() const { return std::exp(log_a_h); }
    double a_x() const { return std::exp(log_a_x); }
};

struct ProductivityPath {
    bool markov = false;
    std::vector<PathRecord> records;  // T+1 entries
};

using Process = std::variant<DeterministicExponential, MarkovMultiplicative>;

ProductivityPath sample_path(const Process& proc, int horizon, std::uint64_t seed);

// K[n][n'] = pi_{nn'} * E[G_{nn'}^(rho-1)], rho = 1/sigma. Requires sigma > 1.
std::vector<double> k_matrix(const MarkovMultiplicative& proc, double sigma);

// Dominant eigenvalue magnitude by shifted power iteration (K + I keeps
// periodic chains convergent); for n <= 2 the characteristic-polynomial value
// is computed as an independent route and must agree to 1e-10.
double spectral_radius(const std::vector<double>& k, int n);

struct SVector {
    std::vector<double> s;
    bool diverged = false;         // spectral radius >= 1, sum infinite
    bool ill_conditioned = false;  // spectral radius within 1e-10 of 1
};

// Solves (I - K) s = 1 by Gaussian elimination with partial pivoting when the
// spectral radius is below 1; otherwise returns the divergence flag.
SVector solve_s(const std::vector<double>& k, int n);

struct CondEstimate {
    double mean = 0.0;             // MC mean of sum_{t=1..T} (A_Ht/A_Xt)^(rho-1)
    double se = 0.0;
    double exact_truncated = 0.0;  // sum_{k=1..T} (K^k 1)[n0] * A0^(rho-1)
    bool divergence_flag = false;  // terms not decaying (radius >= 1)
};

CondEstimate mc_condition_estimate(const Process& proc, double sigma, int n_paths, int horizon,
                                   std::uint64_t seed);

// Views a deterministic process as a 1-state chain with point-mass growth
// G_H/G_X, which lets the spectral criterion cover both process families.
MarkovMultiplicative as_single_state_chain(const DeterministicExponential& d);

}  // namespace landval
