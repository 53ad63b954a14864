#include "landval/process.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "landval/errors.hpp"
#include "landval/numeric.hpp"

namespace landval {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kNearSingular = 1e-10;  // |radius - 1| treated as ill-conditioned
constexpr double kDualRouteTol = 1e-10;  // power iteration vs closed form
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void fail_at(errc code, const char* what, double got) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s (got %g)", what, got);
    fail(code, buf);
}

// Perron root of a nonnegative 2x2 (or 1x1) matrix by the characteristic
// polynomial; the independent route the power iteration is checked against.
double closed_form_radius(const std::vector<double>& k, int n) {
    if (n == 1) return k[0];
    double tr = k[0] + k[3];
    double det = k[0] * k[3] - k[1] * k[2];
    double disc = tr * tr - 4.0 * det;
    return 0.5 * (tr + std::sqrt(disc > 0.0 ? disc : 0.0));
}

int draw_state(const std::vector<double>& pi, int n, int from, SplitMix64& rng) {
    double u = rng.uniform01();
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        acc += pi[from * n + j];
        if (u < acc) return j;
    }
    return n - 1;
}

ProductivityPath sample_deterministic(const DeterministicExponential& d, int horizon) {
    if (!(d.g_h > 0.0 && d.g_x > 0.0 && d.a_h0 > 0.0 && d.a_x0 > 0.0))
        fail(errc::domain, "deterministic process fields must all be positive");
    ProductivityPath out;
    out.markov = false;
    out.records.resize(static_cast<std::size_t>(horizon) + 1);
    double lgh = std::log(d.g_h);
    double lgx = std::log(d.g_x);
    double step = lgh - lgx;
    for (int t = 0; t <= horizon; ++t) {
        PathRecord& rec = out.records[static_cast<std::size_t>(t)];
        rec.t = t;
        rec.state = -1;
        rec.log_a_h = std::log(d.a_h0) + t * lgh;
        rec.log_a_x = std::log(d.a_x0) + t * lgx;
        rec.log_step = t == 0 ? kNaN : step;
    }
    return out;
}

ProductivityPath sample_markov(const MarkovMultiplicative& m, int horizon, std::uint64_t seed) {
    m.validate();
    ProductivityPath out;
    out.markov = true;
    out.records.resize(static_cast<std::size_t>(horizon) + 1);
    SplitMix64 rng(seed);
    int state = m.n0;
    double log_a = std::log(m.a0);
    for (int t = 0; t <= horizon; ++t) {
        PathRecord& rec = out.records[static_cast<std::size_t>(t)];
        rec.t = t;
        if (t > 0) {
            int next = draw_state(m.pi, m.n, state, rng);
            double step = m.growth[static_cast<std::size_t>(state) * m.n + next].log_draw(rng);
            log_a += step;
            rec.log_step = step;
            state = next;
        } else {
            rec.log_step = kNaN;
        }
        rec.state = state;
        rec.log_a_h = log_a;
        rec.log_a_x = 0.0;  // ratio normalization: A_X held at 1
    }
    return out;
}

}  // namespace

double GrowthSpec::log_draw(SplitMix64& rng) const {
    if (!lognormal) return std::log(g);
    return mu + s * rng.normal01();
}

double GrowthSpec::moment(double e) const {
    if (!lognormal) return std::pow(g, e);
    return std::exp(e * mu + 0.5 * e * e * s * s);
}

void MarkovMultiplicative::validate() const {
    if (n < 1) fail_at(errc::domain, "chain needs at least one state", n);
    std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    if (pi.size() != nn) fail_at(errc::domain, "transition matrix size mismatch", double(pi.size()));
    if (growth.size() != nn)
        fail_at(errc::domain, "growth matrix size mismatch", double(growth.size()));
    if (n0 < 0 || n0 >= n) fail_at(errc::domain, "initial state out of range", n0);
    if (!(a0 > 0.0)) fail_at(errc::domain, "initial productivity must be positive", a0);
    for (int i = 0; i < n; ++i) {
        CompensatedSum row;
        for (int j = 0; j < n; ++j) {
            double p = pi[static_cast<std::size_t>(i) * n + j];
            if (!(p >= 0.0)) fail_at(errc::domain, "transition probability must be nonnegative", p);
            row.add(p);
        }
        if (std::abs(row.value() - 1.0) > kRowSumTol) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "transition row %d sums to %.17g, not 1", i + 1,
                          row.value());
            fail(errc::domain, buf);
        }
    }
    for (const GrowthSpec& gs : growth) {
        if (!gs.lognormal && !(gs.g > 0.0))
            fail_at(errc::domain, "point-mass growth factor must be positive", gs.g);
        if (gs.lognormal && !(gs.s >= 0.0))
            fail_at(errc::domain, "lognormal growth spread must be nonnegative", gs.s);
    }
}

ProductivityPath sample_path(const Process& proc, int horizon, std::uint64_t seed) {
    if (horizon < 0) fail_at(errc::domain, "horizon must be nonnegative", horizon);
    if (const auto* d = std::get_if<DeterministicExponential>(&proc)) {
        return sample_deterministic(*d, horizon);
    }
    return sample_markov(std::get<MarkovMultiplicative>(proc), horizon, seed);
}

std::vector<double> k_matrix(const MarkovMultiplicative& proc, double sigma) {
    proc.validate();
    if (!(sigma > 1.0)) fail_at(errc::domain, "spectral criterion requires sigma > 1", sigma);
    double e = 1.0 / sigma - 1.0;
    std::size_t nn = static_cast<std::size_t>(proc.n) * static_cast<std::size_t>(proc.n);
    std::vector<double> k(nn);
    for (std::size_t idx = 0; idx < nn; ++idx) k[idx] = proc.pi[idx] * proc.growth[idx].moment(e);
    return k;
}

double spectral_radius(const std::vector<double>& k, int n) {
    if (n < 1 || k.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        fail(errc::domain, "spectral radius needs a square matrix");
    for (double v : k)
        if (!(v >= 0.0) || !std::isfinite(v))
            fail_at(errc::domain, "matrix entries must be finite and nonnegative", v);

    // Power iteration on K + I: the shift keeps periodic chains (complex
    // eigenvalues on the spectral circle) strictly dominated by the Perron
    // root, and nonnegativity of the iterate is preserved.
    std::vector<double> v(static_cast<std::size_t>(n), 1.0);
    std::vector<double> w(static_cast<std::size_t>(n));
    double rayleigh = kNaN;
    bool converged = false;
    for (int it = 0; it < 100000; ++it) {
        double dot_vw = 0.0;
        double dot_vv = 0.0;
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            CompensatedSum row;
            row.add(v[static_cast<std::size_t>(i)]);  // the +I shift
            for (int j = 0; j < n; ++j)
                row.add(k[static_cast<std::size_t>(i) * n + j] * v[static_cast<std::size_t>(j)]);
            w[static_cast<std::size_t>(i)] = row.value();
            dot_vw += v[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
            dot_vv += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
            norm2 += w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
        }
        double next = dot_vw / dot_vv;
        double scale = 1.0 / std::sqrt(norm2);
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] * scale;
        if (it > 0 && std::abs(next - rayleigh) <= 1e-12 * std::max(1.0, std::abs(next))) {
            rayleigh = next;
            converged = true;
            break;
        }
        rayleigh = next;
    }
    if (!converged)
        fail_at(errc::numeric, "power iteration did not converge; last Rayleigh quotient",
                rayleigh);
    double radius = std::max(rayleigh - 1.0, 0.0);

    if (n <= 2) {
        double exact = closed_form_radius(k, n);
        if (std::abs(radius - exact) > kDualRouteTol * std::max(1.0, exact))
            fail_at(errc::internal, "power iteration disagrees with closed-form radius", radius);
    }
    return radius;
}

SVector solve_s(const std::vector<double>& k, int n) {
    double radius = spectral_radius(k, n);
    SVector out;
    out.ill_conditioned = std::abs(radius - 1.0) <= kNearSingular;
    if (radius >= 1.0) {
        out.diverged = true;
        return out;
    }

    // Dense (I - K) s = 1 by Gaussian elimination with partial pivoting.
    std::size_t un = static_cast<std::size_t>(n);
    std::vector<double> a(un * un);
    std::vector<double> rhs(un, 1.0);
    for (std::size_t i = 0; i < un; ++i)
        for (std::size_t j = 0; j < un; ++j)
            a[i * un + j] = (i == j ? 1.0 : 0.0) - k[i * un + j];
    for (std::size_t col = 0; col < un; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < un; ++row)
            if (std::abs(a[row * un + col]) > std::abs(a[pivot * un + col])) pivot = row;
        if (std::abs(a[pivot * un + col]) < 1e-300)
            fail(errc::numeric, "I - K is numerically singular");
        if (pivot != col) {
            for (std::size_t j = 0; j < un; ++j) std::swap(a[pivot * un + j], a[col * un + j]);
            std::swap(rhs[pivot], rhs[col]);
        }
        for (std::size_t row = col + 1; row < un; ++row) {
            double f = a[row * un + col] / a[col * un + col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j < un; ++j) a[row * un + j] -= f * a[col * un + j];
            rhs[row] -= f * rhs[col];
        }
    }
    out.s.resize(un);
    for (std::size_t i = un; i-- > 0;) {
        CompensatedSum acc;
        acc.add(rhs[i]);
        for (std::size_t j = i + 1; j < un; ++j) acc.add(-a[i * un + j] * out.s[j]);
        out.s[i] = acc.value() / a[i * un + i];
    }
    return out;
}

CondEstimate mc_condition_estimate(const Process& proc, double sigma, int n_paths, int horizon,
                                   std::uint64_t seed) {
    if (!(sigma > 1.0)) fail_at(errc::domain, "spectral criterion requires sigma > 1", sigma);
    if (n_paths < 2) fail_at(errc::domain, "need at least 2 paths for a standard error", n_paths);
    if (horizon < 1) fail_at(errc::domain, "horizon must be at least 1", horizon);
    double e = 1.0 / sigma - 1.0;

    const MarkovMultiplicative chain =
        std::holds_alternative<MarkovMultiplicative>(proc)
            ? std::get<MarkovMultiplicative>(proc)
            : as_single_state_chain(std::get<DeterministicExponential>(proc));

    CondEstimate out;

    // Exact truncated series: sum_{k=1..T} (K^k 1)[n0] * A0^(e).
    std::vector<double> k = k_matrix(chain, sigma);
    std::size_t un = static_cast<std::size_t>(chain.n);
    std::vector<double> v(un, 1.0);
    std::vector<double> kv(un);
    CompensatedSum exact;
    for (int step = 1; step <= horizon; ++step) {
        for (std::size_t i = 0; i < un; ++i) {
            CompensatedSum row;
            for (std::size_t j = 0; j < un; ++j) row.add(k[i * un + j] * v[j]);
            kv[i] = row.value();
        }
        v = kv;
        exact.add(v[static_cast<std::size_t>(chain.n0)]);
    }
    out.exact_truncated = exact.value() * std::pow(chain.a0, e);
    out.divergence_flag = spectral_radius(k, chain.n) >= 1.0;

    // Monte Carlo partial sums of (A_Ht/A_Xt)^e over sampled paths.
    std::vector<double> sums(static_cast<std::size_t>(n_paths));
    for (int i = 0; i < n_paths; ++i) {
        ProductivityPath path =
            sample_path(proc, horizon, derive_seed(seed, static_cast<std::uint64_t>(i)));
        CompensatedSum acc;
        for (int t = 1; t <= horizon; ++t) {
            const PathRecord& rec = path.records[static_cast<std::size_t>(t)];
            acc.add(std::exp(e * (rec.log_a_h - rec.log_a_x)));
        }
        sums[static_cast<std::size_t>(i)] = acc.value();
    }
    MeanSe ms = mean_and_se(sums);
    out.mean = ms.mean;
    out.se = ms.se;
    return out;
}

MarkovMultiplicative as_single_state_chain(const DeterministicExponential& d) {
    if (!(d.g_h > 0.0 && d.g_x > 0.0 && d.a_h0 > 0.0 && d.a_x0 > 0.0))
        fail(errc::domain, "deterministic process fields must all be positive");
    MarkovMultiplicative chain;
    chain.n = 1;
    chain.pi = {1.0};
    GrowthSpec gs;
    gs.lognormal = false;
    gs.g = d.g_h / d.g_x;
    chain.growth = {gs};
    chain.n0 = 0;
    chain.a0 = d.a_h0 / d.a_x0;
    return chain;
}

}  // namespace landval
