#include "landval/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "landval/errors.hpp"

namespace landval {

namespace {

constexpr double kLn10 = 2.302585092994045684017991454684364;

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string verdict_for(const ValuationResult& v, double band) {
    if (!v.certified) return "no_certificate";
    // Decided on the scale-free quantities; every term of the rule scales
    // with P, so this matches the level comparison even when P overflows.
    return bubble_decompose_exact(1.0, v.d_mean, v.se_rel, v.bound_rel, band).verdict;
}

}  // namespace

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fmt_from_log(double log_value) {
    if (log_value == -std::numeric_limits<double>::infinity()) return "0";
    if (std::isnan(log_value)) return "nan";
    if (log_value == std::numeric_limits<double>::infinity()) return "inf";
    double l10 = log_value / kLn10;
    if (l10 > -307.0 && l10 < 307.0) return fmt_double(std::exp(log_value));
    double exponent = std::floor(l10);
    double mantissa = std::pow(10.0, l10 - exponent);
    if (mantissa >= 10.0) {
        mantissa /= 10.0;
        exponent += 1.0;
    }
    // Digits past the log's own resolution (~1e-12 relative at this scale)
    // would be noise.
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11fe%+.0f", mantissa, exponent);
    return buf;
}

std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string config_hash_hex(const std::string& config_text, std::uint64_t seed,
                            const std::string& command, const std::string& scenario) {
    std::uint64_t h = fnv1a64(config_text.data(), config_text.size());
    h = fnv1a64(&seed, sizeof seed, h);
    h = fnv1a64(command.data(), command.size(), h);
    h = fnv1a64(scenario.data(), scenario.size(), h);
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_cell(cells[i]);
    }
    out += '\n';
    return out;
}

std::string equilibrium_csv(const ProductivityPath& path, const EquilibriumPath& eq) {
    std::string out = csv_row(
        {"t", "state", "A_H", "A_X", "w", "r", "P", "c_y", "c_o", "R", "m", "log_w", "log_r",
         "log_P"});
    for (std::size_t i = 0; i < eq.points.size(); ++i) {
        const EquilibriumPoint& pt = eq.points[i];
        const PathRecord& rec = path.records[i];
        out += csv_row({std::to_string(pt.t),
                        std::to_string(pt.state >= 0 ? pt.state + 1 : 0),  // 1-based, 0: stateless
                        fmt_from_log(rec.log_a_h), fmt_from_log(rec.log_a_x),
                        fmt_from_log(pt.log_w), fmt_from_log(pt.log_r), fmt_from_log(pt.log_p),
                        fmt_from_log(pt.log_cy), fmt_from_log(pt.log_co),
                        fmt_from_log(pt.log_gross_return), fmt_from_log(pt.log_m_next),
                        fmt_double(pt.log_w), fmt_double(pt.log_r), fmt_double(pt.log_p)});
    }
    return out;
}

std::string valuation_csv(const EquilibriumPath& eq, const std::vector<ValuationResult>& vals,
                          double se_band) {
    std::string out = csv_row(
        {"t", "P", "V_hat", "se", "tail_bound", "B", "verdict", "price_rent", "V_over_P"});
    for (const ValuationResult& v : vals) {
        const EquilibriumPoint* pt = nullptr;
        for (const EquilibriumPoint& cand : eq.points)
            if (cand.t == v.t) pt = &cand;
        if (pt == nullptr) fail(errc::internal, "valuation period missing from equilibrium path");
        double log_v = v.d_mean < 1.0 ? v.log_p + std::log1p(-v.d_mean)
                                      : -std::numeric_limits<double>::infinity();
        out += csv_row({std::to_string(v.t), fmt_from_log(v.log_p), fmt_from_log(log_v),
                        fmt_from_log(v.log_p + std::log(v.se_rel)),
                        fmt_from_log(v.log_p + std::log(v.bound_rel)),
                        fmt_from_log(v.log_p + std::log(v.d_mean)), verdict_for(v, se_band),
                        fmt_from_log(pt->log_p - pt->log_r), fmt_double(v.v_over_p())});
    }
    return out;
}

std::string detect_text(const std::vector<double>& k, int n, double radius, const SVector& s,
                        double beta, double sigma) {
    std::ostringstream os;
    os << "beta=" << fmt_double(beta) << "\n";
    os << "sigma=" << fmt_double(sigma) << "\n";
    os << "n=" << n << "\n";
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            os << "k_" << i + 1 << "_" << j + 1 << "="
               << fmt_double(k[static_cast<std::size_t>(i) * n + j]) << "\n";
    os << "spectral_radius=" << fmt_double(radius) << "\n";
    os << "diverged=" << (s.diverged ? "true" : "false") << "\n";
    os << "ill_conditioned=" << (s.ill_conditioned ? "true" : "false") << "\n";
    for (int i = 0; i < n; ++i)
        os << "s_" << i + 1 << "="
           << (s.diverged ? std::string("inf") : fmt_double(s.s[static_cast<std::size_t>(i)]))
           << "\n";
    os << "verdict=" << (radius < 1.0 ? "overvalued" : "fundamental") << "\n";
    return os.str();
}

std::string transition_csv(const TransitionReport& rep) {
    std::string out = csv_row({"t", "w", "H_1", "r", "regime"});
    for (const TransitionRow& row : rep.rows)
        out += csv_row({std::to_string(row.t), fmt_double(row.w), fmt_double(row.h1),
                        fmt_double(row.r), row.malthusian ? "malthusian" : "modern"});
    return out;
}

std::string pathology_csv(const std::vector<PathologyRow>& rows) {
    std::string out = csv_row({"t", "R", "lower_term", "asymptote", "ratio"});
    for (const PathologyRow& row : rows)
        out += csv_row({std::to_string(row.t), fmt_double(row.r_gross),
                        fmt_double(row.lower_term), fmt_double(row.asymptote),
                        fmt_double(row.ratio)});
    return out;
}

std::string urban_sigma_csv(const UrbanScenario& sc) {
    std::string out = csv_row({"t", "sigma_F"});
    for (std::size_t i = 0; i < sc.sigma_f.size(); ++i)
        out += csv_row({std::to_string(i), fmt_double(sc.sigma_f[i])});
    return out;
}

std::string manifest_json(const std::string& command, const std::string& scenario,
                          const std::string& config_text, std::uint64_t seed,
                          const std::vector<std::string>& outputs) {
    nlohmann::json j;
    j["artifact_version"] = "1";
    j["command"] = command;
    j["scenario"] = scenario;
    j["seed"] = seed;
    j["config_hash"] = config_hash_hex(config_text, seed, command, scenario);
    j["config"] = config_text;
    j["outputs"] = outputs;
    j["timestamp"] = static_cast<long long>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
    return j.dump(2) + "\n";
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    std::filesystem::path p = std::filesystem::path(dir) / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::config, "cannot open output file: " + p.string());
    out << content;
    if (!out) fail(errc::config, "failed writing output file: " + p.string());
}

}  // namespace landval
