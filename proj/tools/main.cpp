#include <cstdio>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "landval/config.hpp"
#include "landval/equilibrium.hpp"
#include "landval/errors.hpp"
#include "landval/report.hpp"
#include "landval/scenarios.hpp"
#include "landval/valuation.hpp"

namespace {

using namespace landval;

struct Shared {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool quiet = false;
};

struct Outputs {
    std::vector<std::pair<std::string, std::string>> files;

    void add(std::string name, std::string content) {
        files.emplace_back(std::move(name), std::move(content));
    }
    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& [n, c] : files) out.push_back(n);
        return out;
    }
};

void emit(const Shared& sh, const std::string& line) {
    if (!sh.quiet) std::printf("%s\n", line.c_str());
}

std::string kv(const std::string& key, const std::string& value) { return key + "=" + value + "\n"; }

// The spectral criterion needs the constant outer elasticity, so it is
// defined for the CES family only and requires sigma > 1.
double detect_sigma(const ProductionModel& m) {
    if (m.kind() == TechKind::ces && m.ces_params().sigma > 1.0) return m.ces_params().sigma;
    if (m.kind() == TechKind::ces || m.kind() == TechKind::cobb_douglas)
        fail(errc::config, "criterion requires sigma > 1");
    fail(errc::config, "criterion requires sigma > 1 and a CES technology");
}

MarkovMultiplicative detect_chain(const Process& proc) {
    if (std::holds_alternative<MarkovMultiplicative>(proc))
        return std::get<MarkovMultiplicative>(proc);
    return as_single_state_chain(std::get<DeterministicExponential>(proc));
}

int run_simulate(const RunConfig& rc, const Shared& sh, Outputs& out) {
    const ProductionModel& m = rc.require_model();
    ProductivityPath path = sample_path(rc.require_process(), rc.horizon, rc.seed);
    EquilibriumPath eq = compute_path(m, path, rc.beta);
    out.add("equilibrium.csv", equilibrium_csv(path, eq));
    emit(sh, "periods=" + std::to_string(eq.points.size()));
    return 0;
}

int run_detect(const RunConfig& rc, const Shared& sh, Outputs& out) {
    double sigma = detect_sigma(rc.require_model());
    MarkovMultiplicative chain = detect_chain(rc.require_process());
    std::vector<double> k = k_matrix(chain, sigma);
    double radius = spectral_radius(k, chain.n);
    SVector s = solve_s(k, chain.n);
    out.add("detect.txt", detect_text(k, chain.n, radius, s, rc.beta, sigma));
    emit(sh, "spectral_radius=" + fmt_double(radius));
    emit(sh, std::string("verdict=") + (radius < 1.0 ? "overvalued" : "fundamental"));
    return 0;
}

int run_valuate(const RunConfig& rc, const Shared& sh, Outputs& out) {
    const ProductionModel& m = rc.require_model();
    const Process& proc = rc.require_process();
    ProductivityPath path = sample_path(proc, rc.horizon, rc.seed);
    EquilibriumPath eq = compute_path(m, path, rc.beta);
    ValuationConfig vcfg = rc.valuation();

    std::vector<ValuationResult> vals;
    for (int t = 0; t <= rc.horizon; t += rc.stride) {
        if (std::holds_alternative<MarkovMultiplicative>(proc))
            vals.push_back(fundamental_value_mc(m, std::get<MarkovMultiplicative>(proc), rc.beta,
                                                path, t, vcfg));
        else
            vals.push_back(fundamental_value_deterministic(
                m, std::get<DeterministicExponential>(proc), rc.beta, t, vcfg));
    }
    out.add("equilibrium.csv", equilibrium_csv(path, eq));
    out.add("valuation.csv", valuation_csv(eq, vals, rc.se_band));

    int code = 0;
    for (const ValuationResult& v : vals)
        if (!v.certified) code = 3;
    if (code != 0)
        out.add("diagnostics.txt",
                "no tail certificate: " + vals.front().note +
                    "\nestimates are reported but carry no truncation guarantee\n");
    emit(sh, "valuations=" + std::to_string(vals.size()));
    emit(sh, std::string("certified=") + (code == 0 ? "true" : "false"));
    return code;
}

int run_scenario(const RunConfig& rc, const Shared& sh, Outputs& out) {
    const std::string& name = rc.scenario;
    if (name == "transition") {
        const ProductionModel& m = rc.require_model();
        if (m.kind() != TechKind::two_sector)
            fail(errc::config, "transition scenario needs a two_sector technology");
        if (!rc.g1 || !rc.g2) fail(errc::config, "transition scenario needs run.g1 and run.g2");
        const TwoSectorParams& p = m.two_sector_params();
        TransitionReport rep =
            malthus_to_modern(p.alpha, p.a1, p.a2, *rc.g1, *rc.g2, rc.beta, rc.horizon);
        out.add("transition.csv", transition_csv(rep));
        std::string summary;
        summary += kv("t_star", fmt_double(rep.t_star));
        summary += kv("switch_period", std::to_string(rep.switch_period));
        summary += kv("permanent_malthus", rep.permanent_malthus ? "true" : "false");
        summary += kv("condition_ratio", fmt_double(rep.condition_ratio));
        summary += kv("condition_partial", fmt_double(rep.condition_partial));
        summary += kv("verdict", rep.verdict);
        out.add("summary.txt", summary);
        emit(sh, "verdict=" + rep.verdict);
        return 0;
    }
    if (name == "recurrent") {
        RecurrentScenario sc = recurrent_scenario(rc.seed, rc.horizon, rc.valuation());
        out.add("equilibrium.csv", equilibrium_csv(sc.path, sc.equilibrium));
        out.add("valuation.csv", valuation_csv(sc.equilibrium, {sc.valuation0}, rc.se_band));
        out.add("detect.txt", detect_text(sc.k, sc.process.n, sc.radius, sc.s, sc.beta,
                                          sc.model.ces_params().sigma));
        std::string summary;
        summary += kv("spectral_radius", fmt_double(sc.radius));
        summary += kv("radius_below_one", sc.radius_below_one ? "true" : "false");
        summary += kv("log_price_rent_slope", fmt_double(sc.log_price_rent_slope));
        summary += kv("slope_positive", sc.slope_positive ? "true" : "false");
        summary += kv("valuation_route", route_name(sc.valuation0.route));
        summary += kv("verdict", sc.verdict);
        out.add("summary.txt", summary);
        emit(sh, "verdict=" + sc.verdict);
        return 0;
    }
    if (name == "urban") {
        const ProductionModel& m = rc.require_model();
        if (m.kind() != TechKind::urban) fail(errc::config, "urban scenario needs an urban technology");
        if (!rc.g1 || !rc.g2) fail(errc::config, "urban scenario needs run.g1 and run.g2");
        UrbanScenario sc = urban_scenario(m.urban_params(), *rc.g1, *rc.g2, rc.beta, rc.horizon,
                                          rc.stride, rc.valuation());
        ProductivityPath path = sample_path(Process{sc.reduced_process}, rc.horizon, rc.seed);
        out.add("equilibrium.csv", equilibrium_csv(path, sc.equilibrium));
        out.add("valuation.csv", valuation_csv(sc.equilibrium, sc.valuations, rc.se_band));
        out.add("urban_sigma.csv", urban_sigma_csv(sc));
        std::string summary;
        summary += kv("lambda", fmt_double(sc.reduction.lambda));
        summary += kv("a_h0", fmt_double(sc.reduction.a_h));
        summary += kv("a_x0", fmt_double(sc.reduction.a_x));
        summary += kv("g_h", fmt_double(sc.reduced_process.g_h));
        summary += kv("g_x", fmt_double(sc.reduced_process.g_x));
        summary += kv("sigma_f_final", fmt_double(sc.sigma_f.back()));
        summary += kv("valuation_route", route_name(sc.valuations.front().route));
        summary += kv("verdict", sc.verdict);
        out.add("summary.txt", summary);
        emit(sh, "verdict=" + sc.verdict);
        return 0;
    }
    if (name == "pathology") {
        const ProductionModel& m = rc.require_model();
        if (m.kind() != TechKind::ces)
            fail(errc::config, "pathology scenario needs a ces technology");
        const Process& proc = rc.require_process();
        if (!std::holds_alternative<DeterministicExponential>(proc))
            fail(errc::config, "pathology scenario needs a deterministic process");
        const DeterministicExponential& d = std::get<DeterministicExponential>(proc);
        PathologyScenario sc = pathology_scenario(m.ces_params().alpha, m.ces_params().sigma,
                                                  d.g_h, d.g_x, rc.beta, rc.horizon);
        out.add("pathology.csv", pathology_csv(sc.rows));
        std::string summary;
        summary += kv("r_growth_factor", fmt_double(sc.r_growth_factor));
        summary += kv("final_ratio", fmt_double(sc.final_ratio));
        summary += kv("verdict", sc.verdict);
        out.add("summary.txt", summary);
        emit(sh, "verdict=" + sc.verdict);
        return 0;
    }
    fail(errc::config, "run.scenario: unknown scenario \"" + name +
                           "\" (expected transition, recurrent, urban, or pathology)");
}

int dispatch(const std::string& command, const Shared& sh) {
    RunConfig rc;
    int code = 0;
    Outputs out;
    std::string scenario_name;
    try {
        rc = load_config(sh.config_path);
        if (sh.seed_given) rc.seed = sh.seed;
        scenario_name = rc.scenario;
        if (command == "simulate")
            code = run_simulate(rc, sh, out);
        else if (command == "detect")
            code = run_detect(rc, sh, out);
        else if (command == "valuate")
            code = run_valuate(rc, sh, out);
        else
            code = run_scenario(rc, sh, out);
    } catch (const Error& e) {
        code = (e.code() == errc::config || e.code() == errc::domain) ? 2 : 3;
        out.add("diagnostics.txt", std::string(e.what()) + "\n");
        if (!sh.quiet) std::fprintf(stderr, "error: %s\n", e.what());
    } catch (const std::exception& e) {
        code = 3;
        out.add("diagnostics.txt", std::string(e.what()) + "\n");
        if (!sh.quiet) std::fprintf(stderr, "error: %s\n", e.what());
    }
    try {
        for (const auto& [name, content] : out.files) write_file(sh.out_dir, name, content);
        std::vector<std::string> names = out.names();
        names.push_back("manifest.json");
        write_file(sh.out_dir, "manifest.json",
                   manifest_json(command, scenario_name, rc.source_text, rc.seed, names));
    } catch (const std::exception& e) {
        if (!sh.quiet) std::fprintf(stderr, "error writing outputs: %s\n", e.what());
        if (code == 0) code = 2;
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic land-economy laboratory: closed-form equilibria, land valuation "
                 "with certified truncation bounds, and overvaluation diagnostics"};
    app.require_subcommand(1);

    Shared sh;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", sh.config_path, "run configuration file")->required();
        sub->add_option("--out", sh.out_dir, "output directory (default ./out)");
        sub->add_option("--seed", sh.seed, "seed override")->each([&](const std::string&) {
            sh.seed_given = true;
        });
        sub->add_flag("--quiet", sh.quiet, "suppress progress output");
    };
    add_common(app.add_subcommand("simulate", "closed-form equilibrium path to CSV"));
    add_common(app.add_subcommand("detect", "spectral overvaluation criterion"));
    add_common(app.add_subcommand("valuate", "fundamental value with certified tail bounds"));
    add_common(app.add_subcommand("scenario", "named worked example from the config"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    return dispatch(app.get_subcommands().front()->get_name(), sh);
}
