#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "landval/process.hpp"
#include "landval/production.hpp"
#include "landval/valuation.hpp"

namespace landval {

// Parsed run configuration. Sections: [technology] [process] [preferences]
// [valuation] [run]. '#' starts a comment; scalar values accept fraction
// syntax like 2/3; matrix values are row-major with ';' between rows.
// Unknown sections or keys are rejected with the offending line number.
struct RunConfig {
    std::string source_text;

    std::optional<ProductionModel> model;
    std::optional<Process> process;

    double beta = 0.5;

    long val_horizon = 2000;
    long n_paths = 10000;
    double tail_tolerance = 1e-6;
    double mrt_threshold = 0.0;  // <= 0: auto
    double se_band = 3.0;

    std::uint64_t seed = 1;
    int horizon = 200;
    int stride = 1;
    int parallelism = 1;
    std::string scenario;

    std::optional<double> g1;  // sector TFP growth (transition / urban scenarios)
    std::optional<double> g2;

    ValuationConfig valuation() const {
        ValuationConfig v;
        v.horizon = val_horizon;
        v.n_paths = n_paths;
        v.seed = seed;
        v.tail_tolerance = tail_tolerance;
        v.mrt_threshold = mrt_threshold;
        v.se_band = se_band;
        v.parallelism = parallelism;
        return v;
    }

    const ProductionModel& require_model() const;
    const Process& require_process() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace landval
