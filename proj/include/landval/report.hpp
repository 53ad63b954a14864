#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "landval/equilibrium.hpp"
#include "landval/process.hpp"
#include "landval/scenarios.hpp"
#include "landval/valuation.hpp"

namespace landval {

// Shortest round-trip decimal representation of a finite double.
std::string fmt_double(double v);

// Decimal text for exp(log_value), usable beyond double range: values whose
// exponent leaves [-308, 308] are printed as synthetic scientific notation
// derived from log10. -inf prints as 0.
std::string fmt_from_log(double log_value);

std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull);

// Hash over the raw config text plus the effective seed, command, and
// scenario; excludes timestamps so reruns of one configuration agree.
std::string config_hash_hex(const std::string& config_text, std::uint64_t seed,
                            const std::string& command, const std::string& scenario);

std::string csv_row(const std::vector<std::string>& cells);

std::string equilibrium_csv(const ProductivityPath& path, const EquilibriumPath& eq);
std::string valuation_csv(const EquilibriumPath& eq, const std::vector<ValuationResult>& vals,
                          double se_band);
std::string detect_text(const std::vector<double>& k, int n, double radius, const SVector& s,
                        double beta, double sigma);
std::string transition_csv(const TransitionReport& rep);
std::string pathology_csv(const std::vector<PathologyRow>& rows);
std::string urban_sigma_csv(const UrbanScenario& sc);

std::string manifest_json(const std::string& command, const std::string& scenario,
                          const std::string& config_text, std::uint64_t seed,
                          const std::vector<std::string>& outputs);

void write_file(const std::string& dir, const std::string& name, const std::string& content);

}  // namespace landval
