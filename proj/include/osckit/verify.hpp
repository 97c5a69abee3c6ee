#pragma once

// Numerical experiments: sandwich checks at a fixed grid and resolution sweeps
// that track norm ratios as the grid is refined. Every verdict is a pure
// function of the numbers stored in the report.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "osckit/norms.hpp"
#include "osckit/testfn.hpp"

namespace osckit {

inline constexpr const char* kReportSchema = "osckit-report/1";

// bmo_m at n = 64 on a rank-2 grid enumerates 2 * 4096^2 = 2^25 candidates.
inline constexpr std::uint64_t kExperimentBudget = std::uint64_t{1} << 25;

struct SweepResult {
  std::string metric_name;
  std::vector<std::size_t> grid_sizes;
  std::vector<double> values;
  nlohmann::json witness_spec;
  std::string criterion;
  bool pass = false;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json params;
  std::vector<SweepResult> sweeps;
  std::vector<std::pair<std::string, double>> numbers;
  bool pass = false;
  std::string criterion;

  double number(const std::string& name) const;
  const SweepResult& sweep(const std::string& metric) const;

  nlohmann::json to_json() const;
  // experiment,metric,n,value rows; scalar numbers use an empty n column and
  // the final "pass" row holds the verdict as 1 or 0.
  std::string to_csv() const;
};

enum class LogRectFamily {
  DyadicSquares,  // arc(0, n/2^k) on every axis, k = 1 .. log2 n
  ThinStrips,     // full circle on every axis but one, which gets arc(0, 1)
};

LogRectFamily parse_family(const std::string& name);
std::string to_string(LogRectFamily family);
std::vector<PeriodicRect> log_rect_family(LogRectFamily family, const Dims& dims);

struct ExperimentOptions {
  SweepOptions sweep{EnumMode::Exact, kExperimentBudget, 1};
  double slack = 1e-10;
};

// star <= bmo <= 2 star and max-slice <= bmo <= 2 max-slice.
ExperimentReport check_equivalences(const GridFunction& f, const ExperimentOptions& opts = {});

// r(n) = max over the family of bmo(phi log_R) / bmo_m(phi log_R).
ExperimentReport embedding_gap_sweep(const nlohmann::json& phi_spec, LogRectFamily family,
                                     const std::vector<std::size_t>& grid_sizes,
                                     const ExperimentOptions& opts = {});

// d(n) = max over the family of bmo(phi log_R) / bmo(log_R).
ExperimentReport divergence_witness(const nlohmann::json& phi_spec, LogRectFamily family,
                                    const std::vector<std::size_t>& grid_sizes,
                                    const ExperimentOptions& opts = {});

// K(n) = max_f bmo_m(phi f) / ((|phi|_inf + lmo_m(phi)) bmo(f)) over the
// dyadic-square log_R family and `random_count` random dyadic functions.
ExperimentReport multiplier_upper_bound(const nlohmann::json& phi_spec,
                                        const std::vector<std::size_t>& grid_sizes,
                                        std::size_t random_count, std::uint64_t seed,
                                        const ExperimentOptions& opts = {});

// Frozen lower threshold for mean_log_ratio / bmo_m on the log_R family.
inline constexpr double kSharpnessFloor = 0.25;
// Allowed max/min spread of mean_log_ratio / bmo_m across random seeds.
inline constexpr double kUpperRatioSpread = 2.0;

ExperimentReport mean_bound_sharpness(std::size_t n, std::size_t random_count, std::uint64_t seed,
                                      const ExperimentOptions& opts = {});

// lmo(phi) and lmo_m(phi) along a resolution sweep.
inline constexpr double kPlateauTolerance = 0.10;

ExperimentReport lmo_contrast_sweep(const nlohmann::json& phi_spec,
                                    const std::vector<std::size_t>& grid_sizes,
                                    const ExperimentOptions& opts = {});

GridFunction sample_phi(const nlohmann::json& phi_spec, std::size_t n, std::size_t rank);

const std::vector<std::string>& experiment_names();

// Dispatches by name with JSON parameters; missing parameters take the
// defaults listed in the README.
ExperimentReport run_experiment(const std::string& name, const nlohmann::json& params,
                                const ExperimentOptions& opts = {});

// Growth below this relative margin is treated as rounding noise.
inline constexpr double kIncreaseMargin = 1e-9;

// True when there are at least two values and each one exceeds its
// predecessor by more than kIncreaseMargin relative.
bool strictly_increasing(const std::vector<double>& values);

}  // namespace osckit
