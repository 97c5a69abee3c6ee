// osckit command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "osckit/osckit.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInternal = 4;

int exit_code(osk_status s) {
  switch (s) {
    case OSK_OK: return kExitOk;
    case OSK_ERR_BUDGET: return kExitBudget;
    case OSK_ERR_INVALID:
    case OSK_ERR_FORMAT:
    case OSK_ERR_IO: return kExitUsage;
    default: return kExitInternal;
  }
}

int report_error(osk_status s) {
  std::cerr << "osckit: " << osk_last_error() << '\n';
  return exit_code(s);
}

struct SweepFlags {
  std::string mode = "exact";
  std::optional<std::uint64_t> budget;
  unsigned threads = 1;
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& f) {
  cmd->add_option("--mode", f.mode, "Rectangle enumeration")
      ->check(CLI::IsMember({"exact", "dyadic"}))
      ->capture_default_str();
  cmd->add_option("--budget", f.budget, "Maximum number of candidates per norm");
  cmd->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

osk_options to_options(const SweepFlags& f, std::uint64_t default_budget) {
  osk_options o = osk_default_options();
  o.mode = f.mode == "dyadic" ? OSK_MODE_DYADIC : OSK_MODE_EXACT;
  o.budget = f.budget.value_or(default_budget);
  o.threads = f.threads;
  return o;
}

int emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return kExitOk;
  }
  std::ofstream os(out, std::ios::binary);
  os << text;
  if (!text.empty() && text.back() != '\n') os << '\n';
  if (!os) {
    std::cerr << "osckit: cannot write " << out << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_gen(const std::vector<std::size_t>& dims, const std::string& gen,
            std::optional<std::uint64_t> seed, const std::string& out) {
  nlohmann::json spec;
  try {
    spec = nlohmann::json::parse(gen);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "osckit: --gen is not valid JSON: " << e.what() << '\n';
    return kExitUsage;
  }
  if (seed && spec.is_object() && spec.value("kind", "") == "random") spec["seed"] = *seed;
  osk_grid* grid = nullptr;
  if (osk_status s = osk_grid_generate(dims.data(), dims.size(), spec.dump().c_str(), &grid))
    return report_error(s);
  osk_status s = OSK_OK;
  if (!out.empty()) {
    s = osk_grid_save(grid, out.c_str());
  } else {
    std::size_t needed = 0;
    s = osk_grid_encode(grid, nullptr, 0, &needed);
    std::vector<std::uint8_t> bytes(needed);
    if (s == OSK_OK) s = osk_grid_encode(grid, bytes.data(), bytes.size(), &needed);
    if (s == OSK_OK) std::cout.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  }
  osk_grid_free(grid);
  return s == OSK_OK ? kExitOk : report_error(s);
}

int cmd_norm(const std::string& path, const std::string& norm, const SweepFlags& flags,
             const std::string& format, const std::string& out) {
  osk_grid* grid = nullptr;
  if (osk_status s = osk_grid_load(path.c_str(), &grid)) return report_error(s);
  const osk_options opts = to_options(flags, osk_default_budget());
  osk_report* rep = nullptr;
  osk_status s = osk_norm(grid, norm.c_str(), &opts, &rep);
  osk_grid_free(grid);
  if (s != OSK_OK) return report_error(s);
  const int rc = emit(format == "csv" ? osk_report_csv(rep) : osk_report_json(rep), out);
  osk_report_free(rep);
  return rc;
}

int cmd_experiment(const std::string& name, const std::string& params_text,
                   std::optional<std::uint64_t> seed, const std::vector<std::size_t>& sizes,
                   const SweepFlags& flags, const std::string& format, const std::string& out,
                   bool strict) {
  nlohmann::json params = nlohmann::json::object();
  if (!params_text.empty()) {
    try {
      params = nlohmann::json::parse(params_text);
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "osckit: --params is not valid JSON: " << e.what() << '\n';
      return kExitUsage;
    }
    if (!params.is_object()) {
      std::cerr << "osckit: --params must be a JSON object\n";
      return kExitUsage;
    }
  }
  if (seed) params["seed"] = *seed;
  if (!sizes.empty()) params["sizes"] = sizes;

  // Experiments default to a budget large enough for n = 64 on rank-2 grids.
  const osk_options opts = to_options(flags, 0);
  osk_report* rep = nullptr;
  if (osk_status s = osk_experiment(name.c_str(), params.dump().c_str(), &opts, &rep))
    return report_error(s);
  int rc = emit(format == "csv" ? osk_report_csv(rep) : osk_report_json(rep), out);
  if (rc == kExitOk && strict && !osk_report_passed(rep)) rc = kExitFail;
  osk_report_free(rep);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rectangle mean-oscillation norms on periodic grids"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(osk_version()));

  std::vector<std::size_t> dims;
  std::string gen, out, norm = "bmo", path, format = "json", experiment, params;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> sizes;
  SweepFlags flags;
  bool strict = false;

  auto* g = app.add_subcommand("gen", "Generate a test function and write it as GFN1");
  g->add_option("--dims", dims, "Axis lengths, e.g. 16,16")->required()->delimiter(',');
  g->add_option("--gen", gen, "Generator spec as JSON")->required();
  g->add_option("--seed", seed, "Seed for random generators");
  g->add_option("--out", out, "Output file (default: stdout)");

  auto* n = app.add_subcommand("norm", "Compute a norm of a GFN1 file");
  n->add_option("file", path, "GFN1 input")->required();
  n->add_option("--norm", norm, "bmo, star, lmo, bmo_m, lmo_m, lmo_inv, slice or mean_log_ratio")
      ->capture_default_str();
  n->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  n->add_option("--out", out, "Output file (default: stdout)");
  add_sweep_flags(n, flags);

  auto* v = app.add_subcommand("verify", "Run a verification experiment");
  v->add_option("--experiment", experiment, std::string("One of: ") + osk_experiment_names())->required();
  v->add_option("--params", params, "Experiment parameters as a JSON object");
  v->add_option("--seed", seed, "Seed for random suites");
  v->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  v->add_option("--out", out, "Output file (default: stdout)");
  v->add_flag("--strict", strict, "Exit 1 when the verdict is fail");
  add_sweep_flags(v, flags);

  auto* s = app.add_subcommand("sweep", "Run an experiment over grid sizes and print CSV");
  s->add_option("--experiment", experiment, std::string("One of: ") + osk_experiment_names())->required();
  s->add_option("--sizes", sizes, "Grid sizes, e.g. 16,32,64")->delimiter(',');
  s->add_option("--params", params, "Experiment parameters as a JSON object");
  s->add_option("--seed", seed, "Seed for random suites");
  s->add_option("--out", out, "Output file (default: stdout)");
  s->add_flag("--strict", strict, "Exit 1 when the verdict is fail");
  add_sweep_flags(s, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (*g) return cmd_gen(dims, gen, seed, out);
  if (*n) return cmd_norm(path, norm, flags, format, out);
  if (*v) return cmd_experiment(experiment, params, seed, {}, flags, format, out, strict);
  return cmd_experiment(experiment, params, seed, sizes, flags, "csv", out, strict);
}
