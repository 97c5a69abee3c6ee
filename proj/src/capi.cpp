#include "osckit/osckit.h"

#include <algorithm>
#include <memory>
#include <string>

#include "osckit/error.hpp"
#include "osckit/gfn_io.hpp"
#include "osckit/norms.hpp"
#include "osckit/report_io.hpp"
#include "osckit/testfn.hpp"
#include "osckit/verify.hpp"

struct osk_grid {
  osckit::GridFunction f;
};

struct osk_report {
  double value = 0.0;
  bool passed = true;
  std::string json;
  std::string csv;
};

namespace {

thread_local std::string g_last_error;
thread_local std::int64_t g_last_offset = -1;

template <class Fn>
osk_status guarded(Fn&& fn) {
  g_last_error.clear();
  g_last_offset = -1;
  try {
    fn();
    return OSK_OK;
  } catch (const osckit::FormatError& e) {
    g_last_error = e.what();
    g_last_offset = static_cast<std::int64_t>(e.offset());
    return OSK_ERR_FORMAT;
  } catch (const osckit::BudgetExceeded& e) {
    g_last_error = e.what();
    return OSK_ERR_BUDGET;
  } catch (const osckit::IoError& e) {
    g_last_error = e.what();
    return OSK_ERR_IO;
  } catch (const osckit::DivisionDegenerate& e) {
    g_last_error = e.what();
    return OSK_ERR_DEGENERATE;
  } catch (const osckit::InvalidArgument& e) {
    g_last_error = e.what();
    return OSK_ERR_INVALID;
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("invalid JSON: ") + e.what();
    return OSK_ERR_INVALID;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return OSK_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OSK_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return OSK_ERR_INTERNAL;
  }
}

osk_status null_arg(const char* what) {
  g_last_error = std::string(what) + " must not be NULL";
  g_last_offset = -1;
  return OSK_ERR_INVALID;
}

osckit::SweepOptions to_sweep(const osk_options* opts, const osckit::SweepOptions& fallback) {
  if (!opts) return fallback;
  osckit::SweepOptions s;
  s.mode = opts->mode == OSK_MODE_DYADIC ? osckit::EnumMode::Dyadic : osckit::EnumMode::Exact;
  s.budget = opts->budget == 0 ? fallback.budget : opts->budget;
  s.threads = opts->threads == 0 ? 1 : opts->threads;
  return s;
}

osckit::Dims to_dims(const size_t* dims, size_t rank) {
  if (!dims && rank) throw osckit::InvalidArgument("dims must not be NULL");
  return osckit::Dims(dims, dims + rank);
}

}  // namespace

extern "C" {

const char* osk_version(void) { return "1.0.0"; }
const char* osk_last_error(void) { return g_last_error.c_str(); }
int64_t osk_last_error_offset(void) { return g_last_offset; }

osk_options osk_default_options(void) { return {OSK_MODE_EXACT, osckit::kDefaultBudget, 1}; }
uint64_t osk_default_budget(void) { return osckit::kDefaultBudget; }

osk_status osk_grid_new(const size_t* dims, size_t rank, const double* values, osk_grid** out) {
  if (!out) return null_arg("out");
  if (!values) return null_arg("values");
  return guarded([&] {
    osckit::Dims d = to_dims(dims, rank);
    const std::size_t n = osckit::cell_count(d);
    *out = new osk_grid{osckit::GridFunction(std::move(d), std::vector<double>(values, values + n))};
  });
}

osk_status osk_grid_generate(const size_t* dims, size_t rank, const char* spec_json, osk_grid** out) {
  if (!out) return null_arg("out");
  if (!spec_json) return null_arg("spec_json");
  return guarded([&] {
    *out = new osk_grid{osckit::generate(nlohmann::json::parse(spec_json), to_dims(dims, rank))};
  });
}

osk_status osk_grid_load(const char* path, osk_grid** out) {
  if (!out) return null_arg("out");
  if (!path) return null_arg("path");
  return guarded([&] { *out = new osk_grid{osckit::read_gfn1(path)}; });
}

osk_status osk_grid_decode(const uint8_t* bytes, size_t size, osk_grid** out) {
  if (!out) return null_arg("out");
  if (!bytes && size) return null_arg("bytes");
  return guarded([&] { *out = new osk_grid{osckit::decode_gfn1({bytes, size})}; });
}

osk_status osk_grid_save(const osk_grid* grid, const char* path) {
  if (!grid) return null_arg("grid");
  if (!path) return null_arg("path");
  return guarded([&] { osckit::write_gfn1(path, grid->f); });
}

osk_status osk_grid_encode(const osk_grid* grid, uint8_t* buf, size_t capacity, size_t* needed) {
  if (!grid) return null_arg("grid");
  if (!needed) return null_arg("needed");
  return guarded([&] {
    const std::vector<std::uint8_t> bytes = osckit::encode_gfn1(grid->f);
    *needed = bytes.size();
    if (buf && capacity >= bytes.size()) std::copy(bytes.begin(), bytes.end(), buf);
  });
}

size_t osk_grid_rank(const osk_grid* grid) { return grid ? grid->f.rank() : 0; }
size_t osk_grid_dim(const osk_grid* grid, size_t axis) {
  return grid && axis < grid->f.rank() ? grid->f.dim(axis) : 0;
}
size_t osk_grid_size(const osk_grid* grid) { return grid ? grid->f.size() : 0; }
const double* osk_grid_values(const osk_grid* grid) { return grid ? grid->f.values().data() : nullptr; }
void osk_grid_free(osk_grid* grid) { delete grid; }

osk_status osk_norm(const osk_grid* grid, const char* norm, const osk_options* opts, osk_report** out) {
  if (!out) return null_arg("out");
  if (!grid) return null_arg("grid");
  if (!norm) return null_arg("norm");
  return guarded([&] {
    const osckit::NormReport r =
        osckit::compute_norm(grid->f, osckit::parse_norm(norm), to_sweep(opts, osckit::SweepOptions{}));
    auto rep = std::make_unique<osk_report>();
    rep->value = r.value;
    rep->json = osckit::to_json(r).dump(2);
    rep->csv = "norm,mode,value,rect_count\n" + std::string(osckit::to_string(r.norm)) + ',' +
               std::string(osckit::to_string(r.mode)) + ',' + nlohmann::json(r.value).dump() + ',' +
               std::to_string(r.rect_count) + '\n';
    *out = rep.release();
  });
}

osk_status osk_experiment(const char* name, const char* params_json, const osk_options* opts,
                          osk_report** out) {
  if (!out) return null_arg("out");
  if (!name) return null_arg("name");
  return guarded([&] {
    const nlohmann::json params =
        params_json && *params_json ? nlohmann::json::parse(params_json) : nlohmann::json::object();
    osckit::ExperimentOptions eo;
    eo.sweep = to_sweep(opts, eo.sweep);
    const osckit::ExperimentReport r = osckit::run_experiment(name, params, eo);
    auto rep = std::make_unique<osk_report>();
    rep->passed = r.pass;
    rep->value = r.pass ? 1.0 : 0.0;
    rep->json = r.to_json().dump(2);
    rep->csv = r.to_csv();
    *out = rep.release();
  });
}

double osk_report_value(const osk_report* report) { return report ? report->value : 0.0; }
int osk_report_passed(const osk_report* report) { return report && report->passed ? 1 : 0; }
const char* osk_report_json(const osk_report* report) { return report ? report->json.c_str() : ""; }
const char* osk_report_csv(const osk_report* report) { return report ? report->csv.c_str() : ""; }
void osk_report_free(osk_report* report) { delete report; }

const char* osk_experiment_names(void) {
  static const std::string joined = [] {
    std::string s;
    for (const auto& n : osckit::experiment_names()) s += (s.empty() ? "" : ",") + n;
    return s;
  }();
  return joined.c_str();
}

}  // extern "C"
