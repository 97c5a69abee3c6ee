#include "osckit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace osckit {

namespace {

const nlohmann::json& default_phi() {
  static const nlohmann::json phi = {
      {"kind", "separable"}, {"factors", {"cos", "cos"}}, {"combine", "product"}};
  return phi;
}

std::size_t log2_exact(std::size_t n) {
  if (n < 2 || (n & (n - 1)) != 0) throw InvalidArgument("grid size must be a power of two >= 2");
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

Dims square_dims(std::size_t n, std::size_t rank) { return Dims(rank, n); }

double relative_change(double from, double to) {
  if (from == 0.0) return to == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return to / from - 1.0;
}

nlohmann::json sizes_json(const std::vector<std::size_t>& sizes) { return nlohmann::json(sizes); }

}  // namespace

bool strictly_increasing(const std::vector<double>& values) {
  if (values.size() < 2) return false;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1] + kIncreaseMargin * std::abs(values[i - 1]))) return false;
  return true;
}

double ExperimentReport::number(const std::string& name) const {
  for (const auto& [k, v] : numbers)
    if (k == name) return v;
  throw InvalidArgument("report has no number named '" + name + "'");
}

const SweepResult& ExperimentReport::sweep(const std::string& metric) const {
  for (const auto& s : sweeps)
    if (s.metric_name == metric) return s;
  throw InvalidArgument("report has no sweep named '" + metric + "'");
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json nums = nlohmann::json::object();
  for (const auto& [k, v] : numbers) nums[k] = v;
  nlohmann::json sw = nlohmann::json::array();
  for (const auto& s : sweeps) {
    sw.push_back({{"metric", s.metric_name},
                  {"grid_sizes", s.grid_sizes},
                  {"values", s.values},
                  {"witness", s.witness_spec},
                  {"criterion", s.criterion},
                  {"verdict", s.pass ? "pass" : "fail"}});
  }
  return {{"schema", kReportSchema},
          {"experiment", experiment},
          {"params", params},
          {"prng", kPrngId},
          {"numbers", nums},
          {"sweeps", sw},
          {"criterion", criterion},
          {"verdict", pass ? "pass" : "fail"}};
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "experiment,metric,n,value\n";
  for (const auto& s : sweeps)
    for (std::size_t i = 0; i < s.values.size(); ++i)
      os << experiment << ',' << s.metric_name << ',' << s.grid_sizes[i] << ',' << s.values[i] << '\n';
  for (const auto& [k, v] : numbers) os << experiment << ',' << k << ",," << v << '\n';
  os << experiment << ",pass,," << (pass ? 1 : 0) << '\n';
  return os.str();
}

LogRectFamily parse_family(const std::string& name) {
  if (name == "dyadic_squares") return LogRectFamily::DyadicSquares;
  if (name == "thin_strips") return LogRectFamily::ThinStrips;
  throw InvalidArgument("unknown rectangle family '" + name + "' (valid: dyadic_squares, thin_strips)");
}

std::string to_string(LogRectFamily family) {
  return family == LogRectFamily::DyadicSquares ? "dyadic_squares" : "thin_strips";
}

std::vector<PeriodicRect> log_rect_family(LogRectFamily family, const Dims& dims) {
  std::vector<PeriodicRect> out;
  if (family == LogRectFamily::DyadicSquares) {
    const std::size_t n = dims.at(0);
    for (std::size_t n_j : dims)
      if (n_j != n) throw InvalidArgument("dyadic squares need equal axis lengths");
    for (std::size_t k = 1, len = n / 2; len >= 1; ++k, len /= 2) {
      std::vector<Arc> arcs;
      for (std::size_t j = 0; j < dims.size(); ++j) arcs.push_back(Arc{j, 0, len});
      out.emplace_back(std::move(arcs));
      if (len == 1) break;
    }
    return out;
  }
  for (std::size_t thin = 0; thin < dims.size(); ++thin) {
    std::vector<Arc> arcs;
    for (std::size_t j = 0; j < dims.size(); ++j)
      arcs.push_back(j == thin ? Arc{j, 0, 1} : Arc{j, 0, dims[j]});
    out.emplace_back(std::move(arcs));
  }
  return out;
}

GridFunction sample_phi(const nlohmann::json& phi_spec, std::size_t n, std::size_t rank) {
  if (phi_spec.is_object() && phi_spec.value("kind", "") == "separable" && phi_spec.contains("factors") &&
      phi_spec.at("factors").size() > 1)
    rank = phi_spec.at("factors").size();
  return generate(phi_spec, square_dims(n, rank));
}

ExperimentReport check_equivalences(const GridFunction& f, const ExperimentOptions& opts) {
  ExperimentReport rep;
  rep.experiment = "equivalences";
  rep.params = {{"dims", f.dims()}, {"mode", std::string(to_string(opts.sweep.mode))}};
  rep.criterion = "star <= bmo <= 2 star and max_slice <= bmo <= 2 max_slice";

  const double star = star_norm(f, opts.sweep).value;
  const double bmo = bmo_norm(f, opts.sweep).value;
  const double tol = opts.slack * std::max(1.0, bmo);
  rep.numbers = {{"star", star}, {"bmo", bmo}};
  bool ok = star <= bmo + tol && bmo <= 2.0 * star + tol;
  if (f.rank() >= 2) {
    const double slice_max = max_slice_bmo_norm(f, opts.sweep).value;
    const double bmo_m = bmo_m_norm(f, opts.sweep).value;
    rep.numbers.emplace_back("max_slice", slice_max);
    rep.numbers.emplace_back("bmo_m", bmo_m);
    ok = ok && slice_max <= bmo + tol && bmo <= 2.0 * slice_max + tol;
  }
  rep.pass = ok;
  return rep;
}

ExperimentReport embedding_gap_sweep(const nlohmann::json& phi_spec, LogRectFamily family,
                                     const std::vector<std::size_t>& grid_sizes,
                                     const ExperimentOptions& opts) {
  ExperimentReport rep;
  rep.experiment = "embedding_gap";
  const nlohmann::json witness = {{"phi", phi_spec}, {"family", to_string(family)}};
  rep.params = {{"phi", phi_spec}, {"family", to_string(family)}, {"sizes", sizes_json(grid_sizes)}};
  rep.criterion = "r(n) strictly increasing";

  SweepResult r{"r", grid_sizes, {}, witness, rep.criterion, false};
  SweepResult num{"bmo_at_max", grid_sizes, {}, witness, "recorded", true};
  SweepResult den_lo{"bmo_m_min", grid_sizes, {}, witness, "recorded", true};
  SweepResult den_hi{"bmo_m_max", grid_sizes, {}, witness, "recorded", true};
  for (std::size_t n : grid_sizes) {
    const GridFunction phi = sample_phi(phi_spec, n, 2);
    double best = 0.0, best_num = 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const PeriodicRect& R : log_rect_family(family, phi.dims())) {
      const GridFunction g = multiply(phi, make_log_rect(phi.dims(), R));
      const double b = bmo_norm(g, opts.sweep).value;
      const double bm = bmo_m_norm(g, opts.sweep).value;
      if (bm == 0.0) continue;
      lo = std::min(lo, bm);
      hi = std::max(hi, bm);
      if (b / bm > best) {
        best = b / bm;
        best_num = b;
      }
    }
    r.values.push_back(best);
    num.values.push_back(best_num);
    den_lo.values.push_back(std::isfinite(lo) ? lo : 0.0);
    den_hi.values.push_back(hi);
  }
  r.pass = strictly_increasing(r.values);
  rep.pass = r.pass;
  rep.sweeps = {r, num, den_lo, den_hi};
  return rep;
}

ExperimentReport divergence_witness(const nlohmann::json& phi_spec, LogRectFamily family,
                                    const std::vector<std::size_t>& grid_sizes,
                                    const ExperimentOptions& opts) {
  ExperimentReport rep;
  rep.experiment = "divergence";
  const nlohmann::json witness = {{"phi", phi_spec}, {"family", to_string(family)}};
  rep.params = {{"phi", phi_spec}, {"family", to_string(family)}, {"sizes", sizes_json(grid_sizes)}};
  rep.criterion = "d(n) strictly increasing";

  SweepResult d{"d", grid_sizes, {}, witness, rep.criterion, false};
  for (std::size_t n : grid_sizes) {
    const GridFunction phi = sample_phi(phi_spec, n, 2);
    double best = 0.0;
    for (const PeriodicRect& R : log_rect_family(family, phi.dims())) {
      const GridFunction L = make_log_rect(phi.dims(), R);
      const double denom = bmo_norm(L, opts.sweep).value;
      if (denom == 0.0) throw DivisionDegenerate("log_R has zero bmo norm");
      best = std::max(best, bmo_norm(multiply(phi, L), opts.sweep).value / denom);
    }
    d.values.push_back(best);
  }
  d.pass = strictly_increasing(d.values);
  rep.pass = d.pass;
  rep.sweeps = {d};
  return rep;
}

ExperimentReport multiplier_upper_bound(const nlohmann::json& phi_spec,
                                        const std::vector<std::size_t>& grid_sizes,
                                        std::size_t random_count, std::uint64_t seed,
                                        const ExperimentOptions& opts) {
  ExperimentReport rep;
  rep.experiment = "multiplier_bound";
  const nlohmann::json witness = {{"phi", phi_spec}, {"family", "dyadic_squares+random"},
                                  {"random_count", random_count}, {"seed", seed}};
  rep.params = {{"phi", phi_spec}, {"sizes", sizes_json(grid_sizes)},
                {"random_count", random_count}, {"seed", seed}};
  rep.criterion = "K finite at every size and K(last)/K(first) in [0.5, 2]";

  SweepResult k_sweep{"K", grid_sizes, {}, witness, rep.criterion, false};
  SweepResult lower{"lower_probe", grid_sizes, {}, witness, "recorded", true};
  SweepResult phi_sup{"phi_sup", grid_sizes, {}, witness, "recorded", true};
  SweepResult phi_lmo_m{"phi_lmo_m", grid_sizes, {}, witness, "recorded", true};
  double skipped = 0;
  for (std::size_t n : grid_sizes) {
    const GridFunction phi = sample_phi(phi_spec, n, 2);
    const double sup = phi.sup_abs();
    const double lm = lmo_m_norm(phi, opts.sweep).value;
    const double scale = sup + lm;

    std::vector<GridFunction> family;
    for (const PeriodicRect& R : log_rect_family(LogRectFamily::DyadicSquares, phi.dims()))
      family.push_back(make_log_rect(phi.dims(), R));
    const std::size_t log_count = family.size();
    for (std::size_t i = 0; i < random_count; ++i)
      family.push_back(make_random_dyadic(phi.dims(), log2_exact(n), 1.0, seed + i));

    double k_max = 0.0;
    double probe = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < family.size(); ++i) {
      const double bf = bmo_norm(family[i], opts.sweep).value;
      if (bf == 0.0 || scale == 0.0) {
        ++skipped;
        continue;
      }
      const GridFunction pf = multiply(phi, family[i]);
      const double bm = bmo_m_norm(pf, opts.sweep).value;
      k_max = std::max(k_max, bm / (scale * bf));
      if (i < log_count) {
        const double witness_mean = mean_log_ratio(pf, opts.sweep).value;
        if (witness_mean > 0.0) probe = std::min(probe, bm / witness_mean);
      }
    }
    k_sweep.values.push_back(k_max);
    lower.values.push_back(std::isfinite(probe) ? probe : 0.0);
    phi_sup.values.push_back(sup);
    phi_lmo_m.values.push_back(lm);
  }
  bool ok = !k_sweep.values.empty();
  for (double k : k_sweep.values) ok = ok && std::isfinite(k) && k > 0.0;
  if (ok) {
    const double q = k_sweep.values.back() / k_sweep.values.front();
    rep.numbers.emplace_back("K_ratio_last_first", q);
    ok = q >= 0.5 && q <= 2.0;
  }
  rep.numbers.emplace_back("skipped_degenerate", skipped);
  k_sweep.pass = ok;
  rep.pass = ok;
  rep.sweeps = {k_sweep, lower, phi_sup, phi_lmo_m};
  return rep;
}

ExperimentReport mean_bound_sharpness(std::size_t n, std::size_t random_count, std::uint64_t seed,
                                      const ExperimentOptions& opts) {
  ExperimentReport rep;
  rep.experiment = "mean_bound_sharpness";
  rep.params = {{"n", n}, {"random_count", random_count}, {"seed", seed}};
  rep.criterion = "c_emp >= 0.25 on the log_R family and C_mb max/min <= 2 across seeds";

  const Dims dims = square_dims(n, 2);
  double c_emp = std::numeric_limits<double>::infinity();
  double quarter = 0.0;
  for (const PeriodicRect& R : log_rect_family(LogRectFamily::DyadicSquares, dims)) {
    const GridFunction L = make_log_rect(dims, R);
    const double bm = bmo_m_norm(L, opts.sweep).value;
    if (bm == 0.0) continue;
    const double ratio = mean_log_ratio(L, opts.sweep).value / bm;
    c_emp = std::min(c_emp, ratio);
    if (R.arcs[0].len == n / 4) quarter = ratio;
  }

  const std::size_t random_n = 16;
  const Dims rdims = square_dims(random_n, 2);
  double c_max = 0.0, c_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < random_count; ++i) {
    const GridFunction f = make_random_dyadic(rdims, log2_exact(random_n), 1.0, seed + i);
    const double bm = bmo_m_norm(f, opts.sweep).value;
    if (bm == 0.0) continue;
    const double ratio = mean_log_ratio(f, opts.sweep).value / bm;
    c_max = std::max(c_max, ratio);
    c_min = std::min(c_min, ratio);
  }
  const double spread = c_min > 0.0 && std::isfinite(c_min) ? c_max / c_min
                                                            : std::numeric_limits<double>::infinity();
  rep.numbers = {{"c_emp", std::isfinite(c_emp) ? c_emp : 0.0},
                 {"ratio_quarter_square", quarter},
                 {"C_mb", c_max},
                 {"C_mb_min", std::isfinite(c_min) ? c_min : 0.0},
                 {"C_mb_spread", spread}};
  rep.pass = std::isfinite(c_emp) && c_emp >= kSharpnessFloor && spread <= kUpperRatioSpread;
  return rep;
}

ExperimentReport lmo_contrast_sweep(const nlohmann::json& phi_spec,
                                    const std::vector<std::size_t>& grid_sizes,
                                    const ExperimentOptions& opts) {
  ExperimentReport rep;
  rep.experiment = "lmo_contrast";
  rep.params = {{"phi", phi_spec}, {"sizes", sizes_json(grid_sizes)}};
  rep.criterion = "lmo strictly increasing and lmo_m within 10% between the last two sizes";

  SweepResult lmo{"lmo", grid_sizes, {}, phi_spec, "strictly increasing", false};
  SweepResult lmo_m{"lmo_m", grid_sizes, {}, phi_spec, "last two sizes within 10%", false};
  for (std::size_t n : grid_sizes) {
    const GridFunction phi = sample_phi(phi_spec, n, 2);
    lmo.values.push_back(lmo_norm(phi, opts.sweep).value);
    lmo_m.values.push_back(lmo_m_norm(phi, opts.sweep).value);
  }
  lmo.pass = strictly_increasing(lmo.values);
  if (lmo_m.values.size() >= 2) {
    const double change = relative_change(lmo_m.values[lmo_m.values.size() - 2], lmo_m.values.back());
    rep.numbers.emplace_back("lmo_m_change_last", change);
    lmo_m.pass = lmo_m.values.back() > 0.0 && std::abs(change) <= kPlateauTolerance;
  }
  if (!lmo.values.empty())
    rep.numbers.emplace_back("lmo_growth", relative_change(lmo.values.front(), lmo.values.back()));
  rep.pass = lmo.pass && lmo_m.pass;
  rep.sweeps = {lmo, lmo_m};
  return rep;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"equivalences",     "embedding_gap",
                                                 "divergence",       "multiplier_bound",
                                                 "mean_bound_sharpness", "lmo_contrast"};
  return names;
}

namespace {

ExperimentReport dispatch(const std::string& name, const nlohmann::json& p, const ExperimentOptions& opts) {
  try {
    const nlohmann::json phi = p.value("phi", default_phi());
    auto sizes = [&](std::vector<std::size_t> fallback) {
      return p.value("sizes", fallback);
    };
    if (name == "equivalences") {
      const Dims dims = p.value("dims", Dims{8, 8});
      std::size_t depth = 0;
      while (depth < 3 && (*std::min_element(dims.begin(), dims.end()) >> (depth + 1)) > 0) ++depth;
      const nlohmann::json gen = p.value(
          "gen", nlohmann::json{{"kind", "random"}, {"depth", depth}, {"amplitude", 1.0}, {"seed", p.value("seed", std::uint64_t{0})}});
      ExperimentReport rep = check_equivalences(generate(gen, dims), opts);
      rep.params["gen"] = gen;
      return rep;
    }
    if (name == "embedding_gap")
      return embedding_gap_sweep(phi, parse_family(p.value("family", std::string("dyadic_squares"))),
                                 sizes({16, 32, 64}), opts);
    if (name == "divergence")
      return divergence_witness(phi, parse_family(p.value("family", std::string("thin_strips"))),
                                sizes({16, 32, 64}), opts);
    if (name == "multiplier_bound")
      return multiplier_upper_bound(phi, sizes({16, 32}), p.value("random_count", std::size_t{20}),
                                    p.value("seed", std::uint64_t{0}), opts);
    if (name == "mean_bound_sharpness")
      return mean_bound_sharpness(p.value("n", std::size_t{32}), p.value("random_count", std::size_t{20}),
                                  p.value("seed", std::uint64_t{0}), opts);
    if (name == "lmo_contrast") return lmo_contrast_sweep(phi, sizes({16, 32, 64}), opts);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad experiment parameters: ") + e.what());
  }
  std::string valid;
  for (const auto& n : experiment_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw InvalidArgument("unknown experiment '" + name + "' (valid: " + valid + ")");
}

}  // namespace

ExperimentReport run_experiment(const std::string& name, const nlohmann::json& params,
                                const ExperimentOptions& opts) {
  const nlohmann::json p = params.is_null() ? nlohmann::json::object() : params;
  if (!p.is_object()) throw InvalidArgument("experiment parameters must be a JSON object");
  ExperimentReport rep = dispatch(name, p, opts);
  if (p.contains("seed") && !rep.params.contains("seed")) rep.params["seed"] = p.at("seed");
  rep.params["mode"] = std::string(to_string(opts.sweep.mode));
  return rep;
}

}  // namespace osckit
