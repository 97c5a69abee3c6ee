#include "osckit/testfn.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace osckit {

Arc LogArcSpec::shell(std::size_t k) const {
  if (k >= levels) return Arc{base.axis, 0, n};
  const std::size_t len = base.len << k;
  const std::size_t extra = len - base.len;
  const std::size_t before = extra - extra / 2;  // odd extra cell goes to the lower-index side
  return Arc{base.axis, (base.start + n - before % n) % n, len};
}

LogArcSpec log_arc_spec(std::size_t n, const Arc& base) {
  validate_arc(base, n);
  LogArcSpec spec{n, base, 0};
  while ((base.len << spec.levels) < n) ++spec.levels;
  return spec;
}

std::vector<double> log_arc_values(std::size_t n, const Arc& base) {
  const LogArcSpec spec = log_arc_spec(n, base);
  // Paint from the outermost shell inwards so inner shells overwrite.
  std::vector<double> v(n, 2.0);
  for (std::size_t k = spec.levels; k-- > 0;) {
    const Arc s = spec.shell(k);
    const double value = static_cast<double>(spec.levels + 2 - k);
    for (std::size_t i = 0; i < s.len; ++i) v[(s.start + i) % n] = value;
  }
  return v;
}

GridFunction make_log_arc(std::size_t n, const Arc& base) {
  return GridFunction({n}, log_arc_values(n, base));
}

GridFunction make_log_rect(const Dims& dims, const PeriodicRect& rect) {
  if (!rect.covers_all_axes(dims.size())) throw InvalidArgument("log_rect needs one arc per axis");
  std::vector<std::vector<double>> factors;
  for (const Arc& a : rect.arcs) factors.push_back(log_arc_values(dims[a.axis], a));

  std::vector<double> out(cell_count(dims), 0.0);
  std::vector<std::size_t> index(dims.size(), 0);
  for (double& cell : out) {
    double s = 0.0;
    for (std::size_t j = 0; j < dims.size(); ++j) s += factors[j][index[j]];
    cell = s;
    for (std::size_t j = dims.size(); j-- > 0;) {
      if (++index[j] < dims[j]) break;
      index[j] = 0;
    }
  }
  return GridFunction(dims, std::move(out));
}

Sampler cos_wave() {
  return [](double t) { return std::cos(2.0 * std::numbers::pi * t); };
}

Sampler sawtooth() {
  return [](double t) { return t - 0.5; };
}

Sampler step() {
  return [](double t) { return t < 0.5 ? 1.0 : 0.0; };
}

Sampler constant_sampler(double c) {
  return [c](double) { return c; };
}

GridFunction make_separable(const Dims& dims, const std::vector<Sampler>& factors, Combine combine) {
  if (factors.size() != dims.size()) throw InvalidArgument("separable function needs one factor per axis");
  std::vector<std::vector<double>> samples;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    std::vector<double> s(dims[j]);
    for (std::size_t k = 0; k < dims[j]; ++k)
      s[k] = factors[j]((static_cast<double>(k) + 0.5) / static_cast<double>(dims[j]));
    samples.push_back(std::move(s));
  }
  std::vector<double> out(cell_count(dims));
  std::vector<std::size_t> index(dims.size(), 0);
  for (double& cell : out) {
    double v = combine == Combine::Sum ? 0.0 : 1.0;
    for (std::size_t j = 0; j < dims.size(); ++j)
      v = combine == Combine::Sum ? v + samples[j][index[j]] : v * samples[j][index[j]];
    cell = v;
    for (std::size_t j = dims.size(); j-- > 0;) {
      if (++index[j] < dims[j]) break;
      index[j] = 0;
    }
  }
  return GridFunction(dims, std::move(out));
}

GridFunction make_random_dyadic(const Dims& dims, std::size_t depth, double amplitude,
                                std::uint64_t seed) {
  if (dims.empty()) throw InvalidArgument("random dyadic function needs at least one axis");
  for (std::size_t n : dims) {
    if (n < 2 || (n & (n - 1)) != 0)
      throw InvalidArgument("random dyadic functions need power-of-two axis lengths");
    if ((n >> depth) == 0) throw InvalidArgument("depth exceeds the dyadic levels of the grid");
  }
  std::vector<double> out(cell_count(dims), 0.0);
  const auto seed_lo = static_cast<std::uint32_t>(seed);
  const auto seed_hi = static_cast<std::uint32_t>(seed >> 32);

  for (std::size_t level = 1; level <= depth; ++level) {
    std::seed_seq seq{seed_lo, seed_hi, static_cast<std::uint32_t>(level)};
    std::mt19937_64 engine(seq);
    const std::size_t boxes_per_axis = std::size_t{1} << level;
    std::vector<double> box_value(static_cast<std::size_t>(std::pow(boxes_per_axis, dims.size())));
    for (double& b : box_value) b = (engine() >> 63) ? amplitude : -amplitude;

    std::vector<std::size_t> index(dims.size(), 0);
    for (double& cell : out) {
      std::size_t box = 0;
      for (std::size_t j = 0; j < dims.size(); ++j)
        box = box * boxes_per_axis + index[j] / (dims[j] >> level);
      cell += box_value[box];
      for (std::size_t j = dims.size(); j-- > 0;) {
        if (++index[j] < dims[j]) break;
        index[j] = 0;
      }
    }
  }
  return GridFunction(dims, std::move(out));
}

namespace {

Sampler parse_factor(const nlohmann::json& f) {
  if (f.is_string()) {
    const auto name = f.get<std::string>();
    if (name == "cos") return cos_wave();
    if (name == "sawtooth") return sawtooth();
    if (name == "step") return step();
    throw InvalidArgument("unknown separable factor '" + name + "' (valid: cos, sawtooth, step, {\"const\": c})");
  }
  if (f.is_object() && f.contains("const")) return constant_sampler(f.at("const").get<double>());
  if (f.is_number()) return constant_sampler(f.get<double>());
  throw InvalidArgument("separable factor must be a name or {\"const\": c}");
}

}  // namespace

GridFunction generate(const nlohmann::json& spec, const Dims& dims) {
  try {
    const auto kind = spec.at("kind").get<std::string>();
    if (kind == "log_arc") {
      if (dims.size() != 1) throw InvalidArgument("log_arc generates a rank-1 grid");
      return make_log_arc(dims[0], Arc{0, spec.value("start", std::size_t{0}), spec.at("len").get<std::size_t>()});
    }
    if (kind == "log_rect") {
      const auto& arcs = spec.at("arcs");
      if (arcs.size() != dims.size()) throw InvalidArgument("log_rect needs one arc per axis");
      std::vector<Arc> a;
      for (std::size_t j = 0; j < dims.size(); ++j)
        a.push_back(Arc{j, arcs[j].value("start", std::size_t{0}), arcs[j].at("len").get<std::size_t>()});
      return make_log_rect(dims, PeriodicRect(std::move(a)));
    }
    if (kind == "separable") {
      std::vector<Sampler> factors;
      const auto& list = spec.at("factors");
      if (list.size() == 1 && dims.size() > 1)
        factors.assign(dims.size(), parse_factor(list[0]));
      else
        for (const auto& f : list) factors.push_back(parse_factor(f));
      const auto combine = spec.value("combine", std::string("product"));
      if (combine != "product" && combine != "sum")
        throw InvalidArgument("combine must be \"product\" or \"sum\"");
      return make_separable(dims, factors, combine == "sum" ? Combine::Sum : Combine::Product);
    }
    if (kind == "random") {
      return make_random_dyadic(dims, spec.at("depth").get<std::size_t>(), spec.value("amplitude", 1.0),
                                spec.value("seed", std::uint64_t{0}));
    }
    if (kind == "constant") return GridFunction::constant(dims, spec.value("value", 0.0));
    throw InvalidArgument("unknown generator kind '" + kind +
                          "' (valid: log_arc, log_rect, separable, random, constant)");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad generator spec: ") + e.what());
  }
}

}  // namespace osckit
