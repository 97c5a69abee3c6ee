#include "osckit/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sweep_engine.hpp"

namespace osckit {

using detail::Best;
using detail::Functional;
using detail::RectFamily;
using detail::RectSweep;
using detail::Scored;
using detail::Weighting;

std::string_view to_string(EnumMode mode) {
  return mode == EnumMode::Exact ? "exact" : "dyadic";
}

EnumMode parse_mode(std::string_view name) {
  if (name == "exact") return EnumMode::Exact;
  if (name == "dyadic") return EnumMode::Dyadic;
  throw InvalidArgument("unknown enumeration mode '" + std::string(name) +
                        "' (expected exact or dyadic)");
}

namespace {

struct NormName {
  NormKind kind;
  std::string_view name;
};

constexpr NormName kNormNames[] = {
    {NormKind::Bmo, "bmo"},         {NormKind::Star, "star"},
    {NormKind::Lmo, "lmo"},         {NormKind::BmoM, "bmo_m"},
    {NormKind::LmoM, "lmo_m"},      {NormKind::LmoInv, "lmo_inv"},
    {NormKind::Slice, "slice"},     {NormKind::MeanLogRatio, "mean_log_ratio"},
};

// Saturating arithmetic for enumeration counts.
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max()
                                                           : a + b;
}

std::uint64_t rect_count(const Dims& dims, std::span<const std::size_t> axes, EnumMode mode) {
  std::uint64_t c = 1;
  for (std::size_t j : axes) c = sat_mul(c, arcs_per_axis(dims[j], mode));
  return c;
}

std::uint64_t cell_count_of(const Dims& dims, std::span<const std::size_t> axes) {
  std::uint64_t c = 1;
  for (std::size_t j : axes) c = sat_mul(c, dims[j]);
  return c;
}

Dims sub_dims(const Dims& dims, std::span<const std::size_t> axes) {
  Dims out;
  for (std::size_t j : axes) out.push_back(dims[j]);
  return out;
}

void check_budget(NormKind kind, const Dims& dims, const SweepOptions& opts) {
  const std::uint64_t need = enumeration_size(kind, dims, opts.mode);
  if (need > opts.budget) throw BudgetExceeded(need, opts.budget);
}

// Arcs of a local (sub-grid) rectangle relabelled onto the parent grid's axes.
void relabel(const Arc* local, std::span<const std::size_t> axes, std::vector<Arc>& out) {
  for (std::size_t k = 0; k < axes.size(); ++k) {
    Arc a = local[k];
    a.axis = axes[k];
    out.push_back(a);
  }
}

NormReport plain_sweep(const GridFunction& f, NormKind kind, Functional functional,
                       Weighting weighting, const SweepOptions& opts) {
  check_budget(kind, f.dims(), opts);
  RectFamily family(f.dims(), opts.mode);
  RectSweep sweep(f, family, functional, weighting);
  const Best best = sweep.run(opts.threads);
  NormReport r;
  r.norm = kind;
  r.value = best.value;
  r.argmax_rect = family.rect(best.index);
  r.mode = opts.mode;
  r.rect_count = family.size();
  return r;
}

// sup over splits S and rectangles R over S of the inner functional of m_R f.
NormReport split_mean_sweep(const GridFunction& f, NormKind kind, Weighting weighting,
                            const SweepOptions& opts) {
  if (f.rank() < 2) throw InvalidArgument(std::string(to_string(kind)) + " needs a grid of rank >= 2");
  check_budget(kind, f.dims(), opts);
  const SummedAreaTable sat(f);
  const auto splits = all_splits(f.rank());

  struct SplitPlan {
    RectFamily outer;
    RectFamily inner;
    std::uint64_t first_task;
  };
  std::vector<SplitPlan> plans;
  std::uint64_t tasks = 0;
  for (const auto& s : splits) {
    plans.push_back(SplitPlan{RectFamily(sub_dims(f.dims(), s.averaged_axes()), opts.mode),
                              RectFamily(sub_dims(f.dims(), s.remaining_axes()), opts.mode), tasks});
    tasks += plans.back().outer.size();
  }
  auto locate = [&](std::uint64_t task) {
    std::size_t k = plans.size() - 1;
    while (plans[k].first_task > task) --k;
    return k;
  };

  struct State {};
  const Best best = detail::parallel_argmax(
      tasks, opts.threads, [] { return State{}; },
      [&](State&, std::uint64_t task) {
        const std::size_t k = locate(task);
        const auto& plan = plans[k];
        Arc outer[16];
        plan.outer.decode(task - plan.first_task, outer);
        std::vector<Arc> arcs;
        relabel(outer, splits[k].averaged_axes(), arcs);
        const GridFunction g = partial_mean(sat, splits[k], PeriodicRect(std::move(arcs)));
        RectSweep inner(g, plan.inner, Functional::MeanOsc, weighting);
        const Best b = inner.run(1);
        return Scored{b.value, b.index};
      });

  const std::size_t k = locate(best.index);
  const auto& plan = plans[k];
  Arc outer[16], inner[16];
  plan.outer.decode(best.index - plan.first_task, outer);
  plan.inner.decode(best.aux, inner);
  std::vector<Arc> arcs;
  relabel(outer, splits[k].averaged_axes(), arcs);
  relabel(inner, splits[k].remaining_axes(), arcs);

  NormReport r;
  r.norm = kind;
  r.value = best.value;
  r.argmax_rect = PeriodicRect(std::move(arcs));
  r.argmax_split = splits[k];
  r.mode = opts.mode;
  r.rect_count = enumeration_size(kind, f.dims(), opts.mode);
  return r;
}

// sup over frozen cells of the remaining axes of the functional of the slice.
NormReport slice_sweep(const GridFunction& f, NormKind kind, std::span<const CoordSplit> splits,
                       Weighting weighting, const SweepOptions& opts) {
  struct SplitPlan {
    RectFamily inner;
    Dims frozen_dims;
    std::uint64_t first_task;
  };
  std::vector<SplitPlan> plans;
  std::uint64_t tasks = 0;
  std::uint64_t visited = 0;
  for (const auto& s : splits) {
    plans.push_back(SplitPlan{RectFamily(sub_dims(f.dims(), s.averaged_axes()), opts.mode),
                              sub_dims(f.dims(), s.remaining_axes()), tasks});
    const std::uint64_t cells = cell_count(plans.back().frozen_dims);
    tasks += cells;
    visited = sat_add(visited, sat_mul(cells, plans.back().inner.size()));
  }
  if (visited > opts.budget) throw BudgetExceeded(visited, opts.budget);

  auto locate = [&](std::uint64_t task) {
    std::size_t k = plans.size() - 1;
    while (plans[k].first_task > task) --k;
    return k;
  };
  auto frozen_cells = [&](std::size_t k, std::uint64_t local) {
    const Dims& d = plans[k].frozen_dims;
    std::vector<std::size_t> cells(d.size());
    for (std::size_t j = d.size(); j-- > 0;) {
      cells[j] = local % d[j];
      local /= d[j];
    }
    return cells;
  };

  struct State {};
  const Best best = detail::parallel_argmax(
      tasks, opts.threads, [] { return State{}; },
      [&](State&, std::uint64_t task) {
        const std::size_t k = locate(task);
        const auto cells = frozen_cells(k, task - plans[k].first_task);
        const GridFunction g = slice(f, splits[k], cells);
        RectSweep inner(g, plans[k].inner, Functional::MeanOsc, weighting);
        const Best b = inner.run(1);
        return Scored{b.value, b.index};
      });

  const std::size_t k = locate(best.index);
  const auto cells = frozen_cells(k, best.index - plans[k].first_task);
  Arc inner[16];
  plans[k].inner.decode(best.aux, inner);
  std::vector<Arc> arcs;
  relabel(inner, splits[k].averaged_axes(), arcs);
  for (std::size_t i = 0; i < cells.size(); ++i)
    arcs.push_back(Arc{splits[k].remaining_axes()[i], cells[i], 1});

  NormReport r;
  r.norm = kind;
  r.value = best.value;
  r.argmax_rect = PeriodicRect(std::move(arcs));
  r.argmax_split = splits[k];
  r.mode = opts.mode;
  r.rect_count = visited;
  return r;
}

}  // namespace

std::string_view to_string(NormKind kind) {
  for (const auto& n : kNormNames)
    if (n.kind == kind) return n.name;
  return "unknown";
}

NormKind parse_norm(std::string_view name) {
  for (const auto& n : kNormNames)
    if (n.name == name) return n.kind;
  std::string valid;
  for (const auto& n : kNormNames) valid += (valid.empty() ? "" : ", ") + std::string(n.name);
  throw InvalidArgument("unknown norm '" + std::string(name) + "' (valid: " + valid + ")");
}

std::uint64_t enumeration_size(NormKind kind, const Dims& dims, EnumMode mode) {
  std::vector<std::size_t> all(dims.size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  switch (kind) {
    case NormKind::Bmo:
    case NormKind::Star:
    case NormKind::Lmo:
    case NormKind::MeanLogRatio:
      return rect_count(dims, all, mode);
    case NormKind::BmoM:
    case NormKind::LmoM: {
      std::uint64_t total = 0;
      for (const auto& s : all_splits(dims.size()))
        total = sat_add(total, sat_mul(rect_count(dims, s.averaged_axes(), mode),
                                       rect_count(dims, s.remaining_axes(), mode)));
      return total;
    }
    case NormKind::LmoInv:
    case NormKind::Slice: {
      std::uint64_t total = 0;
      for (const auto& s : all_splits(dims.size()))
        total = sat_add(total, sat_mul(cell_count_of(dims, s.remaining_axes()),
                                       rect_count(dims, s.averaged_axes(), mode)));
      return total;
    }
  }
  return 0;
}

double log_weight(const PeriodicRect& rect, const Dims& dims) {
  double w = 0.0;
  for (const Arc& a : rect.arcs)
    w += std::log2(4.0 * static_cast<double>(dims.at(a.axis)) / static_cast<double>(a.len));
  return w;
}

namespace {

// Visits every cell of a full-rank periodic rectangle in row-major order.
template <class Visit>
void for_each_cell(const GridFunction& f, const PeriodicRect& rect, Visit visit) {
  const std::size_t rank = f.rank();
  std::vector<std::size_t> step(rank, 0);
  while (true) {
    std::size_t flat = 0;
    for (std::size_t j = 0; j < rank; ++j)
      flat += ((rect.arcs[j].start + step[j]) % f.dim(j)) * f.stride(j);
    visit(f[flat]);
    std::size_t j = rank;
    while (j-- > 0) {
      if (++step[j] < rect.arcs[j].len) break;
      step[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) return;
  }
}

void require_full_rect(const GridFunction& f, const PeriodicRect& rect) {
  if (!rect.covers_all_axes(f.rank())) throw InvalidArgument("rectangle must cover every axis");
  validate_rect(rect, f.dims());
}

}  // namespace

double osc_l1(const GridFunction& f, const SummedAreaTable& sat, const PeriodicRect& rect) {
  require_full_rect(f, rect);
  const double mean = rect_mean(sat, rect);
  double total = 0.0;
  for_each_cell(f, rect, [&](double v) { total += std::abs(v - mean); });
  return total / static_cast<double>(rect.cell_count());
}

double osc_median(const GridFunction& f, const PeriodicRect& rect) {
  require_full_rect(f, rect);
  std::vector<double> v;
  v.reserve(rect.cell_count());
  for_each_cell(f, rect, [&](double x) { v.push_back(x); });
  auto mid = v.begin() + static_cast<std::ptrdiff_t>((v.size() - 1) / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double median = *mid;
  double total = 0.0;
  for (double x : v) total += std::abs(x - median);
  return total / static_cast<double>(v.size());
}

NormReport bmo_norm(const GridFunction& f, const SweepOptions& opts) {
  return plain_sweep(f, NormKind::Bmo, Functional::MeanOsc, Weighting::Unit, opts);
}

NormReport star_norm(const GridFunction& f, const SweepOptions& opts) {
  return plain_sweep(f, NormKind::Star, Functional::MedianOsc, Weighting::Unit, opts);
}

NormReport lmo_norm(const GridFunction& f, const SweepOptions& opts) {
  return plain_sweep(f, NormKind::Lmo, Functional::MeanOsc, Weighting::Log2, opts);
}

NormReport mean_log_ratio(const GridFunction& f, const SweepOptions& opts) {
  return plain_sweep(f, NormKind::MeanLogRatio, Functional::CenteredMean, Weighting::Unit, opts);
}

NormReport bmo_m_norm(const GridFunction& f, const SweepOptions& opts) {
  return split_mean_sweep(f, NormKind::BmoM, Weighting::Unit, opts);
}

NormReport lmo_m_norm(const GridFunction& f, const SweepOptions& opts) {
  return split_mean_sweep(f, NormKind::LmoM, Weighting::Log2, opts);
}

NormReport slice_bmo_norm(const GridFunction& f, const CoordSplit& split, const SweepOptions& opts) {
  if (f.rank() < 2) throw InvalidArgument("slice norms need a grid of rank >= 2");
  if (split.rank() != f.rank()) throw InvalidArgument("split rank does not match grid");
  const CoordSplit one[] = {split};
  return slice_sweep(f, NormKind::Slice, one, Weighting::Unit, opts);
}

NormReport max_slice_bmo_norm(const GridFunction& f, const SweepOptions& opts) {
  if (f.rank() < 2) throw InvalidArgument("slice norms need a grid of rank >= 2");
  const auto splits = all_splits(f.rank());
  return slice_sweep(f, NormKind::Slice, splits, Weighting::Unit, opts);
}

NormReport lmo_inv_norm(const GridFunction& f, const SweepOptions& opts) {
  if (f.rank() != 2) throw InvalidArgument("lmo_inv is defined for rank-2 grids");
  const auto splits = all_splits(2);
  return slice_sweep(f, NormKind::LmoInv, splits, Weighting::Log2, opts);
}

NormReport compute_norm(const GridFunction& f, NormKind kind, const SweepOptions& opts) {
  switch (kind) {
    case NormKind::Bmo: return bmo_norm(f, opts);
    case NormKind::Star: return star_norm(f, opts);
    case NormKind::Lmo: return lmo_norm(f, opts);
    case NormKind::BmoM: return bmo_m_norm(f, opts);
    case NormKind::LmoM: return lmo_m_norm(f, opts);
    case NormKind::LmoInv: return lmo_inv_norm(f, opts);
    case NormKind::Slice: return max_slice_bmo_norm(f, opts);
    case NormKind::MeanLogRatio: return mean_log_ratio(f, opts);
  }
  throw InvalidArgument("unknown norm kind");
}

double evaluate_candidate(const GridFunction& f, const NormReport& report) {
  const PeriodicRect& rect = report.argmax_rect;
  switch (report.norm) {
    case NormKind::Bmo: return osc_l1(f, SummedAreaTable(f), rect);
    case NormKind::Star: return osc_median(f, rect);
    case NormKind::Lmo: return log_weight(rect, f.dims()) * osc_l1(f, SummedAreaTable(f), rect);
    case NormKind::MeanLogRatio:
      return std::abs(rect_mean(SummedAreaTable(f), rect) - f.mean()) / log_weight(rect, f.dims());
    default: break;
  }
  if (!report.argmax_split) throw InvalidArgument("report has no split for a split-based norm");
  const CoordSplit& split = *report.argmax_split;
  std::vector<Arc> averaged, remaining;
  for (const Arc& a : rect.arcs) {
    const auto& axes = split.averaged_axes();
    (std::find(axes.begin(), axes.end(), a.axis) != axes.end() ? averaged : remaining).push_back(a);
  }

  std::optional<GridFunction> g;
  std::vector<Arc> local;
  auto localize = [&](const std::vector<Arc>& arcs) {
    for (std::size_t k = 0; k < arcs.size(); ++k) local.push_back(Arc{k, arcs[k].start, arcs[k].len});
  };
  if (report.norm == NormKind::BmoM || report.norm == NormKind::LmoM) {
    g = partial_mean(f, split, PeriodicRect(averaged));
    localize(remaining);
  } else {
    std::vector<std::size_t> cells;
    for (const Arc& a : remaining) cells.push_back(a.start);
    g = slice(f, split, cells);
    localize(averaged);
  }
  const PeriodicRect inner(local);
  const double osc = osc_l1(*g, SummedAreaTable(*g), inner);
  const bool weighted = report.norm == NormKind::LmoM || report.norm == NormKind::LmoInv;
  return weighted ? log_weight(inner, g->dims()) * osc : osc;
}

}  // namespace osckit
