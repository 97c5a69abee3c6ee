#include "osckit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace osckit {

std::size_t cell_count(const Dims& dims) {
  std::size_t total = 1;
  for (std::size_t n : dims) total *= n;
  return total;
}

namespace {

std::vector<std::size_t> row_major_strides(const Dims& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t j = dims.size(); j-- > 1;) strides[j - 1] = strides[j] * dims[j];
  return strides;
}

void validate_dims(const Dims& dims) {
  if (dims.empty()) throw InvalidArgument("grid must have at least one axis");
  if (dims.size() > 16) throw InvalidArgument("grid rank is limited to 16 axes");
  for (std::size_t j = 0; j < dims.size(); ++j) {
    if (dims[j] < 2)
      throw InvalidArgument("axis " + std::to_string(j) + " has " + std::to_string(dims[j]) +
                            " cells; every axis needs at least 2");
  }
}

// Advance a mixed-radix counter; returns false after the last combination.
bool next_index(std::vector<std::size_t>& index, const Dims& extent) {
  for (std::size_t j = index.size(); j-- > 0;) {
    if (++index[j] < extent[j]) return true;
    index[j] = 0;
  }
  return false;
}

}  // namespace

GridFunction::GridFunction(Dims dims, std::vector<double> values)
    : dims_(std::move(dims)), values_(std::move(values)) {
  validate_dims(dims_);
  if (values_.size() != cell_count(dims_))
    throw InvalidArgument("grid expects " + std::to_string(cell_count(dims_)) + " values, got " +
                          std::to_string(values_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw InvalidArgument("grid value at cell " + std::to_string(i) + " is not finite");
  }
  strides_ = row_major_strides(dims_);
}

GridFunction GridFunction::constant(Dims dims, double value) {
  validate_dims(dims);
  std::size_t count = cell_count(dims);
  return GridFunction(std::move(dims), std::vector<double>(count, value));
}

std::size_t GridFunction::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != rank()) throw InvalidArgument("index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t j = 0; j < rank(); ++j) {
    if (index[j] >= dims_[j]) throw InvalidArgument("index out of range");
    flat += index[j] * strides_[j];
  }
  return flat;
}

double GridFunction::at(std::span<const std::size_t> index) const {
  return values_[flat_index(index)];
}

double GridFunction::mean() const {
  std::vector<double> scratch(values_.begin(), values_.end());
  pairwise_inclusive_scan(scratch);
  return scratch.back() / static_cast<double>(scratch.size());
}

double GridFunction::sup_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

GridFunction GridFunction::scaled(double factor) const {
  std::vector<double> out(values_.begin(), values_.end());
  for (double& v : out) v *= factor;
  return GridFunction(dims_, std::move(out));
}

GridFunction GridFunction::shifted(double offset) const {
  std::vector<double> out(values_.begin(), values_.end());
  for (double& v : out) v += offset;
  return GridFunction(dims_, std::move(out));
}

GridFunction multiply(const GridFunction& a, const GridFunction& b) {
  if (a.dims() != b.dims()) throw InvalidArgument("multiply: grid shapes differ");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return GridFunction(a.dims(), std::move(out));
}

void validate_arc(const Arc& arc, std::size_t n) {
  if (arc.start >= n || arc.len < 1 || arc.len > n)
    throw InvalidArgument("arc " + to_string(arc) + " is invalid for an axis of " +
                          std::to_string(n) + " cells");
}

PeriodicRect::PeriodicRect(std::vector<Arc> a) : arcs(std::move(a)) {
  std::sort(arcs.begin(), arcs.end(),
            [](const Arc& x, const Arc& y) { return x.axis < y.axis; });
  for (std::size_t i = 1; i < arcs.size(); ++i) {
    if (arcs[i].axis == arcs[i - 1].axis)
      throw InvalidArgument("rectangle has two arcs on axis " + std::to_string(arcs[i].axis));
  }
}

std::size_t PeriodicRect::cell_count() const {
  std::size_t c = 1;
  for (const Arc& a : arcs) c *= a.len;
  return c;
}

double PeriodicRect::measure(const Dims& dims) const {
  double m = 1.0;
  for (const Arc& a : arcs) m *= a.length(dims.at(a.axis));
  return m;
}

bool PeriodicRect::covers_all_axes(std::size_t rank) const {
  if (arcs.size() != rank) return false;
  for (std::size_t j = 0; j < rank; ++j)
    if (arcs[j].axis != j) return false;
  return true;
}

std::vector<std::size_t> PeriodicRect::axes() const {
  std::vector<std::size_t> out;
  for (const Arc& a : arcs) out.push_back(a.axis);
  return out;
}

void validate_rect(const PeriodicRect& rect, const Dims& dims) {
  for (const Arc& a : rect.arcs) {
    if (a.axis >= dims.size()) throw InvalidArgument("arc axis out of range: " + to_string(a));
    validate_arc(a, dims[a.axis]);
  }
}

PeriodicRect full_torus(const Dims& dims) {
  std::vector<Arc> arcs;
  for (std::size_t j = 0; j < dims.size(); ++j) arcs.push_back(Arc{j, 0, dims[j]});
  return PeriodicRect(std::move(arcs));
}

CoordSplit::CoordSplit(std::vector<std::size_t> averaged, std::size_t rank)
    : averaged_(std::move(averaged)) {
  std::sort(averaged_.begin(), averaged_.end());
  averaged_.erase(std::unique(averaged_.begin(), averaged_.end()), averaged_.end());
  if (averaged_.empty() || averaged_.size() >= rank || averaged_.back() >= rank)
    throw InvalidArgument("a coordinate split needs a nonempty proper subset of the " +
                          std::to_string(rank) + " axes");
  for (std::size_t j = 0; j < rank; ++j)
    if (!std::binary_search(averaged_.begin(), averaged_.end(), j)) remaining_.push_back(j);
}

CoordSplit CoordSplit::from_mask(std::uint32_t mask, std::size_t rank) {
  std::vector<std::size_t> axes;
  for (std::size_t j = 0; j < 32; ++j)
    if (mask & (1u << j)) axes.push_back(j);
  return CoordSplit(std::move(axes), rank);
}

std::uint32_t CoordSplit::mask() const noexcept {
  std::uint32_t m = 0;
  for (std::size_t j : averaged_) m |= 1u << j;
  return m;
}

std::vector<CoordSplit> all_splits(std::size_t rank) {
  std::vector<CoordSplit> out;
  if (rank < 2) return out;
  const std::uint32_t full = (1u << rank) - 1;
  for (std::uint32_t mask = 1; mask < full; ++mask) out.push_back(CoordSplit::from_mask(mask, rank));
  return out;
}

// Divide and conquer scan: every prefix is a sum of O(log n) block totals,
// each of which was itself formed the same way.
void pairwise_inclusive_scan(std::span<double> x) {
  const std::size_t n = x.size();
  if (n <= 1) return;
  const std::size_t half = n / 2;
  pairwise_inclusive_scan(x.first(half));
  pairwise_inclusive_scan(x.subspan(half));
  const double left_total = x[half - 1];
  for (std::size_t i = half; i < n; ++i) x[i] += left_total;
}

SummedAreaTable::SummedAreaTable(const GridFunction& f) : dims_(f.dims()) {
  const std::size_t rank = dims_.size();
  Dims padded(rank);
  for (std::size_t j = 0; j < rank; ++j) padded[j] = dims_[j] + 1;
  strides_ = row_major_strides(padded);
  prefix_.assign(cell_count(padded), 0.0);

  std::vector<std::size_t> index(rank, 0);
  std::size_t flat = 0;
  do {
    std::size_t p = 0;
    for (std::size_t j = 0; j < rank; ++j) p += (index[j] + 1) * strides_[j];
    prefix_[p] = f[flat++];
  } while (next_index(index, dims_));

  std::vector<double> line;
  for (std::size_t axis = 0; axis < rank; ++axis) {
    const std::size_t n = dims_[axis];
    line.resize(n);
    Dims outer = padded;
    outer[axis] = 1;
    std::vector<std::size_t> base(rank, 0);
    do {
      std::size_t p0 = 0;
      for (std::size_t j = 0; j < rank; ++j) p0 += base[j] * strides_[j];
      for (std::size_t k = 0; k < n; ++k) line[k] = prefix_[p0 + (k + 1) * strides_[axis]];
      pairwise_inclusive_scan(line);
      for (std::size_t k = 0; k < n; ++k) prefix_[p0 + (k + 1) * strides_[axis]] = line[k];
    } while (next_index(base, outer));
  }
}

double SummedAreaTable::box_sum(std::span<const std::size_t> lo,
                                std::span<const std::size_t> hi) const {
  const std::size_t rank = dims_.size();
  for (std::size_t j = 0; j < rank; ++j)
    if (lo[j] >= hi[j]) return 0.0;
  // Corner offsets and inclusion-exclusion signs, built one axis at a time.
  std::size_t offset[1u << 4];
  bool positive[1u << 4];
  if (rank > 4) {
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << rank); ++mask) {
      std::size_t p = 0;
      std::size_t low_count = 0;
      for (std::size_t j = 0; j < rank; ++j) {
        const bool high = (mask >> j) & 1u;
        p += (high ? hi[j] : lo[j]) * strides_[j];
        low_count += high ? 0 : 1;
      }
      total += (low_count & 1u) ? -prefix_[p] : prefix_[p];
    }
    return total;
  }
  offset[0] = 0;
  positive[0] = true;
  std::size_t count = 1;
  for (std::size_t j = 0; j < rank; ++j) {
    for (std::size_t k = 0; k < count; ++k) {
      offset[count + k] = offset[k] + hi[j] * strides_[j];
      positive[count + k] = positive[k];
      offset[k] += lo[j] * strides_[j];
      positive[k] = !positive[k];
    }
    count *= 2;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < count; ++k) total += positive[k] ? prefix_[offset[k]] : -prefix_[offset[k]];
  return total;
}

double SummedAreaTable::sum(std::span<const Arc> arcs) const {
  const std::size_t rank = dims_.size();
  if (arcs.size() != rank) throw InvalidArgument("rectangle must cover every axis");
  // Up to two half-open segments per axis.
  std::size_t seg_lo[16][2], seg_hi[16][2], seg_count[16];
  for (std::size_t j = 0; j < rank; ++j) {
    const Arc& a = arcs[j];
    const std::size_t n = dims_[j];
    if (a.start + a.len <= n) {
      seg_lo[j][0] = a.start;
      seg_hi[j][0] = a.start + a.len;
      seg_count[j] = 1;
    } else {
      seg_lo[j][0] = a.start;
      seg_hi[j][0] = n;
      seg_lo[j][1] = 0;
      seg_hi[j][1] = a.start + a.len - n;
      seg_count[j] = 2;
    }
  }
  std::size_t lo[16], hi[16];
  std::size_t pick[16] = {};
  double total = 0.0;
  while (true) {
    for (std::size_t j = 0; j < rank; ++j) {
      lo[j] = seg_lo[j][pick[j]];
      hi[j] = seg_hi[j][pick[j]];
    }
    total += box_sum(std::span<const std::size_t>(lo, rank), std::span<const std::size_t>(hi, rank));
    std::size_t j = rank;
    while (j-- > 0) {
      if (++pick[j] < seg_count[j]) break;
      pick[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return total;
}

double SummedAreaTable::sum(const PeriodicRect& rect) const {
  if (!rect.covers_all_axes(dims_.size())) throw InvalidArgument("rectangle must cover every axis");
  validate_rect(rect, dims_);
  return sum(std::span<const Arc>(rect.arcs));
}

double rect_mean(const SummedAreaTable& sat, const PeriodicRect& rect) {
  return sat.sum(rect) / static_cast<double>(rect.cell_count());
}

GridFunction partial_mean(const SummedAreaTable& sat, const CoordSplit& split,
                          const PeriodicRect& rect) {
  const Dims& dims = sat.dims();
  if (split.rank() != dims.size()) throw InvalidArgument("split rank does not match grid");
  if (rect.axes() != split.averaged_axes())
    throw InvalidArgument("partial mean rectangle must span exactly the averaged axes");
  validate_rect(rect, dims);

  const auto& remaining = split.remaining_axes();
  Dims out_dims;
  for (std::size_t j : remaining) out_dims.push_back(dims[j]);

  std::vector<Arc> arcs(dims.size());
  for (const Arc& a : rect.arcs) arcs[a.axis] = a;
  for (std::size_t j : remaining) arcs[j] = Arc{j, 0, 1};

  const double inv_count = 1.0 / static_cast<double>(rect.cell_count());
  std::vector<double> out(cell_count(out_dims));
  std::vector<std::size_t> index(remaining.size(), 0);
  std::size_t flat = 0;
  do {
    for (std::size_t k = 0; k < remaining.size(); ++k) arcs[remaining[k]].start = index[k];
    out[flat++] = sat.sum(std::span<const Arc>(arcs)) * inv_count;
  } while (next_index(index, out_dims));
  return GridFunction(std::move(out_dims), std::move(out));
}

GridFunction partial_mean(const GridFunction& f, const CoordSplit& split,
                          const PeriodicRect& rect) {
  return partial_mean(SummedAreaTable(f), split, rect);
}

GridFunction slice(const GridFunction& f, const CoordSplit& split,
                   std::span<const std::size_t> frozen_cells) {
  if (split.rank() != f.rank()) throw InvalidArgument("split rank does not match grid");
  const auto& free_axes = split.averaged_axes();
  const auto& fixed_axes = split.remaining_axes();
  if (frozen_cells.size() != fixed_axes.size())
    throw InvalidArgument("slice needs one frozen cell per remaining axis");

  std::size_t base = 0;
  for (std::size_t k = 0; k < fixed_axes.size(); ++k) {
    if (frozen_cells[k] >= f.dim(fixed_axes[k])) throw InvalidArgument("frozen cell out of range");
    base += frozen_cells[k] * f.stride(fixed_axes[k]);
  }
  Dims out_dims;
  for (std::size_t j : free_axes) out_dims.push_back(f.dim(j));
  std::vector<double> out(cell_count(out_dims));
  std::vector<std::size_t> index(free_axes.size(), 0);
  std::size_t flat = 0;
  do {
    std::size_t p = base;
    for (std::size_t k = 0; k < free_axes.size(); ++k) p += index[k] * f.stride(free_axes[k]);
    out[flat++] = f[p];
  } while (next_index(index, out_dims));
  return GridFunction(std::move(out_dims), std::move(out));
}

std::string to_string(const Arc& arc) {
  std::ostringstream os;
  os << "arc(axis=" << arc.axis << ", start=" << arc.start << ", len=" << arc.len << ")";
  return os.str();
}

std::string to_string(const PeriodicRect& rect) {
  std::string s = "[";
  for (std::size_t i = 0; i < rect.arcs.size(); ++i) {
    if (i) s += " x ";
    s += to_string(rect.arcs[i]);
  }
  return s + "]";
}

}  // namespace osckit
