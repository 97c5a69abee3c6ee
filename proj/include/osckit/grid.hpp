#pragma once

// Periodic grid domain: sampled functions on the N-torus, arcs, rectangles,
// coordinate splits and the summed-area table used for rectangle means.
//
// Every axis has circumference 1 and is divided into n_j uniform cells, so an
// arc of `len` cells has length len / n_j. Values are stored row-major with
// the last axis varying fastest.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "osckit/error.hpp"

namespace osckit {

using Dims = std::vector<std::size_t>;

std::size_t cell_count(const Dims& dims);

class GridFunction {
 public:
  GridFunction(Dims dims, std::vector<double> values);

  static GridFunction constant(Dims dims, double value);

  const Dims& dims() const noexcept { return dims_; }
  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t dim(std::size_t axis) const { return dims_.at(axis); }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t stride(std::size_t axis) const { return strides_.at(axis); }
  const std::vector<std::size_t>& strides() const noexcept { return strides_; }

  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t flat) const noexcept { return values_[flat]; }
  double at(std::span<const std::size_t> index) const;

  std::size_t flat_index(std::span<const std::size_t> index) const;

  double mean() const;
  double sup_abs() const;

  GridFunction scaled(double factor) const;
  GridFunction shifted(double offset) const;

 private:
  Dims dims_;
  std::vector<std::size_t> strides_;
  std::vector<double> values_;
};

// Pointwise product of two functions on the same grid.
GridFunction multiply(const GridFunction& a, const GridFunction& b);

struct Arc {
  std::size_t axis = 0;
  std::size_t start = 0;
  std::size_t len = 1;

  double length(std::size_t n) const { return static_cast<double>(len) / static_cast<double>(n); }
  bool wraps(std::size_t n) const { return start + len > n; }
  bool contains(std::size_t cell, std::size_t n) const {
    return (cell + n - start) % n < len;
  }

  friend bool operator==(const Arc&, const Arc&) = default;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

void validate_arc(const Arc& arc, std::size_t n);

// Product of arcs over a set of distinct axes, kept sorted by axis.
struct PeriodicRect {
  std::vector<Arc> arcs;

  PeriodicRect() = default;
  explicit PeriodicRect(std::vector<Arc> arcs);

  std::size_t cell_count() const;
  double measure(const Dims& dims) const;
  bool covers_all_axes(std::size_t rank) const;
  std::vector<std::size_t> axes() const;

  friend bool operator==(const PeriodicRect&, const PeriodicRect&) = default;
};

void validate_rect(const PeriodicRect& rect, const Dims& dims);

// Full-circle arc on every axis.
PeriodicRect full_torus(const Dims& dims);

// Nonempty proper subset of axes to average over; the rest remain free.
class CoordSplit {
 public:
  CoordSplit(std::vector<std::size_t> averaged_axes, std::size_t rank);
  static CoordSplit from_mask(std::uint32_t mask, std::size_t rank);

  const std::vector<std::size_t>& averaged_axes() const noexcept { return averaged_; }
  const std::vector<std::size_t>& remaining_axes() const noexcept { return remaining_; }
  std::size_t rank() const noexcept { return averaged_.size() + remaining_.size(); }
  std::uint32_t mask() const noexcept;

  friend bool operator==(const CoordSplit&, const CoordSplit&) = default;

 private:
  std::vector<std::size_t> averaged_;
  std::vector<std::size_t> remaining_;
};

// All coordinate splits of a rank-N grid in ascending mask order.
std::vector<CoordSplit> all_splits(std::size_t rank);

// Inclusive prefix sums over a (n_1+1) x ... x (n_N+1) lattice. Immutable
// after construction; safe to share across threads.
class SummedAreaTable {
 public:
  explicit SummedAreaTable(const GridFunction& f);

  const Dims& dims() const noexcept { return dims_; }

  // Sum over the half-open, non-wrapping box [lo_j, hi_j) on every axis.
  double box_sum(std::span<const std::size_t> lo, std::span<const std::size_t> hi) const;

  // Sum over a periodic rectangle covering all axes. Wrapping arcs are split
  // into at most two non-wrapping segments.
  double sum(const PeriodicRect& rect) const;
  double sum(std::span<const Arc> arcs) const;

 private:
  Dims dims_;
  std::vector<std::size_t> strides_;  // of the padded lattice
  std::vector<double> prefix_;
};

double rect_mean(const SummedAreaTable& sat, const PeriodicRect& rect);

// t -> m_R f(., t) as a function of the remaining axes. `rect` must have
// exactly the split's averaged axes.
GridFunction partial_mean(const SummedAreaTable& sat, const CoordSplit& split,
                          const PeriodicRect& rect);
GridFunction partial_mean(const GridFunction& f, const CoordSplit& split,
                          const PeriodicRect& rect);

// The function of the split's averaged axes obtained by freezing the remaining
// axes at `frozen_cells` (one cell index per remaining axis, in axis order).
GridFunction slice(const GridFunction& f, const CoordSplit& split,
                   std::span<const std::size_t> frozen_cells);

// Exact pairwise (tree) inclusive prefix sum of `values`, in place.
void pairwise_inclusive_scan(std::span<double> values);

std::string to_string(const Arc& arc);
std::string to_string(const PeriodicRect& rect);

}  // namespace osckit
