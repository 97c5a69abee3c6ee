#pragma once

// Mean-oscillation functionals over periodic rectangles.
//
// All functionals are suprema over a finite rectangle family: every arc on
// every axis (Exact) or the standard dyadic arcs (Dyadic, power-of-two axes
// only). Logarithmic weights use log2(4 / |I|) per arc.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "osckit/grid.hpp"

namespace osckit {

enum class EnumMode { Exact, Dyadic };

std::string_view to_string(EnumMode mode);
EnumMode parse_mode(std::string_view name);

enum class NormKind {
  Bmo,           // sup_R mean |f - m_R f|
  Star,          // sup_R inf_lambda mean |f - lambda|
  Lmo,           // sup_R (sum_j log2(4/|I_j|)) mean |f - m_R f|
  BmoM,          // sup over splits and R of bmo(m_R f)
  LmoM,          // sup over splits and R of lmo(m_R f)
  LmoInv,        // sup over one-variable slices of lmo (rank 2)
  Slice,         // sup over splits and frozen cells of bmo of the slice
  MeanLogRatio,  // sup_R |m_R f - m f| / sum_j log2(4/|I_j|)
};

std::string_view to_string(NormKind kind);
NormKind parse_norm(std::string_view name);

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 24;

struct SweepOptions {
  EnumMode mode = EnumMode::Exact;
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = 1;
};

struct NormReport {
  NormKind norm = NormKind::Bmo;
  double value = 0.0;
  // For split-based norms the rectangle covers every axis: arcs on the
  // averaged axes give the averaging rectangle (or single frozen cells for
  // slice norms) and arcs on the remaining axes give the inner rectangle.
  PeriodicRect argmax_rect;
  std::optional<CoordSplit> argmax_split;
  EnumMode mode = EnumMode::Exact;
  std::uint64_t rect_count = 0;
  int weight_base = 2;
};

// Number of arcs enumerated on an axis of n cells.
std::uint64_t arcs_per_axis(std::size_t n, EnumMode mode);
std::vector<Arc> enumerate_arcs(std::size_t axis, std::size_t n, EnumMode mode);

// Number of candidates the given evaluator visits on a grid of `dims`.
std::uint64_t enumeration_size(NormKind kind, const Dims& dims, EnumMode mode);

double log_weight(const PeriodicRect& rect, const Dims& dims);

// (1/#R) sum_R |f - m_R f| with the mean taken from the summed-area table.
double osc_l1(const GridFunction& f, const SummedAreaTable& sat, const PeriodicRect& rect);
// inf over lambda of (1/#R) sum_R |f - lambda|, attained at the lower median.
double osc_median(const GridFunction& f, const PeriodicRect& rect);

NormReport bmo_norm(const GridFunction& f, const SweepOptions& opts = {});
NormReport star_norm(const GridFunction& f, const SweepOptions& opts = {});
NormReport lmo_norm(const GridFunction& f, const SweepOptions& opts = {});
NormReport bmo_m_norm(const GridFunction& f, const SweepOptions& opts = {});
NormReport lmo_m_norm(const GridFunction& f, const SweepOptions& opts = {});
NormReport lmo_inv_norm(const GridFunction& f, const SweepOptions& opts = {});
NormReport slice_bmo_norm(const GridFunction& f, const CoordSplit& split,
                          const SweepOptions& opts = {});
// Max of slice_bmo_norm over every split.
NormReport max_slice_bmo_norm(const GridFunction& f, const SweepOptions& opts = {});
NormReport mean_log_ratio(const GridFunction& f, const SweepOptions& opts = {});

NormReport compute_norm(const GridFunction& f, NormKind kind, const SweepOptions& opts = {});

// Recomputes the functional at the report's argmax candidate only.
double evaluate_candidate(const GridFunction& f, const NormReport& report);

}  // namespace osckit
