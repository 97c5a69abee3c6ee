#pragma once

// Definition-literal reference implementations used only by the tests. Every
// mean is an explicit loop over the cells of a rectangle; no prefix sums, no
// shared code with the library beyond reading a GridFunction's values.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "osckit/grid.hpp"

namespace oracle {

using Dims = std::vector<std::size_t>;

struct Field {
  Dims dims;
  std::vector<double> v;

  std::size_t flat(const std::vector<std::size_t>& idx) const {
    std::size_t k = 0;
    for (std::size_t j = 0; j < dims.size(); ++j) k = k * dims[j] + idx[j];
    return k;
  }
};

inline Field from(const osckit::GridFunction& f) {
  return Field{f.dims(), std::vector<double>(f.values().begin(), f.values().end())};
}

struct A {
  std::size_t start, len;
};

inline bool pow2(std::size_t n) { return n && !(n & (n - 1)); }

inline std::vector<A> arcs(std::size_t n, bool dyadic) {
  std::vector<A> out;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t l = 1; l <= n; ++l)
      if (!dyadic || (pow2(l) && s % l == 0)) out.push_back({s, l});
  return out;
}

// Calls fn on every multi-index of `dims`.
inline void odometer(const Dims& dims, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(dims.size(), 0);
  while (true) {
    fn(idx);
    std::size_t j = dims.size();
    while (j-- > 0) {
      if (++idx[j] < dims[j]) break;
      idx[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) return;
  }
}

// Values of `f` on the rectangle with one arc per axis, in any order.
inline std::vector<double> values_in(const Field& f, const std::vector<A>& rect) {
  Dims lens;
  for (const A& a : rect) lens.push_back(a.len);
  std::vector<double> out;
  odometer(lens, [&](const std::vector<std::size_t>& off) {
    std::vector<std::size_t> idx(f.dims.size());
    for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = (rect[j].start + off[j]) % f.dims[j];
    out.push_back(f.v[f.flat(idx)]);
  });
  return out;
}

inline double mean(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double osc(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0;
  for (double v : x) s += std::abs(v - m);
  return s / static_cast<double>(x.size());
}

// inf over lambda of mean |x - lambda|; the function is convex and piecewise
// linear with breakpoints at the samples, so the infimum is at a sample.
inline double osc_inf(const std::vector<double>& x) {
  double best = INFINITY;
  for (double lambda : x) {
    double s = 0;
    for (double v : x) s += std::abs(v - lambda);
    best = std::min(best, s / static_cast<double>(x.size()));
  }
  return best;
}

inline double weight(const Dims& dims, const std::vector<A>& rect) {
  double w = 0;
  for (std::size_t j = 0; j < dims.size(); ++j)
    w += std::log2(4.0 * static_cast<double>(dims[j]) / static_cast<double>(rect[j].len));
  return w;
}

inline void for_each_rect(const Dims& dims, bool dyadic,
                          const std::function<void(const std::vector<A>&)>& fn) {
  std::vector<std::vector<A>> per_axis;
  Dims counts;
  for (std::size_t n : dims) {
    per_axis.push_back(arcs(n, dyadic));
    counts.push_back(per_axis.back().size());
  }
  odometer(counts, [&](const std::vector<std::size_t>& pick) {
    std::vector<A> rect;
    for (std::size_t j = 0; j < dims.size(); ++j) rect.push_back(per_axis[j][pick[j]]);
    fn(rect);
  });
}

inline double bmo(const Field& f, bool dyadic = false) {
  double best = 0;
  for_each_rect(f.dims, dyadic, [&](const std::vector<A>& r) { best = std::max(best, osc(values_in(f, r))); });
  return best;
}

inline double star(const Field& f, bool dyadic = false) {
  double best = 0;
  for_each_rect(f.dims, dyadic, [&](const std::vector<A>& r) { best = std::max(best, osc_inf(values_in(f, r))); });
  return best;
}

inline double lmo(const Field& f, bool dyadic = false) {
  double best = 0;
  for_each_rect(f.dims, dyadic,
                [&](const std::vector<A>& r) { best = std::max(best, weight(f.dims, r) * osc(values_in(f, r))); });
  return best;
}

inline double mean_log_ratio(const Field& f, bool dyadic = false) {
  const double m = mean(f.v);
  double best = 0;
  for_each_rect(f.dims, dyadic, [&](const std::vector<A>& r) {
    best = std::max(best, std::abs(mean(values_in(f, r)) - m) / weight(f.dims, r));
  });
  return best;
}

// Axes in `mask` are averaged over `rect` (arcs in axis order); the result is
// a function of the remaining axes.
inline Field partial_mean(const Field& f, unsigned mask, const std::vector<A>& rect) {
  Field out;
  std::vector<std::size_t> rem;
  for (std::size_t j = 0; j < f.dims.size(); ++j)
    if (!(mask >> j & 1u)) {
      rem.push_back(j);
      out.dims.push_back(f.dims[j]);
    }
  odometer(out.dims, [&](const std::vector<std::size_t>& t) {
    std::vector<A> full(f.dims.size());
    std::size_t ia = 0, ir = 0;
    for (std::size_t j = 0; j < f.dims.size(); ++j)
      full[j] = (mask >> j & 1u) ? rect[ia++] : A{t[ir++], 1};
    out.v.push_back(mean(values_in(f, full)));
  });
  return out;
}

inline Dims masked_dims(const Dims& dims, unsigned mask, bool keep) {
  Dims out;
  for (std::size_t j = 0; j < dims.size(); ++j)
    if (((mask >> j) & 1u) == (keep ? 1u : 0u)) out.push_back(dims[j]);
  return out;
}

inline double split_sup(const Field& f, bool dyadic, const std::function<double(const Field&)>& inner) {
  const unsigned full = (1u << f.dims.size()) - 1;
  double best = 0;
  for (unsigned mask = 1; mask < full; ++mask)
    for_each_rect(masked_dims(f.dims, mask, true), dyadic,
                  [&](const std::vector<A>& r) { best = std::max(best, inner(partial_mean(f, mask, r))); });
  return best;
}

inline double bmo_m(const Field& f, bool dyadic = false) {
  return split_sup(f, dyadic, [&](const Field& g) { return bmo(g, dyadic); });
}

inline double lmo_m(const Field& f, bool dyadic = false) {
  return split_sup(f, dyadic, [&](const Field& g) { return lmo(g, dyadic); });
}

// The function of the axes in `mask` with the other axes frozen at `frozen`
// (one index per non-mask axis, in axis order).
inline Field slice(const Field& f, unsigned mask, const std::vector<std::size_t>& frozen) {
  Field out;
  out.dims = masked_dims(f.dims, mask, true);
  odometer(out.dims, [&](const std::vector<std::size_t>& s) {
    std::vector<std::size_t> idx(f.dims.size());
    std::size_t is = 0, ifz = 0;
    for (std::size_t j = 0; j < f.dims.size(); ++j) idx[j] = (mask >> j & 1u) ? s[is++] : frozen[ifz++];
    out.v.push_back(f.v[f.flat(idx)]);
  });
  return out;
}

inline double slice_sup(const Field& f, const std::function<double(const Field&)>& inner) {
  const unsigned full = (1u << f.dims.size()) - 1;
  double best = 0;
  for (unsigned mask = 1; mask < full; ++mask)
    odometer(masked_dims(f.dims, mask, false), [&](const std::vector<std::size_t>& frozen) {
      best = std::max(best, inner(slice(f, mask, frozen)));
    });
  return best;
}

inline double max_slice_bmo(const Field& f, bool dyadic = false) {
  return slice_sup(f, [&](const Field& g) { return bmo(g, dyadic); });
}

// Rank 2 only: every one-variable slice measured in one-variable lmo.
inline double lmo_inv(const Field& f, bool dyadic = false) {
  return slice_sup(f, [&](const Field& g) { return lmo(g, dyadic); });
}

}  // namespace oracle
