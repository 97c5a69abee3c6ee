#include "sweep_engine.hpp"

#include <cmath>

#if defined(__SSE2__)
#include <emmintrin.h>
#endif

namespace osckit {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

std::uint64_t arcs_per_axis(std::size_t n, EnumMode mode) {
  return mode == EnumMode::Exact ? std::uint64_t{n} * n : 2 * std::uint64_t{n} - 1;
}

std::vector<Arc> enumerate_arcs(std::size_t axis, std::size_t n, EnumMode mode) {
  std::vector<Arc> arcs;
  if (mode == EnumMode::Exact) {
    arcs.reserve(n * n);
    for (std::size_t start = 0; start < n; ++start)
      for (std::size_t len = 1; len <= n; ++len) arcs.push_back(Arc{axis, start, len});
    return arcs;
  }
  if (!is_power_of_two(n))
    throw InvalidArgument("dyadic mode needs power-of-two axis lengths, axis " +
                          std::to_string(axis) + " has " + std::to_string(n));
  for (std::size_t start = 0; start < n; ++start)
    for (std::size_t len = 1; len <= n; len *= 2)
      if (start % len == 0) arcs.push_back(Arc{axis, start, len});
  return arcs;
}

namespace detail {

RectFamily::RectFamily(const Dims& dims, EnumMode mode) : dims_(dims), mode_(mode) {
  for (std::size_t j = 0; j < dims_.size(); ++j) {
    arcs_.push_back(enumerate_arcs(j, dims_[j], mode));
    size_ *= arcs_.back().size();
    std::vector<double> logs(dims_[j] + 1, 0.0);
    for (std::size_t len = 1; len <= dims_[j]; ++len)
      logs[len] = std::log2(4.0 * static_cast<double>(dims_[j]) / static_cast<double>(len));
    log_by_len_.push_back(std::move(logs));
  }
}

void RectFamily::decode(std::uint64_t index, Arc* out) const {
  for (std::size_t j = dims_.size(); j-- > 0;) {
    const std::uint64_t count = arcs_[j].size();
    out[j] = arcs_[j][index % count];
    index /= count;
  }
}

PeriodicRect RectFamily::rect(std::uint64_t index) const {
  std::vector<Arc> arcs(dims_.size());
  decode(index, arcs.data());
  return PeriodicRect(std::move(arcs));
}

double RectFamily::log_weight(const Arc* arcs) const {
  double w = 0.0;
  for (std::size_t j = 0; j < dims_.size(); ++j) w += log_by_len_[j][arcs[j].len];
  return w;
}

RectSweep::RectSweep(const GridFunction& f, const RectFamily& family, Functional functional,
                     Weighting weighting)
    : f_(f), family_(family), functional_(functional), weighting_(weighting), sat_(f) {
  if (family.dims() != f.dims()) throw InvalidArgument("rectangle family does not match grid");
  const std::size_t rank = f.rank();
  const std::size_t last_n = f.dim(rank - 1);
  const std::size_t rows = f.size() / last_n;
  extended_.resize(2 * f.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* src = f.values().data() + r * last_n;
    std::copy(src, src + last_n, extended_.begin() + 2 * r * last_n);
    std::copy(src, src + last_n, extended_.begin() + (2 * r + 1) * last_n);
  }
  ext_strides_.assign(rank, 1);
  if (rank >= 2) {
    ext_strides_[rank - 2] = 2 * last_n;
    for (std::size_t j = rank - 2; j-- > 0;) ext_strides_[j] = ext_strides_[j + 1] * f.dim(j + 1);
  }
  if (functional_ == Functional::CenteredMean) global_mean_ = f.mean();
}

namespace {

// sum_i |p[i] - center| with a fixed, thread-independent summation order.
inline double abs_dev_run(const double* p, std::size_t len, double center) {
  std::size_t i = 0;
  double tail = 0.0;
#if defined(__SSE2__)
  const __m128d c = _mm_set1_pd(center);
  const __m128d abs_mask = _mm_castsi128_pd(_mm_set1_epi64x(0x7fffffffffffffffLL));
  __m128d a0 = _mm_setzero_pd(), a1 = _mm_setzero_pd(), a2 = _mm_setzero_pd(), a3 = _mm_setzero_pd();
  for (; i + 8 <= len; i += 8) {
    a0 = _mm_add_pd(a0, _mm_and_pd(_mm_sub_pd(_mm_loadu_pd(p + i), c), abs_mask));
    a1 = _mm_add_pd(a1, _mm_and_pd(_mm_sub_pd(_mm_loadu_pd(p + i + 2), c), abs_mask));
    a2 = _mm_add_pd(a2, _mm_and_pd(_mm_sub_pd(_mm_loadu_pd(p + i + 4), c), abs_mask));
    a3 = _mm_add_pd(a3, _mm_and_pd(_mm_sub_pd(_mm_loadu_pd(p + i + 6), c), abs_mask));
  }
  for (; i + 2 <= len; i += 2)
    a0 = _mm_add_pd(a0, _mm_and_pd(_mm_sub_pd(_mm_loadu_pd(p + i), c), abs_mask));
  const __m128d s = _mm_add_pd(_mm_add_pd(a0, a1), _mm_add_pd(a2, a3));
  double lanes[2];
  _mm_storeu_pd(lanes, s);
  tail = lanes[0] + lanes[1];
#else
  double acc[4] = {};
  for (; i + 4 <= len; i += 4)
    for (std::size_t k = 0; k < 4; ++k) acc[k] += std::abs(p[i + k] - center);
  tail = (acc[0] + acc[1]) + (acc[2] + acc[3]);
#endif
  for (; i < len; ++i) tail += std::abs(p[i] - center);
  return tail;
}

}  // namespace

double RectSweep::abs_dev_sum(const Arc* arcs, double center) const {
  const std::size_t rank = f_.rank();
  const Arc& inner = arcs[rank - 1];
  const double* base = extended_.data() + inner.start;
  if (rank == 1) return abs_dev_run(base, inner.len, center);

  const std::size_t outer = rank - 1;
  std::size_t cell[16], step[16];
  std::size_t row = 0;
  for (std::size_t j = 0; j < outer; ++j) {
    cell[j] = arcs[j].start;
    step[j] = 0;
    row += cell[j] * ext_strides_[j];
  }
  double total = 0.0;
  while (true) {
    total += abs_dev_run(base + row, inner.len, center);
    std::size_t j = outer;
    while (j-- > 0) {
      const std::size_t n = f_.dim(j);
      row -= cell[j] * ext_strides_[j];
      if (++step[j] < arcs[j].len) {
        cell[j] = cell[j] + 1 == n ? 0 : cell[j] + 1;
        row += cell[j] * ext_strides_[j];
        break;
      }
      step[j] = 0;
      cell[j] = arcs[j].start;
      row += cell[j] * ext_strides_[j];
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return total;
}

void RectSweep::gather(const Arc* arcs, std::vector<double>& out) const {
  const std::size_t rank = f_.rank();
  const Arc& inner = arcs[rank - 1];
  out.clear();
  std::size_t cell[16], step[16];
  std::size_t row = 0;
  for (std::size_t j = 0; j + 1 < rank; ++j) {
    cell[j] = arcs[j].start;
    step[j] = 0;
    row += cell[j] * ext_strides_[j];
  }
  while (true) {
    const double* p = extended_.data() + row + inner.start;
    out.insert(out.end(), p, p + inner.len);
    std::size_t j = rank - 1;
    while (j-- > 0) {
      row -= cell[j] * ext_strides_[j];
      if (++step[j] < arcs[j].len) {
        cell[j] = cell[j] + 1 == f_.dim(j) ? 0 : cell[j] + 1;
        row += cell[j] * ext_strides_[j];
        break;
      }
      step[j] = 0;
      cell[j] = arcs[j].start;
      row += cell[j] * ext_strides_[j];
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
}

double RectSweep::evaluate(const Arc* arcs, State& state) const {
  const std::size_t rank = f_.rank();
  std::size_t cells = 1;
  for (std::size_t j = 0; j < rank; ++j) cells *= arcs[j].len;
  const double inv_cells = 1.0 / static_cast<double>(cells);

  double value = 0.0;
  switch (functional_) {
    case Functional::MeanOsc: {
      const double mean = sat_.sum(std::span<const Arc>(arcs, rank)) * inv_cells;
      value = abs_dev_sum(arcs, mean) * inv_cells;
      break;
    }
    case Functional::MedianOsc: {
      gather(arcs, state.gather);
      auto& v = state.gather;
      auto mid = v.begin() + static_cast<std::ptrdiff_t>((v.size() - 1) / 2);
      std::nth_element(v.begin(), mid, v.end());
      value = abs_dev_run(v.data(), v.size(), *mid) * inv_cells;
      break;
    }
    case Functional::CenteredMean: {
      const double mean = sat_.sum(std::span<const Arc>(arcs, rank)) * inv_cells;
      return std::abs(mean - global_mean_) / family_.log_weight(arcs);
    }
  }
  if (weighting_ == Weighting::Log2) value *= family_.log_weight(arcs);
  return value;
}

double RectSweep::evaluate(std::uint64_t index, State& state) const {
  Arc arcs[16];
  family_.decode(index, arcs);
  return evaluate(arcs, state);
}

Best RectSweep::run(unsigned threads) const {
  return parallel_argmax(
      family_.size(), threads, [this] { return make_state(); },
      [this](State& state, std::uint64_t i) { return Scored{evaluate(i, state), 0}; });
}

}  // namespace detail
}  // namespace osckit
