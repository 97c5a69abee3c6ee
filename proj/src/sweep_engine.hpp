#pragma once

// Internal rectangle enumeration machinery shared by the norm evaluators.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "osckit/grid.hpp"
#include "osckit/norms.hpp"

namespace osckit::detail {

// Candidate index plus an auxiliary payload (inner argmax for nested sweeps).
struct Scored {
  double value = 0.0;
  std::uint64_t aux = 0;
};

struct Best {
  double value = 0.0;
  std::uint64_t index = 0;
  std::uint64_t aux = 0;
  bool found = false;
};

// Strict ">" keeps the first maximum in index order, so ties resolve to the
// smallest index no matter how the range is chunked across workers.
template <class MakeState, class Eval>
Best parallel_argmax(std::uint64_t count, unsigned threads, MakeState make_state, Eval eval) {
  auto run_range = [&](auto& state, std::uint64_t begin, std::uint64_t end) {
    Best best;
    for (std::uint64_t i = begin; i < end; ++i) {
      const Scored s = eval(state, i);
      if (!best.found || s.value > best.value) best = Best{s.value, i, s.aux, true};
    }
    return best;
  };

  if (count == 0) return Best{};
  if (threads <= 1 || count < 2) {
    auto state = make_state();
    return run_range(state, 0, count);
  }

  const std::uint64_t chunks = std::min<std::uint64_t>(count, std::uint64_t{threads} * 16);
  std::vector<Best> partial(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      auto state = make_state();
      for (std::uint64_t c; (c = next.fetch_add(1)) < chunks;) {
        partial[c] = run_range(state, c * count / chunks, (c + 1) * count / chunks);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(chunks);
    }
  };
  std::vector<std::thread> pool;
  const unsigned spawn = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  Best best;
  for (const Best& b : partial) {
    if (b.found && (!best.found || b.value > best.value)) best = b;
  }
  return best;
}

// The arcs enumerated on each axis of a grid, in (start, len) order, and the
// mixed-radix index space over their product (axis 0 most significant).
class RectFamily {
 public:
  RectFamily(const Dims& dims, EnumMode mode);

  const Dims& dims() const noexcept { return dims_; }
  std::size_t rank() const noexcept { return dims_.size(); }
  std::uint64_t size() const noexcept { return size_; }
  EnumMode mode() const noexcept { return mode_; }

  void decode(std::uint64_t index, Arc* out) const;
  PeriodicRect rect(std::uint64_t index) const;
  double log_weight(const Arc* arcs) const;

 private:
  Dims dims_;
  EnumMode mode_;
  std::vector<std::vector<Arc>> arcs_;
  std::vector<std::vector<double>> log_by_len_;
  std::uint64_t size_ = 1;
};

enum class Functional {
  MeanOsc,       // mean |f - m_R f|
  MedianOsc,     // mean |f - median_R f|
  CenteredMean,  // |m_R f - m f| (divided by the log weight)
};

enum class Weighting { Unit, Log2 };

// Evaluates one functional over every rectangle of a family for one function.
class RectSweep {
 public:
  RectSweep(const GridFunction& f, const RectFamily& family, Functional functional,
            Weighting weighting);

  struct State {
    std::vector<double> gather;
  };
  State make_state() const { return State{}; }

  double evaluate(std::uint64_t index, State& state) const;
  double evaluate(const Arc* arcs, State& state) const;
  Best run(unsigned threads) const;

 private:
  double abs_dev_sum(const Arc* arcs, double center) const;
  void gather(const Arc* arcs, std::vector<double>& out) const;

  const GridFunction& f_;
  const RectFamily& family_;
  Functional functional_;
  Weighting weighting_;
  SummedAreaTable sat_;
  // Values with the last axis stored twice so every arc on it is contiguous.
  std::vector<double> extended_;
  std::vector<std::size_t> ext_strides_;
  double global_mean_ = 0.0;
};

}  // namespace osckit::detail
