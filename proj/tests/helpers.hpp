#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "osckit/grid.hpp"

namespace testing_util {

inline osckit::GridFunction uniform_noise(const osckit::Dims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(osckit::cell_count(dims));
  for (double& x : v) x = u(rng);
  return osckit::GridFunction(dims, std::move(v));
}

inline bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// Cyclic shift by `offset` cells along every axis.
inline osckit::GridFunction roll(const osckit::GridFunction& f, const std::vector<std::size_t>& offset) {
  std::vector<double> v(f.size());
  std::vector<std::size_t> idx(f.rank(), 0), dst(f.rank());
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    std::size_t rest = flat;
    for (std::size_t j = f.rank(); j-- > 0;) {
      idx[j] = rest % f.dim(j);
      rest /= f.dim(j);
    }
    for (std::size_t j = 0; j < f.rank(); ++j) dst[j] = (idx[j] + offset[j]) % f.dim(j);
    v[f.flat_index(dst)] = f[flat];
  }
  return osckit::GridFunction(f.dims(), std::move(v));
}

}  // namespace testing_util
