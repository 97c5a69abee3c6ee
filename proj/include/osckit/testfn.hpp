#pragma once

// Test-function generators: logarithmic shell functions, separable
// combinations of one-variable samplers, and seeded random dyadic sums.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "osckit/grid.hpp"

namespace osckit {

// Concentric shells J = J_0 c J_1 c ... c J_levels = circle around a base
// arc, with |J_k| = min(2^k |J|, 1). An odd extension puts its extra cell on
// the side of decreasing cell index.
struct LogArcSpec {
  std::size_t n = 0;
  Arc base;
  std::size_t levels = 0;  // smallest k with 2^k |J| >= 1

  Arc shell(std::size_t k) const;
};

LogArcSpec log_arc_spec(std::size_t n, const Arc& base);

// Takes the value levels + 2 - k on the shell J_k \ J_{k-1}.
GridFunction make_log_arc(std::size_t n, const Arc& base);
std::vector<double> log_arc_values(std::size_t n, const Arc& base);

// sum_j log_{I_j}(t_j) for a rectangle covering every axis.
GridFunction make_log_rect(const Dims& dims, const PeriodicRect& rect);

// One-variable function on the circle [0, 1), sampled at cell centers.
using Sampler = std::function<double(double)>;

Sampler cos_wave();
Sampler sawtooth();  // t - 1/2 on [0, 1)
Sampler step();      // indicator of [0, 1/2)
Sampler constant_sampler(double c);

enum class Combine { Sum, Product };

GridFunction make_separable(const Dims& dims, const std::vector<Sampler>& factors, Combine combine);

inline constexpr const char* kPrngId = "mt19937_64/seed_seq(seed_lo,seed_hi,level)";

// Sum over dyadic levels 1..depth of independent +-amplitude values that are
// constant on the level's dyadic boxes. Every axis must be a power of two with
// at least `depth` halvings available.
GridFunction make_random_dyadic(const Dims& dims, std::size_t depth, double amplitude,
                                std::uint64_t seed);

// Dispatches a JSON generator spec:
//   {"kind":"log_arc","start":s,"len":l}                      (rank 1)
//   {"kind":"log_rect","arcs":[{"start":s,"len":l},...]}      (one per axis)
//   {"kind":"separable","factors":["cos",...],"combine":"product"|"sum"}
//   {"kind":"random","depth":d,"amplitude":a,"seed":s}
//   {"kind":"constant","value":c}
// Separable factors are "cos", "sawtooth", "step" or {"const": c}.
GridFunction generate(const nlohmann::json& spec, const Dims& dims);

}  // namespace osckit
