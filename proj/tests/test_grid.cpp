#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "oracle.hpp"
#include "osckit/grid.hpp"

using namespace osckit;
using testing_util::uniform_noise;

TEST(GridFunction, RejectsBadShapes) {
  EXPECT_THROW(GridFunction({}, {}), InvalidArgument);
  EXPECT_THROW(GridFunction({1}, {0.0}), InvalidArgument);
  EXPECT_THROW(GridFunction({2, 2}, {0.0, 1.0, 2.0}), InvalidArgument);
  EXPECT_THROW(GridFunction({2}, {0.0, NAN}), InvalidArgument);
  EXPECT_THROW(GridFunction({2}, {0.0, INFINITY}), InvalidArgument);
  EXPECT_NO_THROW(GridFunction({2, 3}, std::vector<double>(6, 1.0)));
}

TEST(GridFunction, RowMajorLastAxisFastest) {
  GridFunction f({2, 3}, {0, 1, 2, 3, 4, 5});
  const std::size_t idx[] = {1, 2};
  EXPECT_EQ(f.flat_index(idx), 5u);
  EXPECT_EQ(f.at(idx), 5.0);
  EXPECT_EQ(f.stride(0), 3u);
  EXPECT_EQ(f.stride(1), 1u);
  EXPECT_DOUBLE_EQ(f.mean(), 2.5);
  EXPECT_EQ(f.sup_abs(), 5.0);
}

TEST(Arc, LengthWrapAndContainment) {
  const Arc a{0, 3, 2};
  EXPECT_TRUE(a.wraps(4));
  EXPECT_TRUE(a.contains(3, 4));
  EXPECT_TRUE(a.contains(0, 4));
  EXPECT_FALSE(a.contains(1, 4));
  EXPECT_DOUBLE_EQ(a.length(4), 0.5);
  EXPECT_THROW(validate_arc(Arc{0, 4, 1}, 4), InvalidArgument);
  EXPECT_THROW(validate_arc(Arc{0, 0, 0}, 4), InvalidArgument);
  EXPECT_THROW(validate_arc(Arc{0, 0, 5}, 4), InvalidArgument);
}

TEST(PeriodicRect, SortsAxesAndRejectsDuplicates) {
  PeriodicRect r({Arc{1, 0, 2}, Arc{0, 1, 3}});
  EXPECT_EQ(r.arcs[0].axis, 0u);
  EXPECT_EQ(r.cell_count(), 6u);
  EXPECT_DOUBLE_EQ(r.measure({4, 4}), 6.0 / 16.0);
  EXPECT_THROW(PeriodicRect({Arc{0, 0, 1}, Arc{0, 1, 1}}), InvalidArgument);
}

TEST(CoordSplit, MasksAndOrder) {
  const auto splits = all_splits(3);
  ASSERT_EQ(splits.size(), 6u);
  for (std::size_t i = 0; i < splits.size(); ++i) EXPECT_EQ(splits[i].mask(), i + 1);
  const CoordSplit s = CoordSplit::from_mask(0b101, 3);
  EXPECT_EQ(s.averaged_axes(), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(s.remaining_axes(), (std::vector<std::size_t>{1}));
  EXPECT_THROW(CoordSplit({}, 2), InvalidArgument);
  EXPECT_THROW(CoordSplit({0, 1}, 2), InvalidArgument);
}

TEST(SummedAreaTable, OneDimensionalExamples) {
  GridFunction f({4}, {0, 1, 2, 3});
  SummedAreaTable sat(f);
  EXPECT_EQ(sat.sum(PeriodicRect({Arc{0, 1, 2}})), 3.0);
  EXPECT_EQ(rect_mean(sat, PeriodicRect({Arc{0, 1, 2}})), 1.5);
  EXPECT_EQ(sat.sum(PeriodicRect({Arc{0, 3, 2}})), 3.0);
  EXPECT_EQ(sat.sum(full_torus(f.dims())), 6.0);
}

TEST(SummedAreaTable, MatchesDirectSumsOnRandomRects) {
  std::mt19937_64 rng(7);
  for (const Dims& dims : {Dims{7}, Dims{5, 6}, Dims{3, 4, 5}, Dims{2, 3, 2, 3}, Dims{2, 2, 2, 2, 3}}) {
    const GridFunction f = uniform_noise(dims, dims.size());
    const oracle::Field of = oracle::from(f);
    SummedAreaTable sat(f);
    for (int t = 0; t < 300; ++t) {
      std::vector<Arc> arcs;
      std::vector<oracle::A> oarcs;
      for (std::size_t j = 0; j < dims.size(); ++j) {
        const std::size_t s = rng() % dims[j], l = 1 + rng() % dims[j];
        arcs.push_back(Arc{j, s, l});
        oarcs.push_back({s, l});
      }
      const auto vals = oracle::values_in(of, oarcs);
      double direct = 0;
      for (double v : vals) direct += v;
      EXPECT_NEAR(sat.sum(PeriodicRect(arcs)), direct, 1e-12);
    }
  }
}

TEST(SummedAreaTable, RejectsMismatchedRects) {
  GridFunction f({4, 4}, std::vector<double>(16, 1.0));
  SummedAreaTable sat(f);
  EXPECT_THROW(sat.sum(PeriodicRect({Arc{0, 0, 2}})), InvalidArgument);
  EXPECT_THROW(sat.sum(PeriodicRect({Arc{0, 0, 2}, Arc{1, 0, 5}})), InvalidArgument);
}

TEST(PartialMean, MatchesOracle) {
  const GridFunction f = uniform_noise({4, 3, 5}, 11);
  const oracle::Field of = oracle::from(f);
  for (const CoordSplit& split : all_splits(3)) {
    std::vector<Arc> arcs;
    std::vector<oracle::A> oarcs;
    for (std::size_t a : split.averaged_axes()) {
      arcs.push_back(Arc{a, f.dim(a) - 1, 2});
      oarcs.push_back({f.dim(a) - 1, 2});
    }
    const GridFunction g = partial_mean(f, split, PeriodicRect(arcs));
    const oracle::Field og = oracle::partial_mean(of, split.mask(), oarcs);
    ASSERT_EQ(g.dims(), og.dims);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g[i], og.v[i], 1e-13);
  }
}

TEST(Slice, FreezesRemainingAxes) {
  const GridFunction f = uniform_noise({3, 4, 2}, 5);
  const oracle::Field of = oracle::from(f);
  const CoordSplit split = CoordSplit::from_mask(0b010, 3);
  const std::size_t frozen[] = {2, 1};
  const GridFunction g = slice(f, split, frozen);
  const oracle::Field og = oracle::slice(of, 0b010, {2, 1});
  ASSERT_EQ(g.dims(), og.dims);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g[i], og.v[i]);
}

TEST(PairwiseScan, ExactOnIntegersAndOrderFixed) {
  std::vector<double> v(37);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i % 5);
  std::vector<double> expect(v.size());
  double run = 0;
  for (std::size_t i = 0; i < v.size(); ++i) expect[i] = run += v[i];
  pairwise_inclusive_scan(v);
  EXPECT_EQ(v, expect);
}

TEST(Multiply, PointwiseAndShapeChecked) {
  GridFunction a({2}, {2, 3}), b({2}, {4, -1});
  EXPECT_EQ(multiply(a, b).values()[0], 8.0);
  EXPECT_EQ(multiply(a, b).values()[1], -3.0);
  EXPECT_THROW(multiply(a, GridFunction({3}, {1, 1, 1})), InvalidArgument);
}
