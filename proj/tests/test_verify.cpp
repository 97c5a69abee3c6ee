#include <gtest/gtest.h>

#include <sstream>

#include "helpers.hpp"
#include "osckit/verify.hpp"

using namespace osckit;
using nlohmann::json;

namespace {

const json kCosCos = json::parse(R"({"kind":"separable","factors":["cos","cos"],"combine":"product"})");
const json kStepStep = json::parse(R"({"kind":"separable","factors":["step","step"],"combine":"product"})");

json constant_phi(double c) { return {{"kind", "constant"}, {"value", c}}; }

}  // namespace

TEST(Verify, StrictlyIncreasing) {
  EXPECT_TRUE(strictly_increasing({1, 2, 3}));
  EXPECT_FALSE(strictly_increasing({1, 2, 2}));
  EXPECT_FALSE(strictly_increasing({1}));
  EXPECT_FALSE(strictly_increasing({}));
  EXPECT_FALSE(strictly_increasing({1.0, 1.0 + 1e-13}));
}

TEST(Verify, RectFamilies) {
  const auto squares = log_rect_family(LogRectFamily::DyadicSquares, {16, 16});
  ASSERT_EQ(squares.size(), 4u);
  EXPECT_EQ(squares.front(), PeriodicRect({Arc{0, 0, 8}, Arc{1, 0, 8}}));
  EXPECT_EQ(squares.back(), PeriodicRect({Arc{0, 0, 1}, Arc{1, 0, 1}}));
  const auto strips = log_rect_family(LogRectFamily::ThinStrips, {16, 8});
  ASSERT_EQ(strips.size(), 2u);
  EXPECT_EQ(strips[1], PeriodicRect({Arc{0, 0, 16}, Arc{1, 0, 1}}));
  EXPECT_EQ(parse_family("thin_strips"), LogRectFamily::ThinStrips);
  EXPECT_THROW(parse_family("circles"), InvalidArgument);
  EXPECT_THROW(log_rect_family(LogRectFamily::DyadicSquares, {16, 8}), InvalidArgument);
}

TEST(Verify, SamplePhiTakesRankFromFactors) {
  EXPECT_EQ(sample_phi(kCosCos, 8, 1).dims(), (Dims{8, 8}));
  EXPECT_EQ(sample_phi(constant_phi(1), 8, 2).dims(), (Dims{8, 8}));
}

TEST(Verify, EquivalencesPassOnNoise) {
  const ExperimentReport r = check_equivalences(testing_util::uniform_noise({6, 6}, 4));
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.number("star"), r.number("bmo") + 1e-12);
  EXPECT_LE(r.number("bmo_m"), r.number("bmo") + 1e-12);
}

TEST(Verify, DivergenceIsExactlyConstantForConstantPhi) {
  for (double c : {2.0, -3.0, 0.5}) {
    const ExperimentReport r = divergence_witness(constant_phi(c), LogRectFamily::ThinStrips, {8, 16});
    for (double d : r.sweep("d").values) EXPECT_TRUE(testing_util::rel_close(d, std::abs(c), 1e-12));
    EXPECT_FALSE(r.pass);
  }
}

TEST(Verify, DivergenceGrowsForStepOnSmallGrids) {
  const ExperimentReport r = divergence_witness(kStepStep, LogRectFamily::ThinStrips, {8, 16, 32});
  EXPECT_TRUE(r.pass) << r.to_json().dump();
}

TEST(Verify, EmbeddingRatioNeverExceedsTwo) {
  // bmo <= 2 max-slice <= 2 bmo_m on any grid, so r <= 2 whatever phi is.
  for (const json& phi : {kCosCos, kStepStep, constant_phi(1.0)}) {
    const ExperimentReport r = embedding_gap_sweep(phi, LogRectFamily::DyadicSquares, {8, 16});
    for (double v : r.sweep("r").values) {
      EXPECT_GE(v, 1.0 - 1e-12);
      EXPECT_LE(v, 2.0 + 1e-12);
    }
  }
}

TEST(Verify, ConstantMultiplierBoundIsAtMostOne) {
  // phi = 1: bmo_m(f) <= bmo(f) and the scale factor is 1.
  const ExperimentReport r = multiplier_upper_bound(constant_phi(1.0), {8, 16}, 4, 0);
  for (double k : r.sweep("K").values) {
    EXPECT_GT(k, 0.0);
    EXPECT_LE(k, 1.0 + 1e-12);
  }
  EXPECT_TRUE(r.pass);
}

TEST(Verify, LmoContrastSmallerGrids) {
  const ExperimentReport r = lmo_contrast_sweep(kCosCos, {8, 16});
  ASSERT_EQ(r.sweep("lmo").values.size(), 2u);
  EXPECT_GT(r.sweep("lmo").values[1], r.sweep("lmo").values[0]);
}

TEST(Verify, ReportSerialisation) {
  const ExperimentReport r = run_experiment("mean_bound_sharpness",
                                            json{{"n", 8}, {"random_count", 3}, {"seed", 77}});
  const json j = r.to_json();
  EXPECT_EQ(j.at("schema"), kReportSchema);
  EXPECT_EQ(j.at("prng"), kPrngId);
  EXPECT_EQ(j.at("params").at("seed"), 77);
  EXPECT_TRUE(j.at("verdict") == "pass" || j.at("verdict") == "fail");
  EXPECT_EQ(j.at("numbers").at("c_emp").get<double>(), r.number("c_emp"));

  std::istringstream csv(r.to_csv());
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "experiment,metric,n,value");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    EXPECT_EQ(line.rfind("mean_bound_sharpness,", 0), 0u);
    ++rows;
  }
  EXPECT_EQ(rows, r.numbers.size() + 1);  // numbers plus the verdict row
}

TEST(Verify, SweepCsvRowsPerSize) {
  const ExperimentReport r = run_experiment("lmo_contrast", json{{"sizes", {4, 8}}});
  const std::string csv = r.to_csv();
  EXPECT_NE(csv.find("lmo_contrast,lmo,4,"), std::string::npos);
  EXPECT_NE(csv.find("lmo_contrast,lmo_m,8,"), std::string::npos);
}

TEST(Verify, RunsAreReproducible) {
  const json p{{"n", 8}, {"random_count", 4}, {"seed", 5}};
  EXPECT_EQ(run_experiment("mean_bound_sharpness", p).to_json(), run_experiment("mean_bound_sharpness", p).to_json());
  ExperimentOptions four;
  four.sweep.threads = 4;
  json a = run_experiment("mean_bound_sharpness", p).to_json();
  json b = run_experiment("mean_bound_sharpness", p, four).to_json();
  EXPECT_EQ(a, b);
}

TEST(Verify, UnknownExperimentListsNames) {
  try {
    run_experiment("bogus", json::object());
    FAIL();
  } catch (const InvalidArgument& e) {
    for (const auto& n : experiment_names()) EXPECT_NE(std::string(e.what()).find(n), std::string::npos);
  }
  EXPECT_THROW(run_experiment("divergence", json{{"sizes", "x"}}), InvalidArgument);
  EXPECT_THROW(run_experiment("divergence", json::array()), InvalidArgument);
}

TEST(Verify, ConstantPhiEmbeddingRatioIgnoresTheConstant) {
  // With phi = c the ratio is bmo(L) / bmo_m(L): it depends on the family
  // only, not on c.
  const auto a = embedding_gap_sweep(constant_phi(1.0), LogRectFamily::DyadicSquares, {8, 16}).sweep("r").values;
  const auto b = embedding_gap_sweep(constant_phi(-4.0), LogRectFamily::DyadicSquares, {8, 16}).sweep("r").values;
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(testing_util::rel_close(a[i], b[i], 1e-12));
}
