#include "chsh/sweep.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace chsh;

namespace {

nlohmann::json base_spec() {
  return {
      {"family", "L_a2b2"},
      {"axes", {{{"param", "a"}, {"min", -1.0}, {"max", 1.0}, {"steps", 3}}}},
      {"fixed", {{"b", "0.5"}}},
      {"f", "xyz + xy!w + xz!w + yz!w + w!x!y!z"},
      {"optimizer", {{"restarts", 3}}},
  };
}

} // namespace

TEST(SweepAxis, EndpointsInclusive) {
  const SweepAxis axis{"a", -9, 9, 37};
  EXPECT_DOUBLE_EQ(axis.value(0), -9.0);
  EXPECT_DOUBLE_EQ(axis.value(18), 0.0);
  EXPECT_DOUBLE_EQ(axis.value(36), 9.0);
}

TEST(SweepSpec, ParsesAndRoundTrips) {
  const auto spec = SweepSpec::from_json(base_spec());
  EXPECT_NO_THROW(spec.validate());
  EXPECT_EQ(spec.family, FamilyId::L_a2b2);
  EXPECT_EQ(spec.equation.g, TruthTable::parity(4));
  const auto again = SweepSpec::from_json(spec.to_json());
  EXPECT_EQ(again.to_json().dump(), spec.to_json().dump());
}

TEST(SweepSpec, ParamsAtAppliesTies) {
  auto j = base_spec();
  j["family"] = "L_abc2";
  j["fixed"] = {{"c", "2i"}};
  j["ties"] = {{"b", "-a"}};
  const auto spec = SweepSpec::from_json(j);
  spec.validate();
  const auto p = spec.params_at({0.25});
  ASSERT_EQ(p.values.size(), 3u);
  EXPECT_EQ(p.values[0], Complex(0.25));
  EXPECT_EQ(p.values[1], Complex(-0.25));
  EXPECT_EQ(p.values[2], Complex(0, 2));
}

TEST(SweepSpec, ValidationErrors) {
  auto expect_invalid = [](nlohmann::json j) { EXPECT_THROW(SweepSpec::from_json(j).validate(), std::invalid_argument) << j.dump(); };
  auto j = base_spec();
  j["axes"][0]["max"] = -1.0;
  expect_invalid(j);
  j = base_spec();
  j["axes"][0]["steps"] = 1;
  expect_invalid(j);
  j = base_spec();
  j.erase("fixed");
  expect_invalid(j);
  j = base_spec();
  j["fixed"]["a"] = 1.0;
  expect_invalid(j);
  j = base_spec();
  j["fixed"]["q"] = 1.0;
  expect_invalid(j);
  j = base_spec();
  j["family"] = "L_0_7p1";
  j["fixed"] = nlohmann::json::object();
  expect_invalid(j);
  j = base_spec();
  j["family"] = "nope";
  EXPECT_THROW(SweepSpec::from_json(j), std::invalid_argument);
}

TEST(RunSweep, GridLayoutAndDeterminism) {
  auto j = base_spec();
  j["family"] = "L_a2b2";
  j.erase("fixed");
  j["axes"].push_back({{"param", "b"}, {"min", 0.0}, {"max", 1.0}, {"steps", 2}});
  const auto spec = SweepSpec::from_json(j);
  const auto one = run_sweep(spec, 1);
  const auto two = run_sweep(spec, 2);
  ASSERT_EQ(one.points.size(), 6u);
  EXPECT_EQ(one.points[1].coords, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(one.points[4].coords, (std::vector<double>{0.0, 1.0}));
  std::ostringstream a, b;
  write_sweep_csv(a, one);
  write_sweep_csv(b, two);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
            "a,b,gain,valid,theta_1_0,phi_1_0,lambda_1_0,theta_1_1,phi_1_1,lambda_1_1,theta_2_0,phi_2_0,lambda_2_0,"
            "theta_2_1,phi_2_1,lambda_2_1,theta_3_0,phi_3_0,lambda_3_0,theta_3_1,phi_3_1,lambda_3_1,theta_4_0,phi_4_0,"
            "lambda_4_0,theta_4_1,phi_4_1,lambda_4_1");
  for (const auto& p : one.points) {
    EXPECT_TRUE(p.valid);
    EXPECT_GE(p.gain, 0.5);
    EXPECT_LE(p.gain, 1.0);
  }
}

TEST(RunSweep, ZeroVectorPointsAreFlagged) {
  nlohmann::json j = {
      {"family", "G_abcd"},
      {"axes", {{{"param", "a"}, {"min", -1.0}, {"max", 1.0}, {"steps", 3}}}},
      {"fixed", {{"b", 0.0}, {"c", 0.0}}},
      {"ties", {{"d", "a"}}},
      {"f", "wx"},
      {"optimizer", {{"restarts", 2}}},
  };
  const auto result = run_sweep(SweepSpec::from_json(j), 1);
  ASSERT_EQ(result.points.size(), 3u);
  EXPECT_TRUE(result.points[0].valid);
  EXPECT_FALSE(result.points[1].valid);
  EXPECT_FALSE(result.points[1].error.empty());
  EXPECT_TRUE(result.points[2].valid);
  std::ostringstream csv;
  write_sweep_csv(csv, result);
  EXPECT_NE(csv.str().find("\n0,,0,"), std::string::npos);
}

TEST(FamilyReport, ParameterFreeIsSingleEvaluation) {
  OptimizerConfig cfg;
  cfg.restarts = 4;
  const auto spec = SweepSpec::from_json(base_spec());
  const auto r = family_report(FamilyId::L_0_3p1_0_3p1, spec.equation, 4, cfg, 1);
  EXPECT_EQ(r.gains.size(), 1u);
  EXPECT_FALSE(r.average.has_value());
  const auto p = family_report(FamilyId::L_a4, spec.equation, 3, cfg, 2);
  EXPECT_EQ(p.gains.size(), 3u);
  ASSERT_TRUE(p.average.has_value());
  EXPECT_GE(p.best, *p.average);
  EXPECT_THROW(family_report(FamilyId::L_a4, spec.equation, 0, cfg, 1), std::invalid_argument);
}
