#include "fractal/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "oracle_helpers.hpp"

using namespace fractal;

TEST(Io, SpaceSurvivesCsvAndJson) {
  SplitMix64 rng(211);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = oracle::random_space(rng, 2 + static_cast<int>(rng.below(7)));
    std::istringstream csv(space_to_csv(s));
    EXPECT_TRUE(space_from_csv(csv) == s);
    EXPECT_TRUE(space_from_json(space_to_json(s)) == s);
  }
}

TEST(Io, MeasureAndModulusSurviveJson) {
  SplitMix64 rng(223);
  auto s = std::make_shared<const FiniteMetricSpace>(oracle::random_space(rng, 6));
  for (int trial = 0; trial < 10; ++trial) {
    const auto mu = random_measure(s, rng);
    EXPECT_TRUE(measure_from_json(measure_to_json(mu), s) == mu);
    const auto phi = oracle::random_modulus(rng);
    const auto back = modulus_from_json(modulus_to_json(phi));
    EXPECT_EQ(back.breakpoints(), phi.breakpoints());
    EXPECT_EQ(back.tail_slope(), phi.tail_slope());
  }
}

TEST(Io, DecimalAndRationalLiteralsBothAccepted) {
  Json j;
  j["labels"] = {"a", "b"};
  Json row0 = Json::array({"0", "0.5"});
  Json row1 = Json::array({"1/2", 0});
  j["dist"] = Json::array({row0, row1});
  const auto s = space_from_json(j);
  EXPECT_EQ(s.distance(0, 1), make_rat(1, 2));
}
