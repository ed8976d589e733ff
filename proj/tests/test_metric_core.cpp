#include <gtest/gtest.h>

#include <memory>

#include "fractal/compact_set.hpp"
#include "fractal/metric_space.hpp"
#include "oracle_helpers.hpp"

using namespace fractal;

namespace {

std::shared_ptr<const FiniteMetricSpace> shared(FiniteMetricSpace s) {
  return std::make_shared<const FiniteMetricSpace>(std::move(s));
}

// Rational line metric on the given positions.
FiniteMetricSpace line_space(const std::vector<Rat>& pos) {
  std::vector<std::vector<Rat>> d(pos.size(), std::vector<Rat>(pos.size(), Rat(0)));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    labels.push_back("x" + std::to_string(i));
    for (std::size_t j = 0; j < pos.size(); ++j)
      d[i][j] = pos[i] >= pos[j] ? pos[i] - pos[j] : pos[j] - pos[i];
  }
  return validate_metric(std::move(d), std::move(labels));
}

}  // namespace

TEST(ValidateMetric, AcceptsDegenerateOnePoint) {
  auto s = validate_metric({{Rat(0)}}, {"only"});
  EXPECT_EQ(s.size(), 1);
}

TEST(ValidateMetric, AcceptsTwoPoint) {
  auto s = validate_metric({{Rat(0), Rat(1)}, {Rat(1), Rat(0)}}, {"a", "b"});
  EXPECT_EQ(s.distance(0, 1), Rat(1));
}

TEST(ValidateMetric, NamesFirstTriangleViolation) {
  try {
    validate_metric({{Rat(0), Rat(1), Rat(3)}, {Rat(1), Rat(0), Rat(1)}, {Rat(3), Rat(1), Rat(0)}}, {});
    FAIL() << "expected TriangleViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.name(), "TriangleViolation(0,2,1)");
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
  }
}

TEST(ValidateMetric, NamesOtherAxiomFailures) {
  try {
    validate_metric({{Rat(0), Rat(1)}, {Rat(2), Rat(0)}}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.name(), "AsymmetricMatrix(0,1)");
  }
  try {
    validate_metric({{Rat(1), Rat(1)}, {Rat(1), Rat(0)}}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.name(), "NonzeroDiagonal(0)");
  }
  try {
    validate_metric({{Rat(0), Rat(0)}, {Rat(0), Rat(0)}}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.name(), "ZeroOffDiagonal(0,1)");
  }
}

TEST(ValidateMetric, AgreesWithTripleScanOnRandomMatrices) {
  SplitMix64 rng(2024);
  int valid_count = 0, invalid_count = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(8));
    std::vector<std::vector<Rat>> m;
    if (rng.below(2) == 0) {
      m = oracle::random_metric_matrix(rng, n);
      // Half of these get a random symmetric corruption.
      if (rng.below(2) == 0) {
        const int i = static_cast<int>(rng.below(n));
        int j = static_cast<int>(rng.below(n));
        if (i == j) j = (j + 1) % n;
        const Rat v(BigInt(rng.below(40)), BigInt(1 + rng.below(3)));
        m[i][j] = v;
        m[j][i] = v;
      }
    } else {
      // Fully random symmetric nonnegative matrix.
      m.assign(n, std::vector<Rat>(n, Rat(0)));
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const Rat v(BigInt(rng.below(12)), BigInt(1 + rng.below(4)));
          m[i][j] = v;
          m[j][i] = v;
        }
    }
    const bool oracle_ok = !oracle::triple_scan(m).has_value();
    bool impl_ok = true;
    try {
      validate_metric(m, {});
    } catch (const Error&) {
      impl_ok = false;
    }
    EXPECT_EQ(impl_ok, oracle_ok);
    (oracle_ok ? valid_count : invalid_count)++;
  }
  EXPECT_GT(valid_count, 20);
  EXPECT_GT(invalid_count, 20);
}

TEST(Hausdorff, IdenticalSetsAreAtDistanceZero) {
  auto s = shared(oracle::random_space(*std::make_unique<SplitMix64>(7), 6));
  auto a = make_set(s, {0, 2, 4});
  auto b = make_set(s, {4, 0, 2});
  EXPECT_EQ(hausdorff_distance(a, b), Rat(0));
  EXPECT_TRUE(a.same_set(b));
}

TEST(Hausdorff, SingletonsReduceToPointDistance) {
  SplitMix64 rng(11);
  auto s = shared(oracle::random_space(rng, 5));
  auto a = make_set(s, {1});
  auto b = make_set(s, {3});
  EXPECT_EQ(hausdorff_distance(a, b), s->distance(1, 3));
}

TEST(Hausdorff, TwoPointLineExample) {
  auto s = shared(line_space({Rat(0), Rat(1)}));
  auto a = make_set(s, {0, 1});
  auto b = make_set(s, {0});
  EXPECT_EQ(hausdorff_distance(a, b), Rat(1));
}

TEST(Hausdorff, MixedAmbientRejected) {
  SplitMix64 rng(3);
  auto s1 = shared(oracle::random_space(rng, 4));
  auto s2 = shared(oracle::random_space(rng, 4));
  auto a = make_set(s1, {0});
  auto b = make_set(s2, {0});
  try {
    hausdorff_distance(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.name(), "MixedAmbient");
  }
}

TEST(Hausdorff, MatchesBruteOracleAndIsAMetric) {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(10));
    auto s = shared(oracle::random_space(rng, n));
    auto draw = [&] {
      const std::size_t k = 1 + rng.below(static_cast<std::uint64_t>(n));
      std::vector<int> pts;
      for (std::size_t i = 0; i < k; ++i) pts.push_back(static_cast<int>(rng.below(n)));
      return make_set(s, std::move(pts));
    };
    auto a = draw(), b = draw(), c = draw();
    const Rat ab = hausdorff_distance(a, b);
    const Rat ba = hausdorff_distance(b, a);
    const Rat ac = hausdorff_distance(a, c);
    const Rat bc = hausdorff_distance(b, c);
    EXPECT_EQ(ab, oracle::brute_hausdorff(*s, a.points(), b.points()));
    EXPECT_EQ(ab, ba);
    EXPECT_EQ(ab == 0, a.same_set(b));
    EXPECT_LE(ac, ab + bc);
  }
}

TEST(SetImage, IdentityAndConstant) {
  SplitMix64 rng(5);
  auto s = shared(oracle::random_space(rng, 5));
  std::vector<int> ident(5), constant(5, 2);
  for (int i = 0; i < 5; ++i) ident[i] = i;
  auto k = make_set(s, {0, 1, 3});
  EXPECT_TRUE(set_image(TableMap::total(ident), k).same_set(k));
  auto c = set_image(TableMap::total(constant), k);
  EXPECT_EQ(c.size(), 1u);
  EXPECT_EQ(c.points()[0], 2);
}

TEST(SetImage, HalfScalingAffineOnLine) {
  auto s = std::make_shared<const EuclideanSpace>(1);
  auto f = affine_scale_shift(1, 0.5, vec1(0.0));
  auto k = make_set(s, {vec1(0.0), vec1(1.0)});
  auto img = set_image(f, k);
  EXPECT_EQ(img.size(), 2u);
  EXPECT_TRUE(img.contains(vec1(0.0)));
  EXPECT_TRUE(img.contains(vec1(0.5)));
}

TEST(SetImage, DomainMissNamesThePoint) {
  auto s = shared(line_space({Rat(0), Rat(1)}));
  TableMap partial;
  partial.image = {std::make_optional(0), std::nullopt};
  auto k = make_set(s, {0, 1});
  try {
    set_image(partial, k);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.name(), "DomainMiss(x1)");
  }
}

TEST(SetImage, Monotone) {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(8));
    auto s = shared(oracle::random_space(rng, n));
    std::vector<int> img(n);
    for (int i = 0; i < n; ++i) img[i] = static_cast<int>(rng.below(n));
    const TableMap f = TableMap::total(img);
    std::vector<int> small, big;
    for (int i = 0; i < n; ++i) {
      if (rng.below(2)) big.push_back(i);
    }
    if (big.empty()) big.push_back(0);
    for (int p : big)
      if (rng.below(2)) small.push_back(p);
    if (small.empty()) small.push_back(big[0]);
    auto fs = set_image(f, make_set(s, small));
    auto fb = set_image(f, make_set(s, big));
    for (int p : fs.points()) EXPECT_TRUE(fb.contains(p));
  }
}

TEST(CompactSet, RejectsEmpty) {
  SplitMix64 rng(1);
  auto s = shared(oracle::random_space(rng, 3));
  EXPECT_THROW(make_set(s, {}), Error);
}

TEST(Subspace, PreservesDistances) {
  SplitMix64 rng(23);
  auto s = oracle::random_space(rng, 7);
  auto sub = subspace(s, {1, 3, 6});
  EXPECT_EQ(sub.size(), 3);
  EXPECT_EQ(sub.distance(0, 1), s.distance(1, 3));
  EXPECT_EQ(sub.distance(1, 2), s.distance(3, 6));
  EXPECT_EQ(sub.label(2), s.label(6));
}
