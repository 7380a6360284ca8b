#include <gtest/gtest.h>

#include "generators.hpp"
#include "glueprint/errors.hpp"
#include "glueprint/torus_mapping_class.hpp"
#include "oracles.hpp"

using namespace glueprint;
using namespace glueprint::torus;
using lattice::QForm;

TEST(DehnTwist, FiberSlope) {
  const TorusAuto d = dehn_twist({0, 1});
  EXPECT_EQ(d.apply({1, 0}), (Slope{1, 1}));
  EXPECT_EQ(d.apply({0, 1}), (Slope{0, 1}));
  EXPECT_EQ(d, fiber_twist(1));
  EXPECT_EQ(d.det(), 1);
}

TEST(DehnTwist, DirectionIndependentAndPowers) {
  props::Gen gen(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = gen.sl2(5);
    const Slope g = u.apply({1, 0});
    EXPECT_EQ(dehn_twist(g), dehn_twist({-g[0], -g[1]}));
    EXPECT_EQ(dehn_twist(g).apply(g), g);
    const std::int64_t a = gen.uniform(-4, 4), b = gen.uniform(-4, 4);
    EXPECT_EQ(dehn_twist_power(g, a) * dehn_twist_power(g, b), dehn_twist_power(g, a + b));
    EXPECT_EQ(dehn_twist_power(g, a) * dehn_twist_power(g, b), dehn_twist_power(g, b) * dehn_twist_power(g, a));
    // Formula: zeta -> zeta + <zeta, g> g.
    const Slope z{gen.uniform(-5, 5), gen.uniform(-5, 5)};
    const std::int64_t w = intersection(z, g);
    EXPECT_EQ(dehn_twist(g).apply(z), (Slope{z[0] + w * g[0], z[1] + w * g[1]}));
  }
}

TEST(DehnTwist, NonPrimitiveRejected) { EXPECT_THROW(dehn_twist({2, 4}), InvalidSlopeError); }

TEST(Pullback, WorkedValues) {
  EXPECT_EQ(pullback_form(QForm::identity(2), TorusAuto::identity()), QForm::identity(2));
  EXPECT_EQ(pullback_form(QForm::diagonal({1, 0}), fiber_twist(7)), QForm::diagonal({1, 0}));
  EXPECT_EQ(pullback_form(QForm::identity(2), TorusAuto::from_entries(0, 1, 1, 0)), QForm::identity(2));
}

TEST(Stabilizer, Generators) {
  const auto deg = stabilizer_generators(QForm::diagonal({1, 0}));
  ASSERT_EQ(deg.size(), 2u);
  EXPECT_EQ(deg[0], TorusAuto::minus_identity());
  EXPECT_EQ(deg[1], TorusAuto::from_entries(1, 0, 1, 1));
  // Determinant-one part of the signed permutations.
  EXPECT_EQ(stabilizer_generators(QForm::identity(2)).size(), 4u);
  EXPECT_EQ(stabilizer_generators(QForm::diagonal({2, 3})).size(), 2u);
  EXPECT_EQ(stabilizer_generators(QForm::from_gram(RatMatrix{{2, 1}, {1, 2}})).size(), 6u);
  EXPECT_THROW(stabilizer_generators(QForm::diagonal({0, 0})), UnsupportedError);
}

TEST(Stabilizer, ContainsMinusIdentityAndPreservesForm) {
  props::Gen gen(4);
  for (int trial = 0; trial < 50; ++trial) {
    const QForm q = QForm::from_gram(gen.definite_gram(2, 2));
    const auto group = finite_stabilizer(q);
    EXPECT_NE(std::find(group.begin(), group.end(), TorusAuto::minus_identity()), group.end());
    for (const auto& g : group) EXPECT_EQ(pullback_form(q, g), q);
  }
}

TEST(DoubleCosets, KernelKernelWorkedValues) {
  const QForm q = QForm::diagonal({1, 0});
  const QForm qp = QForm::diagonal({0, 1});
  EXPECT_TRUE(double_coset_reps(q, qp, 1).reps.empty());
  const auto r5 = double_coset_reps(q, qp, 5).reps;
  ASSERT_EQ(r5.size(), 2u);
  EXPECT_EQ(r5[0].delta, 1);
  EXPECT_EQ(r5[1].delta, 4);
  for (const auto& r : r5) EXPECT_EQ(Rational(r.rep(0, 0) * r.rep(0, 0)), r.delta);
  const auto classes = oracle::brute_double_cosets(q, qp, 5, 6);
  EXPECT_EQ(oracle::class_of(classes, TorusAuto::identity()), oracle::class_of(classes, r5[0].rep));
  EXPECT_EQ(oracle::class_of(classes, TorusAuto::from_entries(2, 1, 1, 1)), oracle::class_of(classes, r5[1].rep));
}

namespace {

void expect_matches_brute_force(const QForm& q, const QForm& qp, const Rational& bound, std::int64_t box) {
  const auto result = double_coset_reps(q, qp, bound);
  const auto classes = oracle::brute_double_cosets(q, qp, bound, box);
  ASSERT_EQ(result.reps.size(), classes.size()) << result.certificate.regime;
  std::vector<int> hit;
  for (const auto& r : result.reps) {
    const int c = oracle::class_of(classes, r.rep);
    ASSERT_GE(c, 0) << r.rep.to_string();
    EXPECT_EQ(classes[static_cast<std::size_t>(c)].delta, r.delta);
    hit.push_back(c);
  }
  std::sort(hit.begin(), hit.end());
  EXPECT_EQ(std::adjacent_find(hit.begin(), hit.end()), hit.end());
}

}  // namespace

TEST(DoubleCosets, MatchBruteForceAcrossRegimes) {
  expect_matches_brute_force(QForm::diagonal({1, 0}), QForm::diagonal({0, 1}), 10, 6);
  expect_matches_brute_force(QForm::identity(2), QForm::identity(2), 5, 4);
  expect_matches_brute_force(QForm::identity(2), QForm::identity(2), 9, 5);
  expect_matches_brute_force(QForm::diagonal({1, 0}), QForm::identity(2), 6, 6);
  expect_matches_brute_force(QForm::identity(2), QForm::diagonal({0, 1}), 6, 6);
  expect_matches_brute_force(QForm::from_gram(RatMatrix{{2, 1}, {1, 1}}), QForm::diagonal({0, 2}), 12, 6);
  expect_matches_brute_force(QForm::from_gram(RatMatrix{{2, 1}, {1, 2}}), QForm::identity(2), 12, 5);
  expect_matches_brute_force(QForm::from_gram(RatMatrix{{1, 1}, {1, 1}}), QForm::diagonal({4, 0}), 30, 6);
}

TEST(DoubleCosets, DeltaIsCosetInvariant) {
  props::Gen gen(8);
  const QForm q = QForm::diagonal({1, 0});
  const QForm qp = QForm::identity(2);
  const auto left = stabilizer_generators(q);
  const auto right = stabilizer_generators(qp);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = gen.sl2(4);
    auto t = s;
    for (int i = 0; i < 3; ++i) {
      t = left[static_cast<std::size_t>(gen.uniform(0, 1))] * t;
      t = t * right[static_cast<std::size_t>(gen.uniform(0, static_cast<std::int64_t>(right.size()) - 1))];
    }
    EXPECT_EQ(coset_discriminant(q.gram(), s, qp.gram()), coset_discriminant(q.gram(), t, qp.gram()));
  }
}

TEST(DoubleCosets, ZeroFormCases) {
  EXPECT_THROW(double_coset_reps(QForm::diagonal({0, 0}), QForm::diagonal({0, 0}), 5), UnsupportedError);
  EXPECT_EQ(double_coset_reps(QForm::diagonal({0, 0}), QForm::identity(2), 5).reps.size(), 1u);
  EXPECT_TRUE(double_coset_reps(QForm::diagonal({0, 0}), QForm::diagonal({1, 0}), 5).reps.empty());
}
