#include <cmath>

#include <gtest/gtest.h>

#include "cwm/encoders.hpp"
#include "cwm/oracle.hpp"
#include "support/generators.hpp"

namespace {

using namespace cwm;

ProblemSpec three_hinges() {
  ProblemData d;
  d.n = 1;
  d.p = 3;
  d.v = {0, 1, 2};
  d.B = {{0, 0, 1}, {0, 1, -1}, {0, 2, -1}};
  return ProblemSpec(d);
}

TEST(ExactLp, TwoSums) {
  ProblemData d;
  d.n = 2;
  d.b = {1, 1};
  d.lam_lo = {0, 0};
  EXPECT_EQ(oracle::lp_solve_exact(ProblemSpec(d)).exact, 0);
}

TEST(ExactLp, ThreeHinges) {
  const auto r = oracle::lp_solve_exact(three_hinges());
  EXPECT_EQ(r.exact, 2);
  EXPECT_EQ(r.value, 2.0);
}

TEST(ExactLp, TriangleCover) {
  const auto inst = encode_vertex_cover({{1, 1, 1}, {{0, 1}, {1, 2}, {0, 2}}});
  EXPECT_EQ(oracle::lp_solve_exact(inst.spec).exact, mpq_class(-3, 2));
}

TEST(ExactLp, SingleEdgeCover) {
  const auto inst = encode_vertex_cover({{1, 3}, {{0, 1}}});
  EXPECT_EQ(oracle::lp_solve_exact(inst.spec).exact, -1);
}

TEST(ExactLp, Unbounded) {
  ProblemData d;
  d.m = 1;
  d.a = {-1};
  EXPECT_THROW(oracle::lp_solve_exact(ProblemSpec(d)), oracle::LpError);
}

TEST(ExactLp, SizeLimit) {
  ProblemData d;
  d.p = 301;
  EXPECT_THROW(oracle::lp_solve_exact(ProblemSpec(d)), oracle::LpError);
  EXPECT_NO_THROW(oracle::lp_solve_exact(ProblemSpec(d), 400));
}

TEST(ExactLp, ReturnedPointAttainsValue) {
  gen::Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = gen::random_guarantee_spec(rng);
    const auto r = oracle::lp_solve_exact(spec);
    EXPECT_NEAR(objective(spec, r.phi, r.lam), r.value, 1e-9 * (1 + std::abs(r.value)));
  }
}

TEST(ExactLp, DenseImageShape) {
  const auto lp = oracle::to_dense_lp(three_hinges());
  EXPECT_EQ(lp.cost.size(), 4u);  // phi, lam, alpha, beta
  EXPECT_EQ(lp.rows.size(), 3u);
}

TEST(MaxFlowReference, Examples) {
  EXPECT_EQ(oracle::maxflow_reference({3, 0, 2, {{0, 1, 2}, {1, 2, 1}}}), 1.0);
  EXPECT_EQ(oracle::maxflow_reference({4, 0, 3, {{0, 1, 1}, {1, 3, 1}, {0, 2, 1}, {2, 3, 1}}}),
            2.0);
  EXPECT_EQ(oracle::maxflow_reference({3, 0, 2, {{0, 1, 0}, {1, 2, 0}}}), 0.0);
}

// The min-cut value from the exact LP equals the augmenting-path max flow.
TEST(MaxFlowReference, AgreesWithExactLp) {
  gen::Rng rng(62);
  for (int trial = 0; trial < 30; ++trial) {
    const auto net = gen::random_flow_network(rng, 30, 60);
    const auto inst = encode_maxflow(net);
    const double cut = inst.transform.apply(oracle::lp_solve_exact(inst.spec).value);
    EXPECT_NEAR(cut, oracle::maxflow_reference(net), 1e-9);
  }
}

TEST(BruteForce, ThreeHinges) {
  PiecewiseAffine f{{{1, 0}, {-1, 1}, {-1, 2}}, 0, 0};
  const auto r = oracle::brute_force_univariate(f, -kInf, kInf);
  EXPECT_FALSE(r.unbounded);
  EXPECT_EQ(r.lo, 1.0);
  EXPECT_EQ(r.hi, 2.0);
  EXPECT_EQ(r.value, 2.0);
}

TEST(BruteForce, Constant) {
  PiecewiseAffine f{{}, 0, 4};
  const auto r = oracle::brute_force_univariate(f, -1, 2);
  EXPECT_EQ(r.lo, -1.0);
  EXPECT_EQ(r.hi, 2.0);
  EXPECT_EQ(r.value, 4.0);
}

TEST(BruteForce, SlopeOnly) {
  PiecewiseAffine f{{}, -1, 0};
  const auto r = oracle::brute_force_univariate(f, 0, 1);
  EXPECT_EQ(r.lo, 1.0);
  EXPECT_EQ(r.hi, 1.0);
  EXPECT_EQ(r.value, -1.0);
  EXPECT_TRUE(oracle::brute_force_univariate(f, 0, kInf).unbounded);
}

}  // namespace
