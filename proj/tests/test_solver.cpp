#include <cmath>
#include <cstring>

#include <gtest/gtest.h>

#include "cwm/oracle.hpp"
#include "cwm/solver.hpp"
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

ProblemSpec two_sums() {
  ProblemData d;
  d.n = 2;
  d.b = {1, 1};
  d.lam_lo = {0, 0};
  return ProblemSpec(d);
}

TEST(Solve, TwoSumsFromAnyStart) {
  const auto spec = two_sums();
  for (const auto& start : {std::vector<double>{0, 0}, std::vector<double>{3, 7.5}}) {
    const auto r = solve(spec, {}, Point{{}, start});
    EXPECT_EQ(r.lam, (std::vector<double>{0, 0}));
    EXPECT_EQ(r.objective_value, 0.0);
    EXPECT_EQ(r.termination, Termination::kConverged);
    EXPECT_LE(r.sweeps, 2u);
  }
}

TEST(Solve, ThreeHingesLandsOnMidpoint) {
  const auto r = solve(three_hinges());
  ASSERT_EQ(r.lam.size(), 1u);
  EXPECT_EQ(r.lam[0], 1.5);
  EXPECT_EQ(r.objective_value, 2.0);
}

TEST(Solve, UnboundedPhi) {
  ProblemData d;
  d.m = 1;
  d.a = {-1};
  const auto r = solve(ProblemSpec(d));
  EXPECT_EQ(r.termination, Termination::kUnbounded);
}

TEST(Solve, EmptySpec) {
  const auto r = solve(ProblemSpec(ProblemData{}));
  EXPECT_EQ(r.termination, Termination::kConverged);
  EXPECT_EQ(r.objective_value, 0.0);
}

TEST(Solve, StartOutsideBoxThrows) {
  EXPECT_THROW(solve(two_sums(), {}, Point{{}, {-1, 0}}), std::invalid_argument);
  EXPECT_THROW(solve(two_sums(), {}, Point{{}, {0}}), std::invalid_argument);
}

TEST(Solve, BadConfigThrows) {
  SolverConfig c;
  c.eps = 0;
  EXPECT_THROW(solve(two_sums(), c), std::invalid_argument);
  c = {};
  c.delta = -1;
  EXPECT_THROW(solve(two_sums(), c), std::invalid_argument);
}

TEST(Solve, MaxSweepsStopsTheRun) {
  SolverConfig c;
  c.max_sweeps = 1;
  gen::Rng rng(31);
  const auto spec = gen::random_guarantee_spec(rng, {12, 12, 20, false});
  const auto r = solve(spec, c);
  EXPECT_LE(r.sweeps, 1u);
}

TEST(InteriorLocalMin, ThreeHinges) {
  const auto spec = three_hinges();
  EXPECT_TRUE(is_interior_local_min(spec, {}, std::vector<double>{1.5}, 1e-9).interior);
  EXPECT_FALSE(is_interior_local_min(spec, {}, std::vector<double>{1.0}, 1e-9).interior);
}

TEST(InteriorLocalMin, TwoSumsAtOrigin) {
  const auto report = is_interior_local_min(two_sums(), {}, std::vector<double>{0, 0}, 1e-9);
  EXPECT_TRUE(report.interior);
  ASSERT_EQ(report.coordinates.size(), 2u);
  EXPECT_EQ(report.coordinates[0].minimizers, MinimizerSet::singleton(0));
}

bool bit_identical(const std::vector<double>& x, const std::vector<double>& y) {
  return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0;
}

TEST(SolveProperty, TraceIsMonotoneAndPointInBox) {
  gen::Rng rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const auto spec = gen::random_guarantee_spec(rng, {12, 12, 20, false});
    const auto r = solve(spec);
    if (r.termination == Termination::kUnbounded) continue;
    for (std::size_t k = 1; k < r.objective_trace.size(); ++k) {
      EXPECT_LE(r.objective_trace[k],
                r.objective_trace[k - 1] + 1e-12 * (1 + std::abs(r.objective_trace[k - 1])));
    }
    for (std::size_t i = 0; i < spec.m(); ++i) {
      EXPECT_TRUE(within_box(r.phi[i], spec.phi_lo()[i], spec.phi_hi()[i]));
    }
    for (std::size_t i = 0; i < spec.n(); ++i) {
      EXPECT_TRUE(within_box(r.lam[i], spec.lam_lo()[i], spec.lam_hi()[i]));
    }
    EXPECT_EQ(r.drift_warnings, 0u);
  }
}

TEST(SolveProperty, Deterministic) {
  gen::Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const auto spec = gen::random_guarantee_spec(rng);
    const auto a = solve(spec);
    const auto b = solve(spec);
    EXPECT_TRUE(bit_identical(a.phi, b.phi));
    EXPECT_TRUE(bit_identical(a.lam, b.lam));
    EXPECT_TRUE(bit_identical(a.objective_trace, b.objective_trace));
    EXPECT_EQ(a.sweeps, b.sweeps);
  }
}

bool lp_unbounded(const ProblemSpec& spec) {
  try {
    oracle::lp_solve_exact(spec);
  } catch (const oracle::LpError&) {
    return true;
  }
  return false;
}

TEST(SolveProperty, GuaranteeClassEndsInteriorLocalMin) {
  gen::Rng rng(34);
  const SolverConfig config;
  for (int trial = 0; trial < 200; ++trial) {
    const auto spec = gen::random_guarantee_spec(rng, {12, 12, 20, false});
    const auto r = solve(spec, config);
    if (r.termination == Termination::kUnbounded) continue;
    // Unbounded along a direction no single coordinate sees: the run walks off
    // one step per sweep and only the sweep limit stops it.
    if (lp_unbounded(spec)) {
      EXPECT_EQ(r.termination, Termination::kMaxSweeps);
      continue;
    }
    ASSERT_EQ(r.termination, Termination::kConverged);
    EXPECT_TRUE(is_interior_local_min(spec, r.phi, r.lam, 10 * config.eps).interior);
  }
}

TEST(SolveProperty, ProgressCallbackSeesEverySweep) {
  std::size_t calls = 0;
  const auto r = solve(three_hinges(), {}, std::nullopt,
                       [&](std::size_t sweep, double) { EXPECT_EQ(sweep, ++calls); });
  EXPECT_EQ(calls, r.sweeps);
}

}  // namespace
