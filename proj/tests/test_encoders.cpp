#include <cmath>

#include <gtest/gtest.h>

#include "cwm/duality.hpp"
#include "cwm/encoders.hpp"
#include "cwm/oracle.hpp"
#include "support/generators.hpp"

namespace {

using namespace cwm;

struct Solved {
  SolveResult result;
  DualCertificate cert;
  CertificateReport report;
};

Solved run(const ProblemSpec& spec) {
  Solved s;
  s.result = solve(spec);
  s.cert = build_certificate(spec, s.result.phi, s.result.lam);
  s.report = verify(spec, s.result.phi, s.result.lam, s.cert, 1e-6);
  return s;
}

WeightedGraph triangle() { return {{1, 1, 1}, {{0, 1}, {1, 2}, {0, 2}}}; }

TEST(MaxSat, EmptyFormula) {
  MaxSatFormula f;
  f.num_vars = 3;
  const auto inst = encode_maxsat(f);
  EXPECT_EQ(inst.spec.m(), 0u);
  EXPECT_EQ(inst.spec.n(), 0u);
  EXPECT_EQ(inst.spec.p(), 3u);
  const auto s = run(inst.spec);
  EXPECT_EQ(s.result.objective_value, 0.0);
  const auto dec = std::get<MaxSatSolution>(decode(inst, s.result, s.cert));
  EXPECT_EQ(dec.lp_bound, 0.0);
  EXPECT_TRUE(dec.trivial_half_optimum);
}

TEST(MaxSat, EmptyAssignmentWithNoVariables) {
  const auto inst = encode_maxsat(MaxSatFormula{});
  const auto s = run(inst.spec);
  const auto dec = std::get<MaxSatSolution>(decode(inst, s.result, s.cert));
  EXPECT_TRUE(dec.assignment.empty());
  EXPECT_EQ(dec.lp_bound, 0.0);
}

TEST(MaxSat, Rows) {
  MaxSatFormula f{2, {{{1, -2}, 3, false}, {{-1, -2}, 0, true}}};
  const auto inst = encode_maxsat(f);
  const auto& spec = inst.spec;
  ASSERT_EQ(spec.m(), 1u);
  ASSERT_EQ(spec.n(), 1u);
  EXPECT_EQ(spec.a()[0], 1.0);
  EXPECT_EQ(spec.w()[0], 3.0);
  EXPECT_EQ(spec.phi_lo()[0], 0.0);
  EXPECT_EQ(spec.b()[0], 1.0 - 2.0);
  EXPECT_EQ(spec.lam_hi()[0], 0.0);
  EXPECT_EQ(spec.lam_lo()[0], -kInf);
  ASSERT_EQ(spec.B().row(0).size(), 2u);
  EXPECT_EQ(spec.B().row(0)[0].value, 1.0);
  EXPECT_TRUE(check_guarantee(spec).satisfied());
}

TEST(MaxSat, TautologyAndDuplicateLiterals) {
  MaxSatFormula f{2, {{{1, -1}, 4, false}, {{2, 2}, 1, false}, {{1, -1, 2}, 0, true}}};
  const auto inst = encode_maxsat(f);
  EXPECT_EQ(inst.spec.m(), 1u);
  EXPECT_EQ(inst.spec.n(), 0u);
  EXPECT_EQ(inst.transform.offset, 4.0);
  EXPECT_EQ(inst.spec.A().row(0).size(), 1u);
}

TEST(MaxSat, BadLiteralAndWeight) {
  EXPECT_THROW(encode_maxsat({1, {{{2}, 1, false}}}), std::invalid_argument);
  EXPECT_THROW(encode_maxsat({1, {{{1}, -1, false}}}), std::invalid_argument);
}

TEST(MaxSat, UnitClausesClearTheTrivialFlag) {
  MaxSatFormula f{2, {{{1}, 2, false}, {{-1, 2}, 1, false}}};
  const auto inst = encode_maxsat(f);
  const auto s = run(inst.spec);
  const auto dec = std::get<MaxSatSolution>(decode(inst, s.result, s.cert));
  EXPECT_FALSE(dec.trivial_half_optimum);
  EXPECT_EQ(dec.lp_bound, 3.0);
}

TEST(MinOnes, CountsTrueVariables) {
  MaxSatFormula f{3, {{{1, 2}, 0, true}, {{3}, 0, true}}};
  const auto inst = encode_maxsat(f, {true});
  EXPECT_EQ(inst.kind, ProblemKind::kMinOnes);
  EXPECT_EQ(inst.spec.v(), (std::vector<double>{-1, -1, -1}));
  const auto s = run(inst.spec);
  EXPECT_TRUE(s.report.verdict);
  EXPECT_NEAR(inst.transform.apply(s.result.objective_value), 2.0, 1e-6);
  EXPECT_THROW(encode_maxsat({1, {{{1}, 1, false}}}, {true}), std::invalid_argument);
}

TEST(VertexCover, Triangle) {
  const auto inst = encode_vertex_cover(triangle());
  const auto s = run(inst.spec);
  EXPECT_NEAR(inst.transform.apply(s.result.objective_value), 1.5, 1e-6);
  const auto dec = std::get<VertexCoverSolution>(decode(inst, s.result, s.cert));
  EXPECT_EQ(dec.cover, (std::vector<double>{0.5, 0.5, 0.5}));
}

TEST(VertexCover, SingleEdge) {
  const auto inst = encode_vertex_cover({{1, 3}, {{0, 1}}});
  const auto s = run(inst.spec);
  EXPECT_NEAR(inst.transform.apply(s.result.objective_value), 1.0, 1e-6);
  const auto dec = std::get<VertexCoverSolution>(decode(inst, s.result, s.cert));
  EXPECT_EQ(dec.cover, (std::vector<double>{1, 0}));
}

TEST(VertexCover, EdgelessGraph) {
  const auto inst = encode_vertex_cover({{2, 5}, {}});
  const auto s = run(inst.spec);
  EXPECT_EQ(inst.transform.apply(s.result.objective_value), 0.0);
}

TEST(VertexCover, Rejects) {
  EXPECT_THROW(encode_vertex_cover({{1}, {{0, 0}}}), std::invalid_argument);
  EXPECT_THROW(encode_vertex_cover({{1}, {{0, 1}}}), std::invalid_argument);
  EXPECT_THROW(encode_vertex_cover({{-1}, {}}), std::invalid_argument);
}

TEST(MaxFlow, TwoArcs) {
  const FlowNetwork net{3, 0, 2, {{0, 1, 2}, {1, 2, 1}}};
  const auto inst = encode_maxflow(net);
  const auto s = run(inst.spec);
  EXPECT_EQ(s.result.objective_value, 2.0);
  const auto cut = std::get<CutSolution>(decode(inst, s.result, s.cert));
  EXPECT_EQ(cut.cut_value, 1.0);
  EXPECT_EQ(cut.side[0], CutSide::kSource);
  EXPECT_EQ(cut.side[1], CutSide::kSource);
  EXPECT_EQ(cut.side[2], CutSide::kSink);
}

TEST(MaxFlow, ParallelPaths) {
  const FlowNetwork net{4, 0, 3, {{0, 1, 1}, {1, 3, 1}, {0, 2, 1}, {2, 3, 1}}};
  const auto inst = encode_maxflow(net);
  const auto s = run(inst.spec);
  EXPECT_NEAR(std::get<CutSolution>(decode(inst, s.result, s.cert)).cut_value, 2.0, 1e-6);
}

TEST(MaxFlow, ZeroCapacities) {
  const FlowNetwork net{3, 0, 2, {{0, 1, 0}, {1, 2, 0}}};
  const auto inst = encode_maxflow(net);
  const auto s = run(inst.spec);
  EXPECT_EQ(std::get<CutSolution>(decode(inst, s.result, s.cert)).cut_value, 0.0);
}

TEST(MaxFlow, Rejects) {
  EXPECT_THROW(encode_maxflow({2, 0, 1, {{0, 1, 1}}}), std::invalid_argument);
  EXPECT_THROW(encode_maxflow({3, 0, 2, {{1, 0, 1}}}), std::invalid_argument);
  EXPECT_THROW(encode_maxflow({3, 0, 2, {{2, 1, 1}}}), std::invalid_argument);
  EXPECT_THROW(encode_maxflow({3, 0, 2, {{0, 1, -1}}}), std::invalid_argument);
  EXPECT_THROW(encode_maxflow({3, 0, 2, {{1, 1, 1}}}), std::invalid_argument);
  EXPECT_THROW(encode_maxflow({3, 0, 0, {}}), std::invalid_argument);
}

TEST(Potts, SingleNode) {
  PottsModel model{2, {{3, 1}}, {}};
  const auto inst = encode_potts(model);
  const auto s = run(inst.spec);
  EXPECT_EQ(inst.transform.apply(s.result.objective_value), 3.0);
  const auto dec = std::get<PottsSolution>(decode(inst, s.result, s.cert));
  EXPECT_EQ(dec.labeling, std::vector<std::size_t>{0});
}

TEST(Potts, ChainMatchesOracle) {
  PottsModel model{2, {{0, 0}, {-5, 0}}, {{0, 1}}};
  const auto inst = encode_potts(model);
  EXPECT_TRUE(check_guarantee(inst.spec).satisfied());
  const auto s = run(inst.spec);
  EXPECT_NEAR(s.result.objective_value, oracle::lp_solve_exact(inst.spec).value, 1e-6);
}

TEST(Potts, OrientationIsLexicographic) {
  PottsModel model{2, {{0, 0}, {0, 0}}, {{1, 0}}};
  const auto inst = encode_potts(model);
  const auto& oriented = std::get<PottsModel>(inst.source);
  EXPECT_EQ(oriented.edges[0], (std::pair<std::size_t, std::size_t>{0, 1}));
}

TEST(Potts, ThreeLabelsReportGuaranteeViolations) {
  PottsModel model{3, {{1, 0, 0}, {0, 2, 0}}, {{0, 1}}};
  const auto inst = encode_potts(model);
  EXPECT_FALSE(check_guarantee(inst.spec).satisfied());
  const auto s = run(inst.spec);
  EXPECT_NEAR(s.result.objective_value, oracle::lp_solve_exact(inst.spec).value, 1e-6);
}

TEST(Potts, Rejects) {
  EXPECT_THROW(encode_potts({1, {{0}}, {}}), std::invalid_argument);
  EXPECT_THROW(encode_potts({2, {{0, 0, 0}}, {}}), std::invalid_argument);
  EXPECT_THROW(encode_potts({2, {{0, 0}}, {{0, 0}}}), std::invalid_argument);
}

// Encoder outputs are valid, and guarantee-class encoders stay in the class.
TEST(EncoderProperty, ValidAndInGuaranteeClass) {
  gen::Rng rng(51);
  gen::MaxSatShape two;
  gen::MaxSatShape three;
  three.len_max = 3;
  for (int trial = 0; trial < 50; ++trial) {
    const auto sat2 = encode_maxsat(gen::random_maxsat(rng, two));
    EXPECT_TRUE(validate_spec(sat2.spec).valid());
    EXPECT_TRUE(check_guarantee(sat2.spec).satisfied());
    EXPECT_TRUE(validate_spec(encode_maxsat(gen::random_maxsat(rng, three)).spec).valid());
    for (const auto& spec : {encode_vertex_cover(gen::random_graph(rng)).spec,
                             encode_maxflow(gen::random_flow_network(rng, 30, 60)).spec,
                             encode_potts(gen::random_potts(rng, 2)).spec}) {
      EXPECT_TRUE(validate_spec(spec).valid());
      EXPECT_TRUE(check_guarantee(spec).satisfied());
    }
    EXPECT_TRUE(validate_spec(encode_potts(gen::random_potts(rng, 4)).spec).valid());
  }
}

// Certified optimum matches the exact LP, and the application value recomputed
// from the decoded solution agrees with the transformed dual objective (cover,
// cut, assignment) or the transformed primal (Potts bound).
TEST(EncoderProperty, EndToEndOptimalityAndRoundTrip) {
  gen::Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<EncodedInstance> instances{
        encode_maxsat(gen::random_maxsat(rng)),
        encode_vertex_cover(gen::random_graph(rng)),
        encode_maxflow(gen::random_flow_network(rng, 40, 80)),
        encode_potts(gen::random_potts(rng, 2))};
    for (const auto& inst : instances) {
      const auto s = run(inst.spec);
      EXPECT_TRUE(s.report.verdict) << to_string(inst.kind) << " trial " << trial;
      const double value = inst.transform.apply(s.result.objective_value);
      const double exact = inst.transform.apply(oracle::lp_solve_exact(inst.spec).value);
      EXPECT_NEAR(value, exact, 1e-6 * (1 + std::abs(exact))) << to_string(inst.kind);
      EXPECT_LE(std::abs(s.report.gap), 1e-6 * (1 + std::abs(s.report.primal)));

      const auto decoded = decode(inst, s.result, s.cert);
      const double app = application_value(inst, decoded);
      const double expected = inst.kind == ProblemKind::kPotts
                                  ? value
                                  : inst.transform.apply(dual_objective(inst.spec, s.cert));
      EXPECT_NEAR(app, expected, 1e-9 * (1 + std::abs(expected))) << to_string(inst.kind);
    }
  }
}

TEST(EncoderProperty, FlowConsistency) {
  gen::Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const auto net = gen::random_flow_network(rng, 60, 200);
    const auto inst = encode_maxflow(net);
    const auto s = run(inst.spec);
    double total = 0;
    for (const Arc& a : net.arcs) total += a.capacity;
    EXPECT_NEAR(total - dual_objective(inst.spec, s.cert), oracle::maxflow_reference(net), 1e-6);
  }
}

}  // namespace
