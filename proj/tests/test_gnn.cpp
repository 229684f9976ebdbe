#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "gpart/generators.hpp"
#include "gpart/gnn.hpp"
#include "test_util.hpp"

namespace gpart {
namespace {

ModelConfig small_model(std::size_t d, std::uint64_t seed) {
  ModelConfig cfg;
  cfg.embed_dim = d;
  cfg.hidden_dim = d;
  cfg.seed = seed;
  return cfg;
}

double end_to_end_loss(const Graph& g, const GnnModel& m, const NormalizedAdjacency& adj, const LossConfig& cfg) {
  return total_loss(g, forward(m, adj), cfg).total;
}

TEST(NormalizedAdjacency, SingleEdgeIsAllHalves) {
  const Matrix a = normalized_adjacency(Graph(2, {{0, 1, 1.0}})).dense();
  for (double x : a.data()) EXPECT_DOUBLE_EQ(x, 0.5);
}

TEST(NormalizedAdjacency, IsolatedNode) {
  const NormalizedAdjacency adj = normalized_adjacency(Graph(1, {}));
  EXPECT_EQ(adj.nnz(), 1u);
  EXPECT_EQ(adj.dense()(0, 0), 1.0);
}

TEST(NormalizedAdjacency, PathMatchesHandComputation) {
  // P3 degrees with self-loops: 2, 3, 2
  const Matrix a = normalized_adjacency(test::path(3)).dense();
  EXPECT_DOUBLE_EQ(a(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(a(1, 1), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(a(0, 1), 1.0 / std::sqrt(6.0));
  EXPECT_EQ(a(0, 2), 0.0);
}

TEST(NormalizedAdjacency, SymmetricNonnegativeOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = generate_er(25, 0.2, seed);
    const Matrix a = normalized_adjacency(g).dense();
    for (std::size_t i = 0; i < g.n(); ++i) {
      for (std::size_t j = 0; j < g.n(); ++j) {
        EXPECT_EQ(a(i, j), a(j, i));
        EXPECT_GE(a(i, j), 0.0);
      }
    }
  }
}

TEST(InitModel, DeterministicPerSeed) {
  const Graph g = generate_er(30, 0.2, 1);
  EXPECT_EQ(init_model(g, small_model(16, 5)), init_model(g, small_model(16, 5)));
  EXPECT_FALSE(init_model(g, small_model(16, 5)) == init_model(g, small_model(16, 6)));
}

TEST(InitModel, ShapesAndMagnitudes) {
  const Graph g = generate_er(40, 0.2, 1);
  const GnnModel m = init_model(g, ModelConfig{});
  EXPECT_EQ(m.embeddings.rows(), 40u);
  EXPECT_EQ(m.embeddings.cols(), 16u);
  EXPECT_EQ(m.w1.rows(), 16u);
  EXPECT_EQ(m.w2.cols(), 2u);
  EXPECT_EQ(m.parameter_count(), 40u * 16 + 16 * 16 + 16 + 16 * 2 + 2);
  for (double x : m.embeddings.data()) EXPECT_LE(std::abs(x), 1.0);
  for (double x : m.w1.data()) EXPECT_LE(std::abs(x), 0.25);
  for (double x : m.w2.data()) EXPECT_LE(std::abs(x), 0.25);
  EXPECT_TRUE(m.all_finite());
  EXPECT_THROW(init_model(g, small_model(0, 1)), InvalidArgument);
}

TEST(Forward, RowsSumToOneAndDeterministic) {
  const Graph g = generate_er(50, 0.1, 4);
  const NormalizedAdjacency adj(g);
  const GnnModel m = init_model(g, ModelConfig{});
  const SoftAssignment a = forward(m, adj);
  ASSERT_EQ(a.size(), 50u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto p = a.p(i);
    EXPECT_NEAR(p[0] + p[1], 1.0, 1e-9);
  }
  EXPECT_EQ(a, forward(m, adj));
}

TEST(Forward, SymmetricNodesGetIdenticalRows) {
  const Graph g(2, {{0, 1, 1.0}});
  GnnModel m = init_model(g, small_model(4, 3));
  for (std::size_t j = 0; j < 4; ++j) m.embeddings(1, j) = m.embeddings(0, j);
  const SoftAssignment a = forward(m, NormalizedAdjacency(g));
  EXPECT_EQ(a.f(0), a.f(1));
}

TEST(Forward, ZeroOutputLayerGivesHalf) {
  const Graph g = generate_er(20, 0.3, 2);
  GnnModel m = init_model(g, ModelConfig{});
  for (double& x : m.w2.data()) x = 0.0;
  const SoftAssignment a = forward(m, NormalizedAdjacency(g));
  for (double f : a.values()) EXPECT_EQ(f, 0.5);
}

TEST(Forward, DimensionMismatch) {
  const Graph g = generate_er(20, 0.3, 2);
  const GnnModel m = init_model(g, ModelConfig{});
  EXPECT_THROW(forward(m, NormalizedAdjacency(generate_er(21, 0.3, 2))), InvalidArgument);
  GnnModel broken = m;
  broken.b1.pop_back();
  EXPECT_THROW(forward(broken, NormalizedAdjacency(g)), InvalidArgument);
}

TEST(Forward, PermutationEquivariance) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = generate_er(30, 0.15, 60 + seed);
    const GnnModel m = init_model(g, small_model(8, seed));
    std::vector<NodeId> perm(g.n());
    std::iota(perm.begin(), perm.end(), NodeId{0});
    Rng rng(seed);
    shuffle(perm.begin(), perm.end(), rng);

    GnnModel pm = m;
    for (std::size_t v = 0; v < g.n(); ++v) {
      for (std::size_t j = 0; j < m.embeddings.cols(); ++j) pm.embeddings(perm[v], j) = m.embeddings(v, j);
    }
    const SoftAssignment a = forward(m, NormalizedAdjacency(g));
    const SoftAssignment pa = forward(pm, NormalizedAdjacency(permute(g, perm)));
    for (std::size_t v = 0; v < g.n(); ++v) EXPECT_NEAR(pa.f(perm[v]), a.f(v), 1e-12);
  }
}

TEST(Backward, ZeroUpstreamGivesZeroGradients) {
  const Graph g = generate_er(15, 0.3, 8);
  const GnnModel m = init_model(g, ModelConfig{});
  const GnnGradients grad = backward(m, NormalizedAdjacency(g), std::vector<double>(15, 0.0));
  for (auto block : grad.blocks()) {
    for (double x : block) EXPECT_EQ(x, 0.0);
  }
  EXPECT_THROW(backward(m, NormalizedAdjacency(g), std::vector<double>(14, 0.0)), InvalidArgument);
}

TEST(Backward, OutputBiasClosedForm) {
  const Graph g = generate_er(12, 0.3, 3);
  const NormalizedAdjacency adj(g);
  const GnnModel m = init_model(g, small_model(4, 3));
  Rng rng(3);
  std::vector<double> upstream(12);
  for (double& u : upstream) u = 2.0 * uniform01(rng) - 1.0;
  const SoftAssignment a = forward(m, adj);
  // softmax Jacobian: d p1 / d l_k = p1 (delta_1k - p_k)
  double b2_0 = 0.0, b2_1 = 0.0;
  for (std::size_t i = 0; i < 12; ++i) {
    const auto p = a.p(i);
    b2_0 += upstream[i] * p[1] * (0.0 - p[0]);
    b2_1 += upstream[i] * p[1] * (1.0 - p[1]);
  }
  const GnnGradients grad = backward(m, adj, upstream);
  EXPECT_NEAR(grad.b2[0], b2_0, 1e-14);
  EXPECT_NEAR(grad.b2[1], b2_1, 1e-14);
}

TEST(Backward, EndToEndMatchesFiniteDifferences) {
  constexpr double kStep = 1e-6;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Graph g = generate_er(8, 0.4, 200 + seed);
    const NormalizedAdjacency adj(g);
    GnnModel m = init_model(g, small_model(4, seed));
    for (double& b : m.b1) b = 0.1;  // keep pre-activations off the relu kink on average
    LossConfig cfg;
    cfg.mode = seed % 2 == 0 ? LossMode::corrected : LossMode::literal;

    const ForwardCache cache = forward_cached(m, adj);
    const std::vector<double> upstream = grad_total_loss(g, SoftAssignment(cache.f), cfg);
    const GnnGradients grad = backward(m, adj, cache, upstream);

    auto params = m.blocks();
    const auto analytic = grad.blocks();
    for (std::size_t b = 0; b < params.size(); ++b) {
      for (std::size_t k = 0; k < params[b].size(); ++k) {
        const double keep = params[b][k];
        params[b][k] = keep + kStep;
        const double up = end_to_end_loss(g, m, adj, cfg);
        params[b][k] = keep - kStep;
        const double down = end_to_end_loss(g, m, adj, cfg);
        params[b][k] = keep;
        const double fd = (up - down) / (2 * kStep);
        const double scale = std::max({std::abs(fd), std::abs(analytic[b][k]), 1e-5});
        EXPECT_LT(std::abs(fd - analytic[b][k]) / scale, 1e-3) << "seed " << seed << " block " << b << " k " << k;
      }
    }
  }
}

}  // namespace
}  // namespace gpart
