#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spsnmf/errors.hpp"
#include "spsnmf/symhals.hpp"
#include "synthetic.hpp"

using namespace spsnmf;

namespace {

FactorPair zeros(std::size_t n, std::size_t k) { return {DenseMatrix(n, k), DenseMatrix(n, k)}; }

SampleWeights random_weights(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(n);
  for (double& x : w) x = u(rng);
  return SampleWeights(std::move(w));
}

}  // namespace

TEST(SampleWeights, RangeChecked) {
  EXPECT_THROW(SampleWeights({0.5, 1.5}), InvalidWeights);
  EXPECT_THROW(SampleWeights({-0.1}), InvalidWeights);
  const SampleWeights w({0.0, 0.5, 1.0});
  EXPECT_EQ(w.active_count(), 2u);
  EXPECT_DOUBLE_EQ(w.mean(), 0.5);
  EXPECT_FALSE(w.is_binary());
}

TEST(PenaltyTheta, MustBePositive) {
  EXPECT_THROW(PenaltyTheta(0.0), InvalidConfig);
  EXPECT_THROW(PenaltyTheta(-1.0), InvalidConfig);
}

TEST(WeightedObjective, Examples) {
  const SimilarityMatrix x(DenseMatrix::identity(2));
  EXPECT_DOUBLE_EQ(weighted_objective(x, zeros(2, 1), SampleWeights({1, 1}), PenaltyTheta(3.0)), 1.0);
  EXPECT_DOUBLE_EQ(weighted_objective(x, zeros(2, 1), SampleWeights({1, 0}), PenaltyTheta(3.0)), 0.5);

  const DenseMatrix u = DenseMatrix::from_rows({{1, 0}, {0.5, 2}, {0, 1}});
  const SimilarityMatrix exact(multiply_abt(u, u));
  EXPECT_NEAR(weighted_objective(exact, {u, u}, SampleWeights::ones(3), PenaltyTheta(2.0)), 0.0, 1e-15);
}

TEST(WeightedObjective, ShapeMismatch) {
  const SimilarityMatrix x(DenseMatrix::identity(2));
  EXPECT_THROW(weighted_objective(x, zeros(3, 1), SampleWeights::ones(2), PenaltyTheta(1.0)), ShapeMismatch);
  EXPECT_THROW(weighted_objective(x, zeros(2, 1), SampleWeights::ones(3), PenaltyTheta(1.0)), ShapeMismatch);
}

TEST(PerSampleLoss, Examples) {
  EXPECT_EQ(per_sample_loss(SimilarityMatrix(DenseMatrix::identity(2)), zeros(2, 1)), (PerSampleLoss{1, 1}));
  const DenseMatrix u = DenseMatrix::from_rows({{1, 0}, {0, 1}});
  for (double l : per_sample_loss(SimilarityMatrix(multiply_abt(u, u)), {u, u})) EXPECT_EQ(l, 0.0);
  EXPECT_EQ(per_sample_loss(SimilarityMatrix(DenseMatrix::from_rows({{0, 2}, {2, 0}})), zeros(2, 1)),
            (PerSampleLoss{4, 4}));
}

TEST(ThetaFromBound, Examples) {
  // b = (1 + sqrt 2) / 2 = 1.2071
  EXPECT_EQ(theta_from_bound(SimilarityMatrix(DenseMatrix::identity(2)), DenseMatrix(2, 1)).value(), 2.0);
  EXPECT_EQ(theta_from_bound(SimilarityMatrix(DenseMatrix(2, 2)), DenseMatrix(2, 1)).value(), 1.0);
  // b = (4 + 4 sqrt 2) / 2 = 4.828
  DenseMatrix four(2, 2);
  four(0, 0) = four(1, 1) = 4.0;
  EXPECT_EQ(theta_from_bound(SimilarityMatrix(four), DenseMatrix(2, 1)).value(), 5.0);
}

TEST(ThetaFromBound, StrictlyAboveBound) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + t % 9;
    const auto x = synthetic::random_similarity(n, rng);
    const auto u0 = synthetic::random_matrix(n, 2, 0, 0.5, rng);
    const double b = 0.5 * (oracle::largest_singular_value(synthetic::to_rows(x.data())) +
                            frobenius_norm(subtract(x.data(), multiply_abt(u0, u0))));
    const double theta = theta_from_bound(x, u0).value();
    EXPECT_GT(theta, b);
    EXPECT_EQ(theta, std::floor(theta));
    EXPECT_LE(theta, std::ceil(b) + 1.0);
  }
}

TEST(UpdateColumnU, Examples) {
  const auto ones = DenseMatrix::from_rows({{1, 1}, {1, 1}});
  EXPECT_EQ(update_column_u(ones, std::vector<double>{0, 0}, std::vector<double>{1, 1}, SampleWeights::ones(2),
                            PenaltyTheta(1.0)),
            (std::vector<double>{1, 1}));
  const auto four = DenseMatrix::from_rows({{4, 0}, {0, 0}});
  EXPECT_EQ(update_column_u(four, std::vector<double>{0, 0}, std::vector<double>{1, 0}, SampleWeights::ones(2),
                            PenaltyTheta(1.0)),
            (std::vector<double>{2.5, 0}));
  EXPECT_EQ(update_column_u(DenseMatrix::from_rows({{-1}}), std::vector<double>{0}, std::vector<double>{1},
                            SampleWeights::ones(1), PenaltyTheta(0.5)),
            (std::vector<double>{0}));
}

TEST(UpdateColumnV, Examples) {
  const auto ones = DenseMatrix::from_rows({{1, 1}, {1, 1}});
  EXPECT_EQ(update_column_v(ones, std::vector<double>{1, 1}, std::vector<double>{0, 0}, SampleWeights::ones(2),
                            PenaltyTheta(1.0)),
            (std::vector<double>{1, 1}));
  std::mt19937_64 rng(1);
  const auto any = synthetic::random_matrix(3, 3, -1, 1, rng);
  EXPECT_EQ(update_column_v(any, std::vector<double>{0, 0, 0}, std::vector<double>{0.3, 0.2, 0.9},
                            SampleWeights::ones(3), PenaltyTheta(1.0)),
            (std::vector<double>{0, 0, 0}));
  const auto four = DenseMatrix::from_rows({{4, 0}, {0, 0}});
  EXPECT_EQ(update_column_v(four, std::vector<double>{1, 0}, std::vector<double>{0, 0}, SampleWeights::ones(2),
                            PenaltyTheta(1.0)),
            (std::vector<double>{2.5, 0}));
}

TEST(UpdateColumn, ZeroColumnsStayFinite) {
  const auto xc = DenseMatrix::from_rows({{0, 1}, {1, 0}});
  const std::vector<double> zero{0, 0};
  for (double t : {1e-8, 1.0, 100.0}) {
    for (double x : update_column_u(xc, zero, zero, SampleWeights({0, 0}), PenaltyTheta(t))) EXPECT_EQ(x, 0.0);
    for (double x : update_column_v(xc, zero, zero, SampleWeights::ones(2), PenaltyTheta(t))) EXPECT_EQ(x, 0.0);
  }
}

TEST(UpdateColumn, MatchesGoldenSectionPerCoordinate) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + t % 6;
    const auto xc = synthetic::random_matrix(n, n, -1, 2, rng);
    const auto u = synthetic::random_matrix(n, 1, 0, 1, rng).column(0);
    const auto v = synthetic::random_matrix(n, 1, 0, 1, rng).column(0);
    const auto w = random_weights(n, rng);
    const PenaltyTheta theta(0.1 + 2.0 * (t % 5));

    const auto un = update_column_u(xc, u, v, w, theta);
    for (std::size_t p = 0; p < n; ++p) {
      const auto f = [&](double up) {
        double s = 0.0;
        for (std::size_t q = 0; q < n; ++q) s += std::pow(xc(p, q) - up * v[q], 2);
        return 0.5 * w[p] * s + 0.5 * theta.value() * std::pow(up - v[p], 2);
      };
      EXPECT_NEAR(un[p], oracle::golden_section(f, 0.0, 100.0), 1e-6);
    }
    const auto vn = update_column_v(xc, u, v, w, theta);
    for (std::size_t q = 0; q < n; ++q) {
      const auto f = [&](double vq) {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p) s += w[p] * std::pow(xc(p, q) - u[p] * vq, 2);
        return 0.5 * s + 0.5 * theta.value() * std::pow(u[q] - vq, 2);
      };
      EXPECT_NEAR(vn[q], oracle::golden_section(f, 0.0, 100.0), 1e-6);
    }
  }
}

TEST(HalsSweep, ExactFactorizationIsFixedPoint) {
  const DenseMatrix u = DenseMatrix::from_rows({{1, 0}, {0.8, 0.1}, {0, 1.2}, {0.2, 0.9}});
  const SimilarityMatrix x(multiply_abt(u, u));
  const auto out = hals_sweep(x, {u, u}, SampleWeights::ones(4), PenaltyTheta(3.0));
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_NEAR(out.u.data()[i], u.data()[i], 1e-10);
    EXPECT_NEAR(out.v.data()[i], u.data()[i], 1e-10);
  }
}

TEST(HalsSweep, MonotoneOnRandomInstances) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 19, k = 1 + t % 4;
    const auto x = synthetic::random_similarity(n, rng);
    const FactorPair f{synthetic::random_matrix(n, k, 0, 1, rng), synthetic::random_matrix(n, k, 0, 1, rng)};
    const auto w = random_weights(n, rng);
    const PenaltyTheta theta(0.5 + t % 7);
    const double before = weighted_objective(x, f, w, theta);
    const double after = weighted_objective(x, hals_sweep(x, f, w, theta), w, theta);
    EXPECT_LE(after, before + 1e-12 * (1.0 + std::abs(before)));
  }
}

TEST(HalsSweep, SingleColumnEqualsUpdatePair) {
  std::mt19937_64 rng(17);
  const auto x = synthetic::random_similarity(5, rng);
  const FactorPair f{synthetic::random_matrix(5, 1, 0, 1, rng), synthetic::random_matrix(5, 1, 0, 1, rng)};
  const auto w = random_weights(5, rng);
  const PenaltyTheta theta(2.0);
  const auto out = hals_sweep(x, f, w, theta);
  const auto u = update_column_u(x.data(), f.u.column(0), f.v.column(0), w, theta);
  const auto v = update_column_v(x.data(), u, f.v.column(0), w, theta);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(out.u(i, 0), u[i], 1e-12);
    EXPECT_NEAR(out.v(i, 0), v[i], 1e-12);
  }
}

TEST(HalsSweep, MatchesDirectResidualFormulation) {
  // Sweep through rank_one_residual explicitly and compare with the
  // incremental residual path.
  std::mt19937_64 rng(31);
  const auto x = synthetic::random_similarity(7, rng);
  FactorPair f{synthetic::random_matrix(7, 3, 0, 1, rng), synthetic::random_matrix(7, 3, 0, 1, rng)};
  const auto w = random_weights(7, rng);
  const PenaltyTheta theta(4.0);
  const auto fast = hals_sweep(x, f, w, theta);
  for (std::size_t c = 0; c < 3; ++c) {
    const auto xc = rank_one_residual(x, f, c);
    f.u.set_column(c, update_column_u(xc, f.u.column(c), f.v.column(c), w, theta));
    f.v.set_column(c, update_column_v(xc, f.u.column(c), f.v.column(c), w, theta));
  }
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    EXPECT_NEAR(fast.u.data()[i], f.u.data()[i], 1e-12);
    EXPECT_NEAR(fast.v.data()[i], f.v.data()[i], 1e-12);
  }
}

TEST(WeightedObjective, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 3 + t % 6, k = 1 + t % 3;
    const auto x = synthetic::random_similarity(n, rng);
    const FactorPair f{synthetic::random_matrix(n, k, 0.2, 1, rng), synthetic::random_matrix(n, k, 0.2, 1, rng)};
    const auto w = random_weights(n, rng);
    const PenaltyTheta theta(1.5);
    const auto r = subtract(x.data(), multiply_abt(f.u, f.v));
    const double h = 1e-5;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t c = 0; c < k; ++c) {
        double analytic = 0.0;
        for (std::size_t q = 0; q < n; ++q) analytic -= w[p] * r(p, q) * f.v(q, c);
        analytic += theta.value() * (f.u(p, c) - f.v(p, c));
        FactorPair plus = f, minus = f;
        plus.u(p, c) += h;
        minus.u(p, c) -= h;
        const double fd =
            (weighted_objective(x, plus, w, theta) - weighted_objective(x, minus, w, theta)) / (2.0 * h);
        EXPECT_NEAR(fd, analytic, 1e-4 * std::max(1.0, std::abs(analytic)));
      }
    }
  }
}

TEST(SolveInner, UnitCaseAndTrace) {
  std::mt19937_64 rng(77);
  const auto x = synthetic::random_similarity(8, rng);
  const FactorPair f{synthetic::random_matrix(8, 2, 0, 1, rng), synthetic::random_matrix(8, 2, 0, 1, rng)};
  const auto w = random_weights(8, rng);
  const PenaltyTheta theta(3.0);

  const auto [one, trace1] = solve_inner(x, f, w, theta, 1);
  EXPECT_EQ(one, hals_sweep(x, f, w, theta));
  ASSERT_EQ(trace1.size(), 1u);
  EXPECT_EQ(trace1[0].sweep, 1u);
  EXPECT_NEAR(trace1[0].objective, weighted_objective(x, one, w, theta), 1e-12);

  const auto [many, trace] = solve_inner(x, f, w, theta, 120);
  ASSERT_EQ(trace.size(), 120u);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    EXPECT_EQ(trace[i].sweep, trace[i - 1].sweep + 1);
    EXPECT_LE(trace[i].objective, trace[i - 1].objective + 1e-12 * (1.0 + trace[i - 1].objective));
  }
  EXPECT_NEAR(trace.back().objective, weighted_objective(x, many, w, theta), 1e-10);
  EXPECT_THROW(solve_inner(x, f, w, theta, 0), InvalidConfig);
}

TEST(SolveInner, ZeroWeightsCollapseUOntoV) {
  std::mt19937_64 rng(9);
  const auto x = synthetic::random_similarity(6, rng);
  const FactorPair f{synthetic::random_matrix(6, 2, 0, 1, rng), synthetic::random_matrix(6, 2, 0, 1, rng)};
  const auto [out, trace] = solve_inner(x, f, SampleWeights(std::vector<double>(6, 0.0)), PenaltyTheta(3.0), 1);
  for (std::size_t i = 0; i < out.u.size(); ++i) EXPECT_NEAR(out.u.data()[i], out.v.data()[i], 1e-15);
  for (std::size_t i = 0; i < out.u.size(); ++i) EXPECT_NEAR(out.u.data()[i], f.v.data()[i], 1e-15);
  EXPECT_NEAR(trace[0].objective, 0.0, 1e-28);
}

TEST(SymHalsSolver, ResidualStaysSynchronized) {
  std::mt19937_64 rng(3);
  const auto x = synthetic::random_similarity(10, rng);
  SymHalsSolver solver(x, {synthetic::random_matrix(10, 3, 0, 1, rng), synthetic::random_matrix(10, 3, 0, 1, rng)},
                       PenaltyTheta(5.0));
  const auto w = random_weights(10, rng);
  for (int s = 0; s < 49; ++s) solver.sweep(w);
  const auto direct = subtract(x.data(), multiply_abt(solver.factors().u, solver.factors().v));
  for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_NEAR(solver.residual().data()[i], direct.data()[i], 1e-12);
  solver.sweep(w);  // 50th sweep rebuilds the residual
  const auto rebuilt = subtract(x.data(), multiply_abt(solver.factors().u, solver.factors().v));
  EXPECT_EQ(solver.residual(), rebuilt);
}
