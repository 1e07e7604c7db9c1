#include <gtest/gtest.h>

#include <cmath>

#include "admmlab/certificates.hpp"
#include "admmlab/lowerbound.hpp"

using namespace admmlab;

namespace {

Problem quadratic(double q, double lambda) {
  return make_problem(spec::QuadraticDiag{Vector::Constant(1, q), Vector::Constant(1, lambda)});
}

}  // namespace

TEST(AdmmBlock, Examples) {
  const auto b = admm_block(1.0, 1.0, 1.0);
  Eigen::Matrix2d expected;
  expected << 0.25, -0.25, -0.25, 0.25;
  EXPECT_TRUE(b.M.isApprox(expected, 1e-15));
  EXPECT_NEAR(block_spectral_radius(b), 0.5, 1e-15);
  const double rho = std::sqrt(2.0);
  const double closed = 1.02 / std::pow(1.0 + std::sqrt(0.02), 2);
  EXPECT_NEAR(closed, 0.7829, 5e-5);
  EXPECT_NEAR(block_spectral_radius(admm_block(10.0, 10.0, rho)), closed, 1e-12);
  EXPECT_THROW(admm_block(0.0, 1.0, 1.0), ValidationError);
}

TEST(AdmmBlock, EqualCurvatureRadiusIsTrace) {
  for (double q : {0.01, 0.2, 1.0, 10.0}) {
    for (double rho : {0.05, 0.7, 3.0, 40.0}) {
      const auto b = admm_block(q, q, rho);
      EXPECT_NEAR(b.M.determinant(), 0.0, 1e-15);
      EXPECT_NEAR(block_spectral_radius(b), (rho * rho + q * q) / std::pow(rho + q, 2), 1e-12);
    }
  }
}

TEST(LinadmmBlock, Examples) {
  const auto b = linadmm_block(1.0, 1.0, 2.0, 1.0);
  Eigen::Matrix2d expected;
  expected << 3.0, -1.0, 0.0, 2.0;
  expected /= 6.0;
  EXPECT_TRUE(b.M.isApprox(expected, 1e-15));
  EXPECT_NEAR(block_spectral_radius(b), 0.5, 1e-15);
  EXPECT_GT(block_spectral_radius(linadmm_block(1.0, 1.0, 1e6, 1.0)), 1.0 - 1e-5);
}

TEST(WorstCaseRate, Examples) {
  EXPECT_DOUBLE_EQ(admm_worstcase_rate(1.0, 1.0, 1.0), 0.5);
  EXPECT_NEAR(admm_worstcase_rate(std::sqrt(2.0), 0.2, 0.1), 0.78290, 5e-6);
  EXPECT_NEAR(admm_worstcase_rate(1e-8, 0.2, 0.1), 1.0, 1e-6);
  EXPECT_THROW(admm_worstcase_rate(1.0, 2.0, 1.0), PreconditionError);
}

TEST(OptimalRate, Examples) {
  auto r = admm_optimal_rate(1.0, 1.0);
  EXPECT_EQ(r.rho, 1.0);
  EXPECT_EQ(r.rate, 0.5);
  r = admm_optimal_rate(0.2, 0.1);
  EXPECT_NEAR(r.rho, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.rate, 0.7829, 5e-5);
  r = admm_optimal_rate(1e-3, 1e-3);
  EXPECT_NEAR(r.rate, 1.0 - 2e-3, 1e-5);
  EXPECT_THROW(admm_optimal_rate(3.0, 1.0), PreconditionError);
}

TEST(OptimalRate, EqualizesBranchesAndMinimizesGrid) {
  for (auto [lambda, gamma] : std::vector<std::pair<double, double>>{{1, 1}, {0.2, 0.1}, {0.01, 1}}) {
    const auto opt = admm_optimal_rate(lambda, gamma);
    const double rho = opt.rho;
    const double low = (rho * rho + lambda * lambda) / std::pow(rho + lambda, 2);
    const double high = (rho * rho * gamma * gamma + 1.0) / std::pow(rho * gamma + 1.0, 2);
    EXPECT_LE(std::abs(low - high), 1e-12);
    EXPECT_NEAR(admm_worstcase_rate(rho, lambda, gamma), opt.rate, 1e-12);
    for (double r : log_grid(rho / 100.0, rho * 100.0, 200)) {
      EXPECT_GE(admm_worstcase_rate(r, lambda, gamma), opt.rate - 1e-12);
    }
  }
}

TEST(InstanceRadius, MatchesWorstCaseRate) {
  for (auto [lambda, gamma] : std::vector<std::pair<double, double>>{{1, 1}, {0.2, 0.1}, {0.01, 1}}) {
    Vector d(2);
    d << lambda, 1.0 / gamma;
    for (double rho : log_grid(1e-3, 1e3, 25)) {
      EXPECT_NEAR(admm_instance_radius(d, d, rho), admm_worstcase_rate(rho, lambda, gamma), 1e-12);
    }
  }
}

TEST(LinadmmLowerBound, Examples) {
  EXPECT_DOUBLE_EQ(linadmm_rate_lowerbound(1.0, 1.0, 2.0, 1.0), 0.5);
  for (double rho : {1e-3, 0.1, 0.5, 1.0}) {
    EXPECT_GE(linadmm_rate_lowerbound(rho, 1.0, 2.0, 1.0), 1.0 / 3.0);
  }
  EXPECT_NEAR(linadmm_rate_lowerbound(1e-9, 1.0, 2.0, 1.0), 0.5, 1e-8);
  EXPECT_THROW(linadmm_rate_lowerbound(1.0, 1.0, 1.0, 1.0), ValidationError);
}

TEST(LinadmmLowerBound, LargeRhoGrid) {
  // rho beyond h - lambda: radius stays within 4 lambda gamma of one
  for (auto [lambda, gamma] : std::vector<std::pair<double, double>>{{0.01, 1}, {0.001, 0.5}, {0.02, 2}}) {
    const double h = 2.0 / gamma;
    Vector d(2);
    d << lambda, 1.0 / gamma;
    for (double rho : log_grid(h - lambda, 100.0 * h, 200)) {
      EXPECT_GE(linadmm_instance_radius(d, d, h, rho), 1.0 - 4.0 * lambda * gamma);
    }
  }
}

TEST(BlockRecursion, MatchesSolverSteps) {
  const double q = 0.7, lambda = 0.4, rho = 1.3, h = 2.0;
  const Problem p = quadratic(q, lambda);
  for (Algorithm algo : {Algorithm::kStandard, Algorithm::kLinearized}) {
    SolverOptions o;
    o.algo = algo;
    o.rho = rho;
    if (algo == Algorithm::kLinearized) o.H = Matrix::Constant(1, 1, h);
    const SolverConfig cfg(p, o);
    const auto block = algo == Algorithm::kStandard ? admm_block(q, lambda, rho)
                                                    : linadmm_block(q, lambda, h, rho);
    Iterate it = make_initial_point(p, Vector::Constant(1, 1.0), Vector::Constant(1, 1.0),
                                    Vector::Constant(1, 0.0));
    Eigen::Vector2d state(1.0, 0.0);
    const Iterate next = step(p, cfg, it);
    state = block.M * state;
    EXPECT_NEAR(next.w(0), state(0), 1e-12);
    EXPECT_NEAR(next.alpha(0), state(1), 1e-12);
  }
}

TEST(BlockRecursion, LongRunRateMatchesRadius) {
  const double q = 0.2, lambda = 0.2, rho = 0.9;
  const Problem p = quadratic(q, lambda);
  SolverOptions o;
  o.rho = rho;
  o.max_iters = 2000;
  const Trajectory traj = run(p, SolverConfig(p, o), default_initial_point(p));
  std::vector<double> e;
  for (const auto& it : traj) e.push_back(error_norm(p, it.w, it.v));
  EXPECT_NEAR(estimate_rate(e), block_spectral_radius(admm_block(q, lambda, rho)), 1e-3);
}

TEST(LogGrid, Endpoints) {
  const auto g = log_grid(0.01, 100.0, 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.front(), 0.01);
  EXPECT_DOUBLE_EQ(g.back(), 100.0);
  EXPECT_NEAR(g[2], 1.0, 1e-14);
}
