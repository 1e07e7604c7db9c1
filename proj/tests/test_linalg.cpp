#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "admmlab/linalg.hpp"

using admmlab::Matrix;
using admmlab::Vector;

namespace {

// Eigenvalues of a symmetric 3x3 from its characteristic cubic
// x^3 - c2 x^2 + c1 x - c0, solved by the trigonometric formula.
std::array<double, 3> cubic_eigenvalues(const Matrix& m) {
  const double c2 = m.trace();
  const double c1 = m(0, 0) * m(1, 1) + m(0, 0) * m(2, 2) + m(1, 1) * m(2, 2) -
                    m(0, 1) * m(1, 0) - m(0, 2) * m(2, 0) - m(1, 2) * m(2, 1);
  const double c0 = m.determinant();
  // depressed cubic y^3 + p y + q with x = y + c2/3
  const double shift = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = -2.0 * c2 * c2 * c2 / 27.0 + c2 * c1 / 3.0 - c0;
  std::array<double, 3> roots{};
  const double r = 2.0 * std::sqrt(-p / 3.0);
  const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
  const double phase = std::acos(arg) / 3.0;
  for (int k = 0; k < 3; ++k) roots[k] = r * std::cos(phase - 2.0 * M_PI * k / 3.0) + shift;
  std::sort(roots.begin(), roots.end());
  return roots;
}

Matrix random_symmetric(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  return 0.5 * (m + m.transpose());
}

}  // namespace

TEST(ExtremeEigenvalues, Diagonal) {
  Matrix m = Vector((Vector(2) << 1, 3).finished()).asDiagonal();
  const auto r = admmlab::extreme_eigenvalues_symmetric(m);
  EXPECT_DOUBLE_EQ(r.min, 1.0);
  EXPECT_DOUBLE_EQ(r.max, 3.0);
}

TEST(ExtremeEigenvalues, TwoByTwoCoupled) {
  Matrix m(2, 2);
  m << 2, 1, 1, 2;
  const auto r = admmlab::extreme_eigenvalues_symmetric(m);
  EXPECT_NEAR(r.min, 1.0, 1e-15);
  EXPECT_NEAR(r.max, 3.0, 1e-15);
}

TEST(ExtremeEigenvalues, ThreeByThreeMatchesCubicRoots) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix m = random_symmetric(rng, 3);
    const auto roots = cubic_eigenvalues(m);
    const auto r = admmlab::extreme_eigenvalues_symmetric(m);
    EXPECT_NEAR(r.min, roots[0], 1e-10);
    EXPECT_NEAR(r.max, roots[2], 1e-10);
    EXPECT_LE(r.min, r.max);
    const double scale = 1.0 + m.norm();
    EXPECT_LE(std::abs((m - r.min * Matrix::Identity(3, 3)).determinant()), 1e-8 * scale * scale * scale);
    EXPECT_LE(std::abs((m - r.max * Matrix::Identity(3, 3)).determinant()), 1e-8 * scale * scale * scale);
  }
}

TEST(ExtremeEigenvalues, LargerMatchesSelfAdjointSolver) {
  std::mt19937 rng(11);
  for (int n : {4, 7, 12}) {
    const Matrix m = random_symmetric(rng, n);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const auto r = admmlab::extreme_eigenvalues_symmetric(m);
    EXPECT_NEAR(r.min, es.eigenvalues().minCoeff(), 1e-10);
    EXPECT_NEAR(r.max, es.eigenvalues().maxCoeff(), 1e-10);
  }
}

TEST(ExtremeEigenvalues, RejectsBadShapes) {
  EXPECT_THROW(admmlab::extreme_eigenvalues_symmetric(Matrix::Ones(2, 3)), admmlab::ValidationError);
  Matrix asym(2, 2);
  asym << 1, 2, 0, 1;
  EXPECT_THROW(admmlab::extreme_eigenvalues_symmetric(asym), admmlab::ValidationError);
}

TEST(LargestSingularValue, Examples) {
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 3, 4;
  EXPECT_NEAR(admmlab::largest_singular_value(d), 4.0, 1e-14);
  Matrix row(1, 2);
  row << 0, 2;
  EXPECT_NEAR(admmlab::largest_singular_value(row), 2.0, 1e-14);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix b(2, 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) b(i, j) = u(rng);
  const Matrix btb = b.transpose() * b;
  const double expected = std::sqrt(admmlab::extreme_eigenvalues_symmetric(btb).max);
  EXPECT_NEAR(admmlab::largest_singular_value(b), expected, 1e-12);
  EXPECT_NEAR(admmlab::largest_singular_value(b), admmlab::largest_singular_value(Matrix(b.transpose())),
              1e-12);
}

TEST(PseudoInverse, Examples) {
  EXPECT_TRUE(admmlab::pseudo_inverse(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
  EXPECT_NEAR(admmlab::pseudo_inverse(Matrix::Constant(1, 1, 2.0))(0, 0), 0.5, 1e-15);
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 1, 2;
  const Matrix inv = admmlab::pseudo_inverse(d);
  EXPECT_NEAR(inv(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(inv(1, 1), 0.5, 1e-15);
}

TEST(PseudoInverse, RightInverseOfWideMatrices) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a(2, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = u(rng);
    const Matrix prod = a * admmlab::pseudo_inverse(a);
    EXPECT_LE((prod - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(PseudoInverse, RankDeficientThrows) {
  Matrix a(2, 2);
  a << 1, 2, 2, 4;
  EXPECT_THROW(admmlab::pseudo_inverse(a), admmlab::SingularityError);
}

TEST(SolveSpd, Examples) {
  const Vector x1 = admmlab::solve_spd(Matrix::Identity(2, 2), Vector((Vector(2) << 1, 2).finished()));
  EXPECT_NEAR(x1(0), 1.0, 1e-15);
  EXPECT_NEAR(x1(1), 2.0, 1e-15);
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 2, 4;
  const Vector x2 = admmlab::solve_spd(d, Vector((Vector(2) << 2, 4).finished()));
  EXPECT_NEAR(x2(0), 1.0, 1e-15);
  EXPECT_NEAR(x2(1), 1.0, 1e-15);
  Matrix p(2, 2);
  p << 2, 1, 1, 2;
  const Vector b = (Vector(2) << 3, 3).finished();
  const Vector x3 = admmlab::solve_spd(p, b);
  EXPECT_LE((p * x3 - b).norm(), 1e-10 * (1.0 + b.norm()));
  EXPECT_NEAR(x3(0), 1.0, 1e-14);
}

TEST(SolveSpd, IndefiniteThrows) {
  Matrix p(2, 2);
  p << 1, 2, 2, 1;
  EXPECT_THROW(admmlab::solve_spd(p, Vector::Ones(2)), admmlab::NotSpdError);
}

TEST(WeightedNormSq, Examples) {
  const Vector x = (Vector(2) << 3, 4).finished();
  EXPECT_DOUBLE_EQ(admmlab::weighted_norm_sq(x, Matrix::Identity(2, 2)), 25.0);
  EXPECT_DOUBLE_EQ(admmlab::weighted_norm_sq(x, Matrix::Zero(2, 2)), 0.0);
  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = 2;
  EXPECT_DOUBLE_EQ(admmlab::weighted_norm_sq(Vector((Vector(2) << 1, 5).finished()), g), 2.0);
}

TEST(WeightedNormSq, IndefiniteRejected) {
  Matrix g(2, 2);
  g << 1, 0, 0, -1;
  EXPECT_THROW(admmlab::weighted_norm_sq(Vector::Ones(2), g), admmlab::ValidationError);
}

TEST(WeightedNormSq, NonnegativeOnRandomPsd) {
  std::mt19937 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix f(3, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) f(i, j) = n(rng);
    const Matrix g = f * f.transpose();  // rank 2, PSD
    Vector x(3);
    for (int i = 0; i < 3; ++i) x(i) = n(rng);
    EXPECT_GE(admmlab::weighted_norm_sq(x, g), 0.0);
    EXPECT_NEAR(admmlab::weighted_norm_sq(x, Matrix::Identity(3, 3)), x.squaredNorm(), 1e-12);
  }
}

TEST(SpectralRadius2x2, Examples) {
  Matrix a(2, 2);
  a << 2, 0, 0, 3;
  EXPECT_DOUBLE_EQ(admmlab::spectral_radius_2x2(a), 3.0);
  Matrix rot(2, 2);
  rot << 0, 1, -1, 0;
  EXPECT_DOUBLE_EQ(admmlab::spectral_radius_2x2(rot), 1.0);
  Matrix m(2, 2);
  m << 1, -1, -1, 1;
  EXPECT_NEAR(admmlab::spectral_radius_2x2(Matrix(0.25 * m)), 0.5, 1e-15);
  EXPECT_THROW(admmlab::spectral_radius_2x2(Matrix::Identity(3, 3)), admmlab::ValidationError);
}

TEST(SpectralRadius2x2, HomogeneousAndMatchesEigenSolver) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix m(2, 2);
    m << u(rng), u(rng), u(rng), u(rng);
    const double c = u(rng);
    const double rho = admmlab::spectral_radius_2x2(m);
    EXPECT_NEAR(admmlab::spectral_radius_2x2(Matrix(c * m)), std::abs(c) * rho, 1e-12 * (1 + rho));
    const Eigen::EigenSolver<Matrix> es(m);
    EXPECT_NEAR(rho, es.eigenvalues().cwiseAbs().maxCoeff(), 1e-12 * (1 + rho));
  }
}

TEST(Linalg, FloatInstantiation) {
  Eigen::MatrixXf m(2, 2);
  m << 2.f, 1.f, 1.f, 2.f;
  const auto r = admmlab::extreme_eigenvalues_symmetric(m);
  EXPECT_NEAR(r.max, 3.0f, 1e-6f);
}
