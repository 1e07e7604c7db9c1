#ifndef ADMMLAB_FUNCTIONS_HPP
#define ADMMLAB_FUNCTIONS_HPP

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "admmlab/linalg.hpp"

namespace admmlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Open interval of values a scalar derivative can take.
struct GradientRange {
  double lo = -kInfinity;
  double hi = kInfinity;
};

/// A convex, coordinate-separable function f(u) = sum_i f_i(u_i).
///
/// Concrete instances supply the scalar pieces f_i, f_i' and f_i''. The
/// strong-convexity modulus is a lower bound on every f_i''; `smoothness()`
/// is an upper bound (kInfinity when curvature is unbounded, in which case
/// callers must not form 1/smoothness products).
class SeparableFunction {
 public:
  virtual ~SeparableFunction() = default;

  virtual Eigen::Index dimension() const = 0;
  virtual double coord_value(Eigen::Index i, double x) const = 0;
  virtual double coord_derivative(Eigen::Index i, double x) const = 0;
  virtual double coord_curvature(Eigen::Index i, double x) const = 0;

  virtual double strong_convexity() const = 0;
  virtual double smoothness() const = 0;
  virtual std::string describe() const = 0;

  /// Range of f_i'; conjugates are only defined for targets strictly inside it.
  virtual GradientRange coord_gradient_range(Eigen::Index /*i*/) const { return {}; }

  /// Curvature vector d when f(u) = 1/2 sum d_i u_i^2 exactly.
  virtual std::optional<Vector> quadratic_curvature() const { return std::nullopt; }

  bool separable() const { return true; }

  double value(const Vector& u) const;
  Vector gradient(const Vector& u) const;
};

using FunctionPtr = std::shared_ptr<const SeparableFunction>;

/// f(u) = 1/2 sum d_i u_i^2 with d_i >= 0.
class DiagonalQuadratic final : public SeparableFunction {
 public:
  explicit DiagonalQuadratic(Vector diag);

  Eigen::Index dimension() const override { return diag_.size(); }
  double coord_value(Eigen::Index i, double x) const override { return 0.5 * diag_(i) * x * x; }
  double coord_derivative(Eigen::Index i, double x) const override { return diag_(i) * x; }
  double coord_curvature(Eigen::Index i, double) const override { return diag_(i); }
  double strong_convexity() const override { return diag_.minCoeff(); }
  double smoothness() const override { return diag_.maxCoeff(); }
  std::string describe() const override;
  GradientRange coord_gradient_range(Eigen::Index i) const override;
  std::optional<Vector> quadratic_curvature() const override { return diag_; }

  const Vector& diag() const { return diag_; }

 private:
  Vector diag_;
};

/// One-dimensional smooth function
///   (w/sqrt(gamma)) atan(w/sqrt(gamma)) - 1/2 ln(1 + w^2/gamma) + (mu/2) w^2,
/// with curvature 1/(gamma + w^2) + mu, i.e. (1/gamma + mu)-smooth and mu-strongly convex.
class ArctanSmooth final : public SeparableFunction {
 public:
  ArctanSmooth(double gamma, double mu);

  Eigen::Index dimension() const override { return 1; }
  double coord_value(Eigen::Index i, double x) const override;
  double coord_derivative(Eigen::Index i, double x) const override;
  double coord_curvature(Eigen::Index i, double x) const override;
  double strong_convexity() const override { return mu_; }
  double smoothness() const override { return 1.0 / gamma_ + mu_; }
  std::string describe() const override;
  GradientRange coord_gradient_range(Eigen::Index i) const override;

  double gamma() const { return gamma_; }
  double mu() const { return mu_; }

 private:
  double gamma_;
  double mu_;
  double root_gamma_;
};

/// One-dimensional v^4/12 + (lambda/2) v^2. Curvature is unbounded, so
/// smoothness() reports kInfinity.
class QuarticStrong final : public SeparableFunction {
 public:
  explicit QuarticStrong(double lambda);

  Eigen::Index dimension() const override { return 1; }
  double coord_value(Eigen::Index i, double x) const override;
  double coord_derivative(Eigen::Index i, double x) const override;
  double coord_curvature(Eigen::Index i, double x) const override;
  double strong_convexity() const override { return lambda_; }
  double smoothness() const override { return kInfinity; }
  std::string describe() const override;

  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

/// base(u) + eps * u^T u. Used to make a merely convex g strongly convex.
class TikhonovWrapper final : public SeparableFunction {
 public:
  TikhonovWrapper(FunctionPtr base, double eps);

  Eigen::Index dimension() const override { return base_->dimension(); }
  double coord_value(Eigen::Index i, double x) const override;
  double coord_derivative(Eigen::Index i, double x) const override;
  double coord_curvature(Eigen::Index i, double x) const override;
  double strong_convexity() const override { return base_->strong_convexity() + 2.0 * eps_; }
  double smoothness() const override { return base_->smoothness() + 2.0 * eps_; }
  std::string describe() const override;
  std::optional<Vector> quadratic_curvature() const override;

  const SeparableFunction& base() const { return *base_; }
  double eps() const { return eps_; }

 private:
  FunctionPtr base_;
  double eps_;
};

FunctionPtr make_diagonal_quadratic(Vector diag);
FunctionPtr make_arctan_smooth(double gamma, double mu);
FunctionPtr make_quartic_strong(double lambda);
FunctionPtr make_tikhonov(FunctionPtr base, double eps);

/// Root of a strictly increasing scalar function by safeguarded Newton.
///
/// The bracket is grown from `x0` by doubling steps until the residual changes
/// sign; Newton steps that leave the bracket are replaced by bisection.
/// Returns once |residual| <= tol or the bracket has shrunk to adjacent
/// doubles. Throws ConvergenceError after `max_iter` iterations and
/// DomainError when no sign change can be found.
double solve_increasing(const std::function<double(double)>& residual,
                        const std::function<double(double)>& slope, double x0, double tol,
                        int max_iter = 200);

/// argmin_u f(u) + b^T u + 1/2 (u - z)^T P (u - z).
///
/// Quadratic f is solved in closed form for any SPD P. Otherwise P must be
/// diagonal with nonnegative entries and each coordinate is solved by
/// `solve_increasing`.
Vector subproblem_solve(const SeparableFunction& f, const Vector& b, const Matrix& p,
                        const Vector& z, double tol = 1e-12);

/// u with grad f(u) = beta, i.e. grad f*(beta).
Vector conjugate_gradient(const SeparableFunction& f, const Vector& beta);

/// f*(beta) = beta^T u - f(u) at u = grad f*(beta).
double conjugate_value(const SeparableFunction& f, const Vector& beta);

/// D_f(from, to) = f(to) - f(from) - grad f(from)^T (to - from).
double bregman(const SeparableFunction& f, const Vector& from, const Vector& to);

/// Same divergence for the conjugate f*, with points given in the dual space.
double conjugate_bregman(const SeparableFunction& f, const Vector& from, const Vector& to);

}  // namespace admmlab

#endif  // ADMMLAB_FUNCTIONS_HPP
