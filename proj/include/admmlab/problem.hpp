#ifndef ADMMLAB_PROBLEM_HPP
#define ADMMLAB_PROBLEM_HPP

#include <optional>
#include <variant>

#include "admmlab/functions.hpp"

namespace admmlab {

/// A primal-dual triple satisfying the optimality conditions.
struct KnownOptimum {
  Vector w;
  Vector v;
  Vector alpha;
};

struct KktResiduals {
  double feasibility;     // ||Aw - Bv - c||
  double stationarity_w;  // ||A^T alpha + grad phi(w)||
  double stationarity_v;  // ||B^T alpha - grad g(v)||
};

/// min phi(w) + g(v)  s.t.  Aw - Bv = c.
///
/// Immutable once built. The pseudo-inverse of A is cached when AA^T is
/// invertible; gap computations need it.
class Problem {
 public:
  Problem(FunctionPtr phi, FunctionPtr g, Matrix a, Matrix b, Vector c,
          std::optional<KnownOptimum> optimum = std::nullopt);

  const SeparableFunction& phi() const { return *phi_; }
  const SeparableFunction& g() const { return *g_; }
  const FunctionPtr& phi_ptr() const { return phi_; }
  const FunctionPtr& g_ptr() const { return g_; }
  const Matrix& A() const { return a_; }
  const Matrix& B() const { return b_; }
  const Vector& c() const { return c_; }
  const std::optional<KnownOptimum>& known_optimum() const { return optimum_; }

  Eigen::Index n() const { return a_.cols(); }
  Eigen::Index m() const { return b_.cols(); }
  Eigen::Index p() const { return a_.rows(); }

  /// A^+, or SingularityError when AA^T is not invertible.
  const Matrix& A_pinv() const;

  /// Smoothness constant gamma of phi (phi is 1/gamma smooth).
  double phi_gamma() const;
  /// Strong-convexity modulus of g.
  double g_lambda() const { return g_->strong_convexity(); }

 private:
  FunctionPtr phi_;
  FunctionPtr g_;
  Matrix a_;
  Matrix b_;
  Vector c_;
  std::optional<KnownOptimum> optimum_;
  std::optional<Matrix> a_pinv_;
};

namespace spec {

/// One-dimensional arctan/quartic instance with A = B = 1, c = 0.
struct Paper1d {
  double gamma;
  double lambda;
  double mu;
};

/// phi = 1/2 w^T diag(q) w, g = 1/2 v^T diag(lambda) v, A = B = I, c = 0.
struct QuadraticDiag {
  Vector q;
  Vector lambda;
};

struct Quadratic {
  Vector diag;
};
struct Arctan {
  double gamma;
  double mu;
};
struct Quartic {
  double lambda;
};
struct FunctionSpec {
  std::variant<Quadratic, Arctan, Quartic> kind;
  std::optional<double> tikhonov;
};

struct Custom {
  FunctionSpec phi;
  FunctionSpec g;
  Matrix A;
  Matrix B;
  Vector c;
  std::optional<KnownOptimum> optimum;
};

}  // namespace spec

using ProblemSpec = std::variant<spec::Paper1d, spec::QuadraticDiag, spec::Custom>;

FunctionPtr make_function(const spec::FunctionSpec& f);
Problem make_problem(const ProblemSpec& spec);

/// phi(w) + g(v) + alpha^T r + (rho/2)||r||^2 with r = Aw - Bv - c.
double lagrangian_value(const Problem& p, const Vector& w, const Vector& v, const Vector& alpha,
                        double rho);

/// D(alpha) = -phi*(-A^T alpha) - g*(B^T alpha) - alpha^T c.
double dual_value(const Problem& p, const Vector& alpha);

/// Unrestricted gap [phi(A^+(B v + c)) + g(v)] - D(alpha). Round-off below
/// 1e-10 (relative to the magnitudes involved) is clamped to zero; anything
/// more negative throws InternalConsistencyError.
double duality_gap(const Problem& p, const Vector& v_hat, const Vector& alpha_hat);

/// Primal value of the feasibility lift w = A^+(B v + c).
double lifted_primal_value(const Problem& p, const Vector& v_hat);

KktResiduals kkt_residuals(const Problem& p, const Vector& w, const Vector& v,
                           const Vector& alpha);

/// sqrt(||w - w*||^2 + ||v - v*||^2); requires a known optimum.
double error_norm(const Problem& p, const Vector& w, const Vector& v);

}  // namespace admmlab

#endif  // ADMMLAB_PROBLEM_HPP
