#include "admmlab/functions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace admmlab {

namespace {

void require_dimension(const SeparableFunction& f, const Vector& u, const char* what) {
  if (u.size() != f.dimension()) {
    std::ostringstream os;
    os << what << ": " << f.describe() << " has dimension " << f.dimension() << " but got "
       << u.size() << " entries";
    throw ValidationError(os.str());
  }
}

bool is_diagonal(const Matrix& p) {
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j)
      if (i != j && p(i, j) != 0.0) return false;
  return true;
}

double coord_conjugate_point(const SeparableFunction& f, Eigen::Index i, double beta) {
  const GradientRange range = f.coord_gradient_range(i);
  if (!(beta > range.lo && beta < range.hi)) {
    std::ostringstream os;
    os << "conjugate of " << f.describe() << ": target " << beta
       << " is outside the gradient range (" << range.lo << ", " << range.hi << ")";
    throw DomainError(os.str());
  }
  return solve_increasing([&](double x) { return f.coord_derivative(i, x) - beta; },
                          [&](double x) { return f.coord_curvature(i, x); }, 0.0,
                          1e-12 * (1.0 + std::abs(beta)));
}

}  // namespace

double SeparableFunction::value(const Vector& u) const {
  require_dimension(*this, u, "value");
  double total = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) total += coord_value(i, u(i));
  return total;
}

Vector SeparableFunction::gradient(const Vector& u) const {
  require_dimension(*this, u, "gradient");
  Vector out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) out(i) = coord_derivative(i, u(i));
  return out;
}

// ---------------------------------------------------------------------------

DiagonalQuadratic::DiagonalQuadratic(Vector diag) : diag_(std::move(diag)) {
  if (diag_.size() == 0) throw ValidationError("DiagonalQuadratic: empty diagonal");
  if (!diag_.allFinite() || diag_.minCoeff() < 0.0) {
    throw ValidationError("DiagonalQuadratic: diagonal entries must be finite and nonnegative");
  }
}

std::string DiagonalQuadratic::describe() const {
  std::ostringstream os;
  os << "DiagonalQuadratic(n=" << diag_.size() << ")";
  return os.str();
}

GradientRange DiagonalQuadratic::coord_gradient_range(Eigen::Index i) const {
  if (diag_(i) == 0.0) return {0.0, 0.0};
  return {};
}

ArctanSmooth::ArctanSmooth(double gamma, double mu)
    : gamma_(gamma), mu_(mu), root_gamma_(std::sqrt(gamma)) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ValidationError("ArctanSmooth: gamma must be positive and finite");
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw ValidationError("ArctanSmooth: mu must be nonnegative and finite");
  }
}

double ArctanSmooth::coord_value(Eigen::Index, double x) const {
  const double s = x / root_gamma_;
  return s * std::atan(s) - 0.5 * std::log1p(s * s) + 0.5 * mu_ * x * x;
}

double ArctanSmooth::coord_derivative(Eigen::Index, double x) const {
  return std::atan(x / root_gamma_) / root_gamma_ + mu_ * x;
}

double ArctanSmooth::coord_curvature(Eigen::Index, double x) const {
  return 1.0 / (gamma_ + x * x) + mu_;
}

std::string ArctanSmooth::describe() const {
  std::ostringstream os;
  os << "ArctanSmooth(gamma=" << gamma_ << ", mu=" << mu_ << ")";
  return os.str();
}

GradientRange ArctanSmooth::coord_gradient_range(Eigen::Index) const {
  if (mu_ > 0.0) return {};
  const double bound = std::numbers::pi / (2.0 * root_gamma_);
  return {-bound, bound};
}

QuarticStrong::QuarticStrong(double lambda) : lambda_(lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("QuarticStrong: lambda must be nonnegative and finite");
  }
}

double QuarticStrong::coord_value(Eigen::Index, double x) const {
  const double x2 = x * x;
  return x2 * x2 / 12.0 + 0.5 * lambda_ * x2;
}

double QuarticStrong::coord_derivative(Eigen::Index, double x) const {
  return x * x * x / 3.0 + lambda_ * x;
}

double QuarticStrong::coord_curvature(Eigen::Index, double x) const {
  return x * x + lambda_;
}

std::string QuarticStrong::describe() const {
  std::ostringstream os;
  os << "QuarticStrong(lambda=" << lambda_ << ")";
  return os.str();
}

TikhonovWrapper::TikhonovWrapper(FunctionPtr base, double eps)
    : base_(std::move(base)), eps_(eps) {
  if (!base_) throw ValidationError("TikhonovWrapper: null base function");
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw ValidationError("TikhonovWrapper: eps must be positive and finite");
  }
}

double TikhonovWrapper::coord_value(Eigen::Index i, double x) const {
  return base_->coord_value(i, x) + eps_ * x * x;
}

double TikhonovWrapper::coord_derivative(Eigen::Index i, double x) const {
  return base_->coord_derivative(i, x) + 2.0 * eps_ * x;
}

double TikhonovWrapper::coord_curvature(Eigen::Index i, double x) const {
  return base_->coord_curvature(i, x) + 2.0 * eps_;
}

std::string TikhonovWrapper::describe() const {
  std::ostringstream os;
  os << "Tikhonov(" << base_->describe() << ", eps=" << eps_ << ")";
  return os.str();
}

std::optional<Vector> TikhonovWrapper::quadratic_curvature() const {
  auto d = base_->quadratic_curvature();
  if (!d) return std::nullopt;
  return Vector(d->array() + 2.0 * eps_);
}

FunctionPtr make_diagonal_quadratic(Vector diag) {
  return std::make_shared<DiagonalQuadratic>(std::move(diag));
}
FunctionPtr make_arctan_smooth(double gamma, double mu) {
  return std::make_shared<ArctanSmooth>(gamma, mu);
}
FunctionPtr make_quartic_strong(double lambda) { return std::make_shared<QuarticStrong>(lambda); }
FunctionPtr make_tikhonov(FunctionPtr base, double eps) {
  return std::make_shared<TikhonovWrapper>(std::move(base), eps);
}

// ---------------------------------------------------------------------------

double solve_increasing(const std::function<double(double)>& residual,
                        const std::function<double(double)>& slope, double x0, double tol,
                        int max_iter) {
  constexpr int kMaxExpansions = 1100;
  const double r0 = residual(x0);
  if (!std::isfinite(r0)) throw DomainError("solve_increasing: residual is not finite at start");
  if (std::abs(r0) <= tol) return x0;

  double lo = x0;
  double hi = x0;
  double r_lo = r0;
  double r_hi = r0;
  double step = 1.0;
  const double dir = r0 < 0.0 ? 1.0 : -1.0;
  for (int k = 0;; ++k) {
    if (k == kMaxExpansions) {
      throw DomainError("solve_increasing: could not bracket a root (residual never changes sign)");
    }
    const double x = x0 + dir * step;
    const double r = residual(x);
    if (dir > 0.0) {
      if (r >= 0.0) {
        hi = x;
        r_hi = r;
        break;
      }
      lo = x;
      r_lo = r;
    } else {
      if (r <= 0.0) {
        lo = x;
        r_lo = r;
        break;
      }
      hi = x;
      r_hi = r;
    }
    step *= 2.0;
  }
  if (std::abs(r_lo) <= tol) return lo;
  if (std::abs(r_hi) <= tol) return hi;

  double x = std::abs(r_lo) < std::abs(r_hi) ? lo : hi;
  double r = x == lo ? r_lo : r_hi;
  for (int it = 0; it < max_iter; ++it) {
    const double d = slope(x);
    double next = (d > 0.0 && std::isfinite(d)) ? x - r / d : lo;
    if (!(next > lo && next < hi)) next = lo + 0.5 * (hi - lo);
    if (next <= lo || next >= hi) {
      // bracket is down to adjacent doubles
      return std::abs(r_lo) <= std::abs(r_hi) ? lo : hi;
    }
    x = next;
    r = residual(x);
    if (std::abs(r) <= tol) return x;
    if (r < 0.0) {
      lo = x;
      r_lo = r;
    } else {
      hi = x;
      r_hi = r;
    }
  }
  std::ostringstream os;
  os << "solve_increasing: no convergence after " << max_iter << " iterations (residual " << r
     << ", tolerance " << tol << ")";
  throw ConvergenceError(os.str());
}

Vector subproblem_solve(const SeparableFunction& f, const Vector& b, const Matrix& p,
                        const Vector& z, double tol) {
  const Eigen::Index n = f.dimension();
  if (b.size() != n || z.size() != n || p.rows() != n || p.cols() != n) {
    std::ostringstream os;
    os << "subproblem_solve: shape mismatch for " << f.describe() << " (b " << b.size() << ", z "
       << z.size() << ", P " << p.rows() << "x" << p.cols() << ")";
    throw ValidationError(os.str());
  }
  require_psd(p, "subproblem_solve: P");

  if (auto d = f.quadratic_curvature()) {
    const Matrix system = p + Matrix(d->asDiagonal());
    const Vector rhs = p * z - b;
    try {
      return solve_spd(system, rhs);
    } catch (const NotSpdError&) {
      throw SingularityError("subproblem_solve: quadratic system is singular");
    }
  }

  if (!is_diagonal(p)) {
    throw UnsupportedError("subproblem_solve: non-quadratic " + f.describe() +
                           " requires a diagonal P");
  }
  Vector u(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double pii = p(i, i);
    const double target = pii * z(i) - b(i);
    u(i) = solve_increasing(
        [&](double x) { return f.coord_derivative(i, x) + pii * x - target; },
        [&](double x) { return f.coord_curvature(i, x) + pii; }, z(i),
        tol * (1.0 + std::abs(b(i)) + std::abs(pii * z(i))));
  }
  return u;
}

Vector conjugate_gradient(const SeparableFunction& f, const Vector& beta) {
  require_dimension(f, beta, "conjugate_gradient");
  Vector u(beta.size());
  if (auto d = f.quadratic_curvature()) {
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
      if ((*d)(i) > 0.0) {
        u(i) = beta(i) / (*d)(i);
      } else if (beta(i) == 0.0) {
        u(i) = 0.0;
      } else {
        std::ostringstream os;
        os << "conjugate of " << f.describe() << ": coordinate " << i
           << " has zero curvature and nonzero target " << beta(i);
        throw DomainError(os.str());
      }
    }
    return u;
  }
  for (Eigen::Index i = 0; i < beta.size(); ++i) u(i) = coord_conjugate_point(f, i, beta(i));
  return u;
}

double conjugate_value(const SeparableFunction& f, const Vector& beta) {
  const Vector u = conjugate_gradient(f, beta);
  if (auto d = f.quadratic_curvature()) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
      if ((*d)(i) > 0.0) total += 0.5 * beta(i) * beta(i) / (*d)(i);
    }
    return total;
  }
  return beta.dot(u) - f.value(u);
}

double bregman(const SeparableFunction& f, const Vector& from, const Vector& to) {
  require_dimension(f, from, "bregman");
  require_dimension(f, to, "bregman");
  return f.value(to) - f.value(from) - f.gradient(from).dot(to - from);
}

double conjugate_bregman(const SeparableFunction& f, const Vector& from, const Vector& to) {
  return conjugate_value(f, to) - conjugate_value(f, from) -
         conjugate_gradient(f, from).dot(to - from);
}

}  // namespace admmlab
