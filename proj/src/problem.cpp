#include "admmlab/problem.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace admmlab {

namespace {

void require_size(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    std::ostringstream os;
    os << "Problem: " << what << " has size " << got << ", expected " << want;
    throw ValidationError(os.str());
  }
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << name << " must be positive and finite (got " << x << ")";
    throw ValidationError(os.str());
  }
}

}  // namespace

Problem::Problem(FunctionPtr phi, FunctionPtr g, Matrix a, Matrix b, Vector c,
                 std::optional<KnownOptimum> optimum)
    : phi_(std::move(phi)),
      g_(std::move(g)),
      a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      optimum_(std::move(optimum)) {
  if (!phi_ || !g_) throw ValidationError("Problem: phi and g must be set");
  require_size(a_.cols(), phi_->dimension(), "A columns");
  require_size(b_.cols(), g_->dimension(), "B columns");
  require_size(b_.rows(), a_.rows(), "B rows");
  require_size(c_.size(), a_.rows(), "c");
  if (!a_.allFinite() || !b_.allFinite() || !c_.allFinite()) {
    throw ValidationError("Problem: A, B and c must be finite");
  }
  if (optimum_) {
    require_size(optimum_->w.size(), n(), "optimum.w");
    require_size(optimum_->v.size(), m(), "optimum.v");
    require_size(optimum_->alpha.size(), this->p(), "optimum.alpha");
    const KktResiduals res = kkt_residuals(*this, optimum_->w, optimum_->v, optimum_->alpha);
    if (res.feasibility > 1e-8 || res.stationarity_w > 1e-8 || res.stationarity_v > 1e-8) {
      std::ostringstream os;
      os << "Problem: supplied optimum violates KKT conditions (feasibility " << res.feasibility
         << ", stationarity_w " << res.stationarity_w << ", stationarity_v "
         << res.stationarity_v << ")";
      throw ValidationError(os.str());
    }
  }
  try {
    a_pinv_ = pseudo_inverse(a_);
  } catch (const SingularityError&) {
    a_pinv_.reset();
  }
}

const Matrix& Problem::A_pinv() const {
  if (!a_pinv_) throw SingularityError("Problem: A A^T is singular, no pseudo-inverse");
  return *a_pinv_;
}

double Problem::phi_gamma() const {
  const double smooth = phi_->smoothness();
  if (!std::isfinite(smooth) || !(smooth > 0.0)) {
    throw PreconditionError("Problem: phi must have finite positive smoothness");
  }
  return 1.0 / smooth;
}

FunctionPtr make_function(const spec::FunctionSpec& f) {
  FunctionPtr base = std::visit(
      [](const auto& k) -> FunctionPtr {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, spec::Quadratic>) {
          return make_diagonal_quadratic(k.diag);
        } else if constexpr (std::is_same_v<T, spec::Arctan>) {
          return make_arctan_smooth(k.gamma, k.mu);
        } else {
          return make_quartic_strong(k.lambda);
        }
      },
      f.kind);
  if (f.tikhonov) return make_tikhonov(std::move(base), *f.tikhonov);
  return base;
}

Problem make_problem(const ProblemSpec& spec) {
  return std::visit(
      [](const auto& s) -> Problem {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, spec::Paper1d>) {
          require_positive(s.gamma, "problem.gamma");
          require_positive(s.lambda, "problem.lambda");
          if (!(s.mu >= 0.0) || !std::isfinite(s.mu)) {
            throw ValidationError("problem.mu must be nonnegative and finite");
          }
          const Matrix one = Matrix::Identity(1, 1);
          KnownOptimum opt{Vector::Zero(1), Vector::Zero(1), Vector::Zero(1)};
          return Problem(make_arctan_smooth(s.gamma, s.mu), make_quartic_strong(s.lambda), one,
                         one, Vector::Zero(1), opt);
        } else if constexpr (std::is_same_v<T, spec::QuadraticDiag>) {
          const Eigen::Index n = s.q.size();
          if (n == 0 || s.lambda.size() != n) {
            throw ValidationError("problem.q and problem.lambda must be nonempty and equal length");
          }
          for (Eigen::Index i = 0; i < n; ++i) {
            require_positive(s.q(i), "problem.q");
            require_positive(s.lambda(i), "problem.lambda");
          }
          const Matrix eye = Matrix::Identity(n, n);
          KnownOptimum opt{Vector::Zero(n), Vector::Zero(n), Vector::Zero(n)};
          return Problem(make_diagonal_quadratic(s.q), make_diagonal_quadratic(s.lambda), eye, eye,
                         Vector::Zero(n), opt);
        } else {
          return Problem(make_function(s.phi), make_function(s.g), s.A, s.B, s.c, s.optimum);
        }
      },
      spec);
}

double lagrangian_value(const Problem& p, const Vector& w, const Vector& v, const Vector& alpha,
                        double rho) {
  if (!(rho >= 0.0)) throw ValidationError("lagrangian_value: rho must be nonnegative");
  const Vector r = p.A() * w - p.B() * v - p.c();
  return p.phi().value(w) + p.g().value(v) + alpha.dot(r) + 0.5 * rho * r.squaredNorm();
}

double dual_value(const Problem& p, const Vector& alpha) {
  const Vector phi_arg = -(p.A().transpose() * alpha);
  const Vector g_arg = p.B().transpose() * alpha;
  return -conjugate_value(p.phi(), phi_arg) - conjugate_value(p.g(), g_arg) - alpha.dot(p.c());
}

double lifted_primal_value(const Problem& p, const Vector& v_hat) {
  const Vector w_hat = p.A_pinv() * (p.B() * v_hat + p.c());
  return p.phi().value(w_hat) + p.g().value(v_hat);
}

double duality_gap(const Problem& p, const Vector& v_hat, const Vector& alpha_hat) {
  const double primal = lifted_primal_value(p, v_hat);
  const double dual = dual_value(p, alpha_hat);
  const double gap = primal - dual;
  if (gap >= 0.0) return gap;
  const double floor = 1e-10 * std::max(1.0, std::abs(primal) + std::abs(dual));
  if (gap >= -floor) return 0.0;
  std::ostringstream os;
  os << "duality_gap: weak duality violated (primal " << primal << ", dual " << dual << ")";
  throw InternalConsistencyError(os.str());
}

KktResiduals kkt_residuals(const Problem& p, const Vector& w, const Vector& v,
                           const Vector& alpha) {
  KktResiduals out{};
  out.feasibility = (p.A() * w - p.B() * v - p.c()).norm();
  out.stationarity_w = (p.A().transpose() * alpha + p.phi().gradient(w)).norm();
  out.stationarity_v = (p.B().transpose() * alpha - p.g().gradient(v)).norm();
  return out;
}

double error_norm(const Problem& p, const Vector& w, const Vector& v) {
  const auto& opt = p.known_optimum();
  if (!opt) throw PreconditionError("error_norm: problem has no known optimum");
  return std::sqrt((w - opt->w).squaredNorm() + (v - opt->v).squaredNorm());
}

}  // namespace admmlab
