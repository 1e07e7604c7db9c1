#include "admmlab/solvers.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace admmlab {

namespace {

constexpr double kErrorFloor = 1e-14;

template <typename E>
[[noreturn]] void rethrow_at(const E& e, int t) {
  std::ostringstream os;
  os << "iteration " << t << ": " << e.what();
  throw E(os.str());
}

// Runs `body`, re-raising library errors with the iteration index attached.
template <typename F>
auto with_iteration(int t, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const ConvergenceError& e) {
    rethrow_at(e, t);
  } catch (const SingularityError& e) {
    rethrow_at(e, t);
  } catch (const UnsupportedError& e) {
    rethrow_at(e, t);
  } catch (const DomainError& e) {
    rethrow_at(e, t);
  }
}

Vector v_update(const Problem& p, const SolverConfig& cfg, const Iterate& cur) {
  // g(v) - alpha^T B v + rho/2 ||A w - B v - c||^2 + rho/2 ||v - v_prev||_G^2,
  // recentred at z = v_prev.
  const double rho = cfg.rho();
  const Matrix& b_mat = p.B();
  const Matrix system = rho * (b_mat.transpose() * b_mat + cfg.G());
  const Vector lin = -(b_mat.transpose() * cur.alpha) -
                     rho * (b_mat.transpose() * (p.A() * cur.w - b_mat * cur.v - p.c()));
  return subproblem_solve(p.g(), lin, system, cur.v, cfg.inner_tol());
}

Iterate finish(const Problem& p, const SolverConfig& cfg, const Iterate& cur, Vector v, Vector w) {
  Iterate next;
  next.t = cur.t + 1;
  next.alpha = cur.alpha + cfg.rho() * (p.A() * w - p.B() * v - p.c());
  if (cfg.H_tilde()) {
    next.alpha_tilde = next.alpha + (*cfg.H_tilde()) * (p.A() * (w - cur.w));
  } else {
    next.alpha_tilde = next.alpha;
  }
  next.v = std::move(v);
  next.w = std::move(w);
  return next;
}

void require_algo(const SolverConfig& cfg, Algorithm want, const char* what) {
  if (cfg.algo() != want) {
    throw ValidationError(std::string(what) + ": configuration is for " +
                          std::string(to_string(cfg.algo())));
  }
}

}  // namespace

std::string_view to_string(Algorithm algo) {
  return algo == Algorithm::kStandard ? "admm" : "linadmm";
}

SolverConfig::SolverConfig(const Problem& p, SolverOptions options) : opts_(std::move(options)) {
  if (!(opts_.rho > 0.0) || !std::isfinite(opts_.rho)) {
    std::ostringstream os;
    os << "solver.rho must be positive and finite (got " << opts_.rho << ")";
    throw ValidationError(os.str());
  }
  if (opts_.max_iters < 0) throw ValidationError("solver.iters must be nonnegative");
  if (!(opts_.inner_tol > 0.0)) throw ValidationError("solver.inner_tol must be positive");
  if (opts_.G.size() == 0) opts_.G = Matrix::Zero(p.m(), p.m());
  if (opts_.H.size() == 0) opts_.H = Matrix::Zero(p.n(), p.n());
  if (opts_.G.rows() != p.m() || opts_.G.cols() != p.m()) {
    throw ValidationError("solver.G must be m x m with m = dim(v)");
  }
  if (opts_.H.rows() != p.n() || opts_.H.cols() != p.n()) {
    throw ValidationError("solver.H must be n x n with n = dim(w)");
  }
  require_psd(opts_.G, "solver.G");
  require_psd(opts_.H, "solver.H");

  if (opts_.H.isZero(0.0)) {
    h_tilde_ = Matrix::Zero(p.p(), p.p());
  } else if (p.A().rows() == p.A().cols()) {
    const Eigen::FullPivLU<Matrix> lu(p.A());
    if (lu.isInvertible()) {
      const Matrix a_inv = lu.inverse();
      Matrix ht = a_inv.transpose() * opts_.H * a_inv;
      h_tilde_ = 0.5 * (ht + ht.transpose());
    }
  }

  if (opts_.algo == Algorithm::kLinearized && !opts_.allow_small_h) {
    const double need = p.phi().smoothness();
    if (!std::isfinite(need)) {
      throw ValidationError("linearized ADMM needs a smooth phi (finite smoothness)");
    }
    const double have = extreme_eigenvalues_symmetric(opts_.H).min;
    if (have < need * (1.0 - 1e-12)) {
      std::ostringstream os;
      os << "solver.H: smallest eigenvalue " << have
         << " is below the smoothness constant of phi (" << need << ")";
      throw ValidationError(os.str());
    }
  }
}

Iterate make_initial_point(const Problem& p, Vector w, Vector v, Vector alpha) {
  if (w.size() != p.n() || v.size() != p.m() || alpha.size() != p.p()) {
    std::ostringstream os;
    os << "init: expected sizes w=" << p.n() << ", v=" << p.m() << ", alpha=" << p.p()
       << " but got " << w.size() << ", " << v.size() << ", " << alpha.size();
    throw ValidationError(os.str());
  }
  Iterate it;
  it.w = std::move(w);
  it.v = std::move(v);
  it.alpha = std::move(alpha);
  it.alpha_tilde = it.alpha;
  it.t = 0;
  return it;
}

Iterate default_initial_point(const Problem& p) {
  return make_initial_point(p, Vector::Ones(p.n()), Vector::Ones(p.m()), Vector::Zero(p.p()));
}

Iterate admm_step(const Problem& p, const SolverConfig& cfg, const Iterate& cur) {
  require_algo(cfg, Algorithm::kStandard, "admm_step");
  return with_iteration(cur.t + 1, [&] {
    Vector v = v_update(p, cfg, cur);
    // phi(w) + alpha^T A w + rho/2 ||A w - B v - c||^2 + 1/2 ||w - w_prev||_H^2
    const double rho = cfg.rho();
    const Matrix& a = p.A();
    const Matrix system = rho * (a.transpose() * a) + cfg.H();
    const Vector lin =
        a.transpose() * cur.alpha + rho * (a.transpose() * (a * cur.w - p.B() * v - p.c()));
    Vector w = subproblem_solve(p.phi(), lin, system, cur.w, cfg.inner_tol());
    return finish(p, cfg, cur, std::move(v), std::move(w));
  });
}

Iterate linadmm_step(const Problem& p, const SolverConfig& cfg, const Iterate& cur) {
  require_algo(cfg, Algorithm::kLinearized, "linadmm_step");
  return with_iteration(cur.t + 1, [&] {
    Vector v = v_update(p, cfg, cur);
    const double rho = cfg.rho();
    const Matrix& a = p.A();
    const Matrix system = cfg.H() + rho * (a.transpose() * a);
    const Vector rhs = cfg.H() * cur.w - p.phi().gradient(cur.w) -
                       a.transpose() * cur.alpha + rho * (a.transpose() * (p.B() * v + p.c()));
    Vector w;
    try {
      w = solve_spd(system, rhs);
    } catch (const NotSpdError&) {
      throw SingularityError("linadmm_step: H + rho A^T A is singular");
    }
    return finish(p, cfg, cur, std::move(v), std::move(w));
  });
}

Iterate step(const Problem& p, const SolverConfig& cfg, const Iterate& cur) {
  return cfg.algo() == Algorithm::kStandard ? admm_step(p, cfg, cur) : linadmm_step(p, cfg, cur);
}

Trajectory run(const Problem& p, const SolverConfig& cfg, const Iterate& init,
               const Observer& observer) {
  (void)make_initial_point(p, init.w, init.v, init.alpha);
  Trajectory traj;
  traj.reserve(static_cast<std::size_t>(cfg.max_iters()) + 1);
  traj.push_back(init);
  const bool floor = cfg.stop_at_floor() && p.known_optimum().has_value();
  for (int k = 0; k < cfg.max_iters(); ++k) {
    if (floor && error_norm(p, traj.back().w, traj.back().v) < kErrorFloor) break;
    traj.push_back(step(p, cfg, traj.back()));
    if (observer) observer(traj.back());
  }
  return traj;
}

}  // namespace admmlab
