#ifndef ADMMLAB_SOLVERS_HPP
#define ADMMLAB_SOLVERS_HPP

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "admmlab/problem.hpp"

namespace admmlab {

enum class Algorithm { kStandard, kLinearized };

std::string_view to_string(Algorithm algo);

struct SolverOptions {
  Algorithm algo = Algorithm::kStandard;
  double rho = 1.0;
  Matrix G;  // m x m; empty means zero
  Matrix H;  // n x n; empty means zero
  int max_iters = 200;
  double inner_tol = 1e-12;
  /// Stop once error_norm < 1e-14 (only when the optimum is known).
  bool stop_at_floor = true;
  /// Skip the min-eigenvalue(H) >= 1/gamma check for the linearized variant.
  bool allow_small_h = false;
};

/// Validated solver settings bound to a problem's dimensions.
///
/// H~ = A^{-T} H A^{-1} is formed once here. It is zero when H = 0 and
/// absent when H != 0 but A is not square invertible.
class SolverConfig {
 public:
  SolverConfig(const Problem& p, SolverOptions options);

  Algorithm algo() const { return opts_.algo; }
  double rho() const { return opts_.rho; }
  const Matrix& G() const { return opts_.G; }
  const Matrix& H() const { return opts_.H; }
  const std::optional<Matrix>& H_tilde() const { return h_tilde_; }
  int max_iters() const { return opts_.max_iters; }
  double inner_tol() const { return opts_.inner_tol; }
  bool stop_at_floor() const { return opts_.stop_at_floor; }
  const SolverOptions& options() const { return opts_; }

 private:
  SolverOptions opts_;
  std::optional<Matrix> h_tilde_;
};

struct Iterate {
  Vector w;
  Vector v;
  Vector alpha;
  Vector alpha_tilde;  // alpha + H~ A (w_t - w_{t-1})
  int t = 0;
};

using Trajectory = std::vector<Iterate>;
using Observer = std::function<void(const Iterate&)>;

/// (w, v, alpha) = (1, 1, 0).
Iterate default_initial_point(const Problem& p);
Iterate make_initial_point(const Problem& p, Vector w, Vector v, Vector alpha);

/// One pass of preconditioned ADMM: v-update, then w-update, then multiplier.
Iterate admm_step(const Problem& p, const SolverConfig& cfg, const Iterate& cur);

/// One pass of preconditioned linearized ADMM (phi replaced by its
/// H-quadratic model at w_{t-1}, so the w-update is a linear solve).
Iterate linadmm_step(const Problem& p, const SolverConfig& cfg, const Iterate& cur);

/// Dispatches on cfg.algo().
Iterate step(const Problem& p, const SolverConfig& cfg, const Iterate& cur);

/// Runs up to cfg.max_iters() steps. The returned trajectory starts with
/// `init`; the observer (if any) sees every new iterate.
Trajectory run(const Problem& p, const SolverConfig& cfg, const Iterate& init,
               const Observer& observer = {});

}  // namespace admmlab

#endif  // ADMMLAB_SOLVERS_HPP
