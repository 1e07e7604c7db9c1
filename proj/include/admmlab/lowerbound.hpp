#ifndef ADMMLAB_LOWERBOUND_HPP
#define ADMMLAB_LOWERBOUND_HPP

// Worst-case quadratic instances: phi = 1/2 w^T Q w, g = 1/2 v^T L v, A = B = I,
// c = 0, G = 0, with Q and L diagonal. Each coordinate evolves independently
// in (w, alpha) through a 2x2 iteration matrix.

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "admmlab/linalg.hpp"

namespace admmlab {

template <typename Scalar>
struct CoordinateBlock {
  Scalar q{};
  Scalar lambda{};
  Scalar rho{};
  Scalar h{};  // zero for the standard block
  Eigen::Matrix<Scalar, 2, 2> M;
};

namespace lowerbound_detail {

template <typename Scalar>
void require_positive(Scalar x, const char* name) {
  if (!(x > Scalar(0)) || !std::isfinite(static_cast<double>(x))) {
    std::ostringstream os;
    os << name << " must be positive and finite (got " << x << ")";
    throw ValidationError(os.str());
  }
}

template <typename Scalar>
void require_lambda_gamma(Scalar lambda, Scalar gamma) {
  require_positive(lambda, "lambda");
  require_positive(gamma, "gamma");
  if (lambda > Scalar(1) / gamma) {
    std::ostringstream os;
    os << "worst-case rate assumes lambda <= 1/gamma (lambda=" << lambda << ", gamma=" << gamma
       << ")";
    throw PreconditionError(os.str());
  }
}

}  // namespace lowerbound_detail

/// (w, alpha) recursion of standard ADMM on one coordinate:
///   M = 1/((lambda+rho)(q+rho)) [[rho^2, -lambda], [-q rho^2, q lambda]].
template <typename Scalar>
CoordinateBlock<Scalar> admm_block(Scalar q, Scalar lambda, Scalar rho) {
  lowerbound_detail::require_positive(q, "q");
  lowerbound_detail::require_positive(lambda, "lambda");
  lowerbound_detail::require_positive(rho, "rho");
  CoordinateBlock<Scalar> b{q, lambda, rho, Scalar(0), {}};
  const Scalar scale = Scalar(1) / ((lambda + rho) * (q + rho));
  b.M << rho * rho, -lambda, -q * rho * rho, q * lambda;
  b.M *= scale;
  return b;
}

/// Linearized ADMM with H = h I on one coordinate:
///   M = 1/((rho+h)(rho+lambda)) [[rho^2 + (rho+lambda)(h-q), -lambda],
///                                [rho (lambda h - (rho+lambda) q), lambda h]].
template <typename Scalar>
CoordinateBlock<Scalar> linadmm_block(Scalar q, Scalar lambda, Scalar h, Scalar rho) {
  lowerbound_detail::require_positive(q, "q");
  lowerbound_detail::require_positive(lambda, "lambda");
  lowerbound_detail::require_positive(h, "h");
  lowerbound_detail::require_positive(rho, "rho");
  CoordinateBlock<Scalar> b{q, lambda, rho, h, {}};
  const Scalar scale = Scalar(1) / ((rho + h) * (rho + lambda));
  b.M << rho * rho + (rho + lambda) * (h - q), -lambda,
      rho * (lambda * h - (rho + lambda) * q), lambda * h;
  b.M *= scale;
  return b;
}

template <typename Scalar>
Scalar block_spectral_radius(const CoordinateBlock<Scalar>& b) {
  return spectral_radius_2x2(b.M);
}

/// Largest block spectral radius over the diagonal instance Q = diag(q), L = diag(l).
template <typename Scalar>
Scalar admm_instance_radius(const VectorX<Scalar>& q, const VectorX<Scalar>& lambda, Scalar rho) {
  if (q.size() != lambda.size() || q.size() == 0) {
    throw ValidationError("admm_instance_radius: q and lambda must be nonempty and equal length");
  }
  Scalar worst(0);
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    worst = std::max(worst, block_spectral_radius(admm_block(q(i), lambda(i), rho)));
  }
  return worst;
}

template <typename Scalar>
Scalar linadmm_instance_radius(const VectorX<Scalar>& q, const VectorX<Scalar>& lambda, Scalar h,
                               Scalar rho) {
  if (q.size() != lambda.size() || q.size() == 0) {
    throw ValidationError(
        "linadmm_instance_radius: q and lambda must be nonempty and equal length");
  }
  Scalar worst(0);
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    worst = std::max(worst, block_spectral_radius(linadmm_block(q(i), lambda(i), h, rho)));
  }
  return worst;
}

/// max[(rho^2 + lambda^2)/(rho + lambda)^2, (rho^2 gamma^2 + 1)/(rho gamma + 1)^2].
template <typename Scalar>
Scalar admm_worstcase_rate(Scalar rho, Scalar lambda, Scalar gamma) {
  lowerbound_detail::require_positive(rho, "rho");
  lowerbound_detail::require_lambda_gamma(lambda, gamma);
  const Scalar low = (rho * rho + lambda * lambda) / ((rho + lambda) * (rho + lambda));
  const Scalar high =
      (rho * rho * gamma * gamma + Scalar(1)) / ((rho * gamma + Scalar(1)) * (rho * gamma + Scalar(1)));
  return std::max(low, high);
}

template <typename Scalar>
struct OptimalRate {
  Scalar rho;
  Scalar rate;
};

/// rho* = sqrt(lambda/gamma), rate = (1 + gamma lambda)/(1 + sqrt(gamma lambda))^2.
template <typename Scalar>
OptimalRate<Scalar> admm_optimal_rate(Scalar lambda, Scalar gamma) {
  lowerbound_detail::require_lambda_gamma(lambda, gamma);
  const Scalar root = std::sqrt(gamma * lambda);
  return {std::sqrt(lambda / gamma), (Scalar(1) + gamma * lambda) / ((Scalar(1) + root) * (Scalar(1) + root))};
}

/// (rho^2 + (h-q) rho + (h-q) lambda) / (rho^2 + (h+lambda) rho + h lambda).
template <typename Scalar>
Scalar linadmm_rate_lowerbound(Scalar rho, Scalar lambda, Scalar h, Scalar q) {
  lowerbound_detail::require_positive(rho, "rho");
  lowerbound_detail::require_positive(lambda, "lambda");
  lowerbound_detail::require_positive(q, "q");
  if (!(h > q)) {
    std::ostringstream os;
    os << "linadmm_rate_lowerbound: need h > q (h=" << h << ", q=" << q << ")";
    throw ValidationError(os.str());
  }
  return (rho * rho + (h - q) * rho + (h - q) * lambda) /
         (rho * rho + (h + lambda) * rho + h * lambda);
}

/// Log-spaced grid of n points from lo to hi inclusive.
template <typename Scalar>
std::vector<Scalar> log_grid(Scalar lo, Scalar hi, int n) {
  lowerbound_detail::require_positive(lo, "grid lower end");
  lowerbound_detail::require_positive(hi, "grid upper end");
  if (n < 1 || hi < lo) throw ValidationError("log_grid: need n >= 1 and lo <= hi");
  std::vector<Scalar> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const Scalar a = std::log(lo);
  const Scalar step = (std::log(hi) - a) / Scalar(n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + step * Scalar(i));
  out.back() = hi;
  return out;
}

}  // namespace admmlab

#endif  // ADMMLAB_LOWERBOUND_HPP
