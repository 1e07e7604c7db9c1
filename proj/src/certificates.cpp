#include "admmlab/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace admmlab {

namespace {

constexpr double kCertificateTolerance = 1e-9;

// num / den with a vanishing denominator meaning "no constraint".
double bound_ratio(double num, double den) { return den == 0.0 ? kInfinity : num / den; }

void require_theta_inputs(double gamma, double lambda, double rho, double s) {
  if (!(rho > 0.0)) throw ValidationError("theta: rho must be positive");
  if (!(s >= 0.0 && s < 1.0)) throw ValidationError("theta: s must lie in [0, 1)");
  if (!(gamma > 0.0)) throw ValidationError("theta: gamma must be positive");
  if (!(lambda > 0.0)) throw ValidationError("theta: lambda must be positive");
}

double third_term(const SpectralBounds& b, double lambda, double rho, double s) {
  return bound_ratio((1.0 - s) * lambda,
                     (rho + b.sigma_H_tilde) * b.sigma_B * b.sigma_B + (1.0 - s) * rho * b.sigma_G);
}

const Matrix& require_h_tilde(const SolverConfig& cfg) {
  if (!cfg.H_tilde()) {
    throw PreconditionError("certificates need H = A^T H~ A (A square invertible when H != 0)");
  }
  return *cfg.H_tilde();
}

const KnownOptimum& require_optimum(const Problem& p, const char* what) {
  if (!p.known_optimum()) {
    throw PreconditionError(std::string(what) + ": problem has no known optimum");
  }
  return *p.known_optimum();
}

void require_nonnegative_theta(double theta) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw ValidationError("theta must be finite and nonnegative");
  }
}

void record(CheckReport& rep, double slack, int t, const char* name) {
  ++rep.checked;
  if (slack < rep.worst_slack) {
    rep.worst_slack = slack;
    rep.worst_check = name;
  }
  if (slack < -rep.tolerance) {
    rep.passed = false;
    if (!rep.first_violation || t < *rep.first_violation) rep.first_violation = t;
  }
}

// Quantities shared by the Bregman-type checks against the optimum.
struct BregmanTerms {
  double max_phi;  // max(D_phi, D_phi*)
  double d_phi;
  double d_phi_star;
  double d_g;
};

BregmanTerms bregman_terms(const Problem& p, const SolverConfig& cfg, const Trajectory& traj,
                           std::size_t t) {
  const KnownOptimum& opt = *p.known_optimum();
  const Vector& w_eval = cfg.algo() == Algorithm::kStandard ? traj[t].w : traj[t - 1].w;
  BregmanTerms out{};
  out.d_phi = bregman(p.phi(), opt.w, w_eval);
  out.d_phi_star = conjugate_bregman(p.phi(), -(p.A().transpose() * opt.alpha),
                                     -(p.A().transpose() * traj[t].alpha_tilde));
  out.d_g = bregman(p.g(), opt.v, traj[t].v);
  out.max_phi = std::max(out.d_phi, out.d_phi_star);
  return out;
}

}  // namespace

SpectralBounds spectral_bounds(const Problem& p, const SolverConfig& cfg) {
  SpectralBounds b;
  const Matrix gram = p.A() * p.A().transpose();
  b.sigma_A = std::sqrt(std::max(0.0, extreme_eigenvalues_symmetric(gram).min));
  b.sigma_B = largest_singular_value(p.B());
  b.sigma_G = extreme_eigenvalues_symmetric(cfg.G()).max;
  const auto h = extreme_eigenvalues_symmetric(cfg.H());
  b.sigma_H = h.max;
  b.sigma_H_min = h.min;
  b.sigma_H_tilde = extreme_eigenvalues_symmetric(require_h_tilde(cfg)).max;
  return b;
}

double theta_admm(const SpectralBounds& b, double gamma, double lambda, double rho, double s) {
  require_theta_inputs(gamma, lambda, rho, s);
  const double t1 = bound_ratio(gamma * rho * b.sigma_A * b.sigma_A, gamma * b.sigma_H + 1.0);
  const double t2 = bound_ratio(s * rho, b.sigma_H_tilde);
  return std::min({t1, t2, third_term(b, lambda, rho, s)});
}

double theta_linadmm(const SpectralBounds& b, double gamma, double lambda, double rho, double s) {
  require_theta_inputs(gamma, lambda, rho, s);
  if (b.sigma_H_min < (1.0 / gamma) * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "theta_linadmm: smallest eigenvalue of H (" << b.sigma_H_min
       << ") is below 1/gamma = " << 1.0 / gamma;
    throw PreconditionError(os.str());
  }
  const double t1 = bound_ratio(rho * b.sigma_A * b.sigma_A, b.sigma_H_min);
  const double t2 = bound_ratio(s * rho, b.sigma_H_tilde);
  return std::min({t1, t2, third_term(b, lambda, rho, s)});
}

RateCertificate certify_rate(const SpectralBounds& b, Algorithm algo, double gamma, double lambda,
                             double rho) {
  auto theta_at = [&](double s) {
    return algo == Algorithm::kStandard ? theta_admm(b, gamma, lambda, rho, s)
                                        : theta_linadmm(b, gamma, lambda, rho, s);
  };
  RateCertificate best{theta_at(0.0), 0.0, rho, algo};
  if (b.sigma_H_tilde == 0.0) return best;
  best.theta = -1.0;
  for (int k = 1; k <= 19; ++k) {
    const double s = 0.05 * k;
    const double theta = theta_at(s);
    if (theta > best.theta) {
      best.theta = theta;
      best.s = s;
    }
  }
  return best;
}

RateCertificate certify_rate(const Problem& p, const SolverConfig& cfg) {
  return certify_rate(spectral_bounds(p, cfg), cfg.algo(), p.phi_gamma(), p.g_lambda(), cfg.rho());
}

RhoTheta optimal_rho_theta_admm(double sigma_A, double sigma_B, double sigma_G, double lambda,
                                double gamma) {
  if (!(sigma_A > 0.0 && sigma_B > 0.0 && lambda > 0.0 && gamma > 0.0 && sigma_G >= 0.0)) {
    throw ValidationError("optimal_rho_theta_admm: inputs must be positive (sigma_G >= 0)");
  }
  // With H = 0 the binding terms are gamma rho sA^2 (increasing in rho) and
  // lambda / (rho S), S = sB^2 + sG (decreasing); the optimum equalises them.
  const double spread = sigma_B * sigma_B + sigma_G;
  const double rho = std::sqrt(lambda / gamma) / (sigma_A * std::sqrt(spread));
  const double theta = sigma_A * std::sqrt(gamma * lambda / spread);
  return {rho, theta};
}

Reference optimum_reference(const Problem& p) {
  const KnownOptimum& opt = require_optimum(p, "optimum_reference");
  return {opt.alpha, opt.v};
}

std::vector<CertificateRow> certificate_rows(const Trajectory& traj, const Problem& p,
                                             const SolverConfig& cfg, const Reference& ref,
                                             double theta) {
  require_nonnegative_theta(theta);
  const Matrix& ht = require_h_tilde(cfg);
  if (ref.alpha.size() != p.p() || ref.v.size() != p.m()) {
    throw ValidationError("certificate_rows: reference has the wrong dimensions");
  }
  const Matrix& a = p.A();
  const Matrix& b = p.B();
  const Vector& c = p.c();
  const double rho = cfg.rho();
  const bool standard = cfg.algo() == Algorithm::kStandard;

  const Vector phi_arg = -(a.transpose() * ref.alpha);
  const Vector w_ref = conjugate_gradient(p.phi(), phi_arg);
  const double phi_ref = p.phi().value(w_ref);
  const double phi_star_ref = conjugate_value(p.phi(), phi_arg);
  const double g_ref = p.g().value(ref.v);
  const Vector ref_residual = a * w_ref - b * ref.v - c;
  const Vector bv_c = b * ref.v + c;

  auto delta = [&](const Iterate& it) {
    const Vector x = a * it.w - bv_c;
    return 0.5 * rho * x.squaredNorm() + 0.5 * quad_form(x, ht) +
           0.5 * rho * (1.0 + theta) * quad_form(Vector(it.v - ref.v), cfg.G()) +
           (1.0 + theta) / (2.0 * rho) * (ref.alpha - it.alpha).squaredNorm();
  };

  std::vector<CertificateRow> rows;
  rows.reserve(traj.size());
  for (std::size_t t = 0; t < traj.size(); ++t) {
    const Iterate& it = traj[t];
    CertificateRow row;
    row.t = it.t;
    row.delta = delta(it);
    if (t > 0) {
      const Vector& w_used = standard ? it.w : traj[t - 1].w;
      const double g_t = p.g().value(it.v);
      row.r = p.phi().value(w_used) + g_t - phi_ref - g_ref - it.alpha_tilde.dot(ref_residual) +
              ref.alpha.dot(a * w_used - b * it.v - c);
      row.r_star = conjugate_value(p.phi(), -(a.transpose() * it.alpha_tilde)) + g_t -
                   phi_star_ref - g_ref + it.alpha_tilde.dot(bv_c) - ref.alpha.dot(b * it.v + c);
    }
    rows.push_back(row);
  }
  return rows;
}

CheckReport check_certificates(const std::vector<CertificateRow>& rows, double theta) {
  require_nonnegative_theta(theta);
  CheckReport rep;
  if (rows.empty()) return rep;
  const double delta0 = rows.front().delta;
  rep.tolerance = kCertificateTolerance * (1.0 + std::abs(delta0));
  const double shrink = 1.0 / (1.0 + theta);

  double sum_r = 0.0;
  double sum_r_star = 0.0;
  double decay = 1.0;  // (1+theta)^{-T}
  for (std::size_t t = 1; t < rows.size(); ++t) {
    const double step_rhs = shrink * rows[t - 1].delta - rows[t].delta;
    record(rep, step_rhs - rows[t].r, rows[t].t, "per-step r");
    record(rep, step_rhs - rows[t].r_star, rows[t].t, "per-step r*");

    sum_r = shrink * sum_r + rows[t].r;
    sum_r_star = shrink * sum_r_star + rows[t].r_star;
    decay *= shrink;
    const double sum_rhs = decay * delta0 - rows[t].delta;
    record(rep, sum_rhs - sum_r, rows[t].t, "weighted-sum r");
    record(rep, sum_rhs - sum_r_star, rows[t].t, "weighted-sum r*");
  }
  if (rep.checked == 0) rep.worst_slack = 0.0;
  return rep;
}

CheckReport corollary_bregman_check(const Trajectory& traj, const Problem& p,
                                    const SolverConfig& cfg, double theta) {
  require_nonnegative_theta(theta);
  const KnownOptimum& opt = require_optimum(p, "corollary_bregman_check");
  const Matrix& ht = require_h_tilde(cfg);
  const double rho = cfg.rho();
  const bool standard = cfg.algo() == Algorithm::kStandard;
  const double sigma_ht = extreme_eigenvalues_symmetric(ht).max;

  CheckReport rep;
  if (traj.empty()) return rep;

  const Iterate& init = traj.front();
  const Vector aw0 = p.A() * (init.w - opt.w);
  const double alpha0 = (init.alpha - opt.alpha).squaredNorm();
  const double v0 = quad_form(Vector(init.v - opt.v), cfg.G());
  const double w_part =
      standard ? rho * aw0.squaredNorm() + quad_form(aw0, ht) : (rho + sigma_ht) * aw0.squaredNorm();
  const double bracket = w_part + (1.0 + theta) / rho * alpha0 + rho * (1.0 + theta) * v0;
  rep.tolerance = kCertificateTolerance * (1.0 + 0.5 * bracket);

  const double shrink = 1.0 / (1.0 + theta);
  double sum = 0.0;
  double decay = 1.0;
  for (std::size_t t = 1; t < traj.size(); ++t) {
    const Iterate& it = traj[t];
    sum = shrink * sum + [&] {
      const BregmanTerms terms = bregman_terms(p, cfg, traj, t);
      return terms.max_phi + terms.d_g;
    }();
    const Vector aw = p.A() * (it.w - opt.w);
    double terminal = 0.5 * rho * aw.squaredNorm() +
                      (1.0 + theta) / (2.0 * rho) * (it.alpha - opt.alpha).squaredNorm() +
                      0.5 * rho * (1.0 + theta) * quad_form(Vector(it.v - opt.v), cfg.G());
    terminal += standard ? 0.5 * quad_form(aw, ht)
                         : 0.5 * quad_form(Vector(it.w - opt.w), cfg.H());
    decay *= shrink;
    record(rep, 0.5 * decay * bracket - (sum + terminal), it.t, "bregman sum");
  }
  if (rep.checked == 0) rep.worst_slack = 0.0;
  return rep;
}

CheckReport sublinear_check(const Trajectory& traj, const Problem& p, const SolverConfig& cfg) {
  const KnownOptimum& opt = require_optimum(p, "sublinear_check");
  const Matrix& ht = require_h_tilde(cfg);
  const double rho = cfg.rho();
  const bool standard = cfg.algo() == Algorithm::kStandard;
  const double sigma_ht = extreme_eigenvalues_symmetric(ht).max;

  CheckReport rep;
  if (traj.empty()) return rep;
  const Iterate& init = traj.front();
  const double bracket = (rho + sigma_ht) * (p.A() * (init.w - opt.w)).squaredNorm() +
                         (init.alpha - opt.alpha).squaredNorm() / rho +
                         rho * quad_form(Vector(init.v - opt.v), cfg.G());
  rep.tolerance = kCertificateTolerance * (1.0 + 0.5 * bracket);

  Vector w_sum = Vector::Zero(p.n());
  Vector v_sum = Vector::Zero(p.m());
  double phi_star_sum = 0.0;
  double unweighted_sum = 0.0;
  for (std::size_t t = 1; t < traj.size(); ++t) {
    const double count = static_cast<double>(t);
    w_sum += standard ? traj[t].w : traj[t - 1].w;
    v_sum += traj[t].v;
    const BregmanTerms terms = bregman_terms(p, cfg, traj, t);
    phi_star_sum += terms.d_phi_star;
    unweighted_sum += terms.max_phi + terms.d_g;

    const Vector w_bar = w_sum / count;
    const Vector v_bar = v_sum / count;
    const double lhs = std::max(bregman(p.phi(), opt.w, w_bar), phi_star_sum / count) +
                       bregman(p.g(), opt.v, v_bar);
    record(rep, bracket / (2.0 * count) - lhs, traj[t].t, "averaged sublinear");
    record(rep, 0.5 * bracket - unweighted_sum, traj[t].t, "unweighted sum");
  }
  if (rep.checked == 0) rep.worst_slack = 0.0;
  return rep;
}

AveragedIterates weighted_average_iterates(const Trajectory& traj, double theta) {
  require_nonnegative_theta(theta);
  if (traj.size() < 2) {
    throw PreconditionError("weighted_average_iterates: trajectory has no steps to average");
  }
  // weights (1+theta)^{t-T} avoid overflow; normalisation cancels the shift
  const std::size_t last = traj.size() - 1;
  AveragedIterates out{Vector::Zero(traj[1].v.size()), Vector::Zero(traj[1].alpha_tilde.size())};
  double total = 0.0;
  for (std::size_t t = 1; t <= last; ++t) {
    const double weight = std::pow(1.0 + theta, static_cast<double>(t) - static_cast<double>(last));
    out.v_bar += weight * traj[t].v;
    out.alpha_bar += weight * traj[t].alpha_tilde;
    total += weight;
  }
  out.v_bar /= total;
  out.alpha_bar /= total;
  return out;
}

double initial_distance(const Problem& p, const SolverConfig& cfg, const Iterate& init,
                        double theta) {
  require_nonnegative_theta(theta);
  const KnownOptimum& opt = require_optimum(p, "initial_distance");
  const double sigma_ht = extreme_eigenvalues_symmetric(require_h_tilde(cfg)).max;
  const double rho = cfg.rho();
  return (rho + sigma_ht) * (p.A() * (init.w - opt.w)).squaredNorm() +
         (1.0 + theta) / rho * (init.alpha - opt.alpha).squaredNorm() +
         rho * (1.0 + theta) * quad_form(Vector(init.v - opt.v), cfg.G());
}

SmoothingSchedule smoothing_schedule(double gamma, double eps) {
  if (!(gamma > 0.0) || !(eps > 0.0)) {
    throw ValidationError("smoothing_schedule: gamma and eps must be positive");
  }
  const double product = gamma * eps;
  if (product >= 1.0) {
    std::ostringstream os;
    os << "smoothing_schedule: gamma * eps = " << product << " must be below 1";
    throw DomainError(os.str());
  }
  const double steps = std::ceil(std::log(1.0 / product) / std::sqrt(product));
  return {eps, std::max(1LL, static_cast<long long>(steps))};
}

double estimate_rate(std::span<const double> errors) {
  if (errors.size() < 10) {
    throw PreconditionError("estimate_rate: need at least 10 error values");
  }
  // both ends relative to e_0 so the estimate does not depend on the error scale
  const double low = errors.front() * 1e-10;
  const double high = errors.front() * 1e-2;

  std::vector<double> log_ratios;
  std::vector<std::pair<double, double>> points;  // (t, log e_t)
  for (std::size_t t = 0; t < errors.size(); ++t) {
    const double e = errors[t];
    if (!(e >= low && e <= high)) continue;
    points.emplace_back(static_cast<double>(t), std::log(e));
    if (t + 1 < errors.size() && errors[t + 1] > 0.0 && std::isfinite(errors[t + 1])) {
      log_ratios.push_back(std::log(errors[t + 1] / e));
    }
  }
  if (log_ratios.size() >= 5) {
    // with a long window keep only its later half; a large initial point
    // can leave the transient running past the first two decades
    const std::size_t skip = log_ratios.size() >= 10 ? log_ratios.size() / 2 : 0;
    double sum = 0.0;
    for (std::size_t i = skip; i < log_ratios.size(); ++i) sum += log_ratios[i];
    return std::exp(sum / static_cast<double>(log_ratios.size() - skip));
  }
  if (points.size() < 2) {
    throw DegenerateTrajectoryError(
        "estimate_rate: fewer than two errors fall inside [1e-10 e_0, 1e-2 e_0]");
  }
  double mean_t = 0.0;
  double mean_y = 0.0;
  for (const auto& [t, y] : points) {
    mean_t += t;
    mean_y += y;
  }
  mean_t /= static_cast<double>(points.size());
  mean_y /= static_cast<double>(points.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& [t, y] : points) {
    sxy += (t - mean_t) * (y - mean_y);
    sxx += (t - mean_t) * (t - mean_t);
  }
  return std::exp(sxy / sxx);
}

}  // namespace admmlab
