#ifndef ADMMLAB_CERTIFICATES_HPP
#define ADMMLAB_CERTIFICATES_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "admmlab/solvers.hpp"

namespace admmlab {

/// Spectral quantities entering the linear-rate certificates.
struct SpectralBounds {
  double sigma_A = 0.0;        // smallest eigenvalue of (AA^T)^{1/2}
  double sigma_B = 0.0;        // largest singular value of B
  double sigma_G = 0.0;        // largest eigenvalue of G
  double sigma_H = 0.0;        // largest eigenvalue of H
  double sigma_H_min = 0.0;    // smallest eigenvalue of H
  double sigma_H_tilde = 0.0;  // largest eigenvalue of H~
};

SpectralBounds spectral_bounds(const Problem& p, const SolverConfig& cfg);

/// Largest theta allowed for standard ADMM at slack s:
///   min( gamma rho sA^2 / (gamma sH + 1),  s rho / sHt,
///        (1-s) lambda / ((rho + sHt) sB^2 + (1-s) rho sG) ).
/// A term whose denominator vanishes imposes no constraint.
double theta_admm(const SpectralBounds& b, double gamma, double lambda, double rho, double s);

/// Linearized counterpart; the first term becomes rho sA^2 / sH_min and
/// sH_min >= 1/gamma is required (PreconditionError otherwise).
double theta_linadmm(const SpectralBounds& b, double gamma, double lambda, double rho, double s);

struct RateCertificate {
  double theta = 0.0;
  double s = 0.0;
  double rho = 0.0;
  Algorithm algo = Algorithm::kStandard;
};

/// Picks s (0 when sHt = 0, else the best of 0.05, 0.10, ..., 0.95) and the
/// matching theta.
RateCertificate certify_rate(const SpectralBounds& b, Algorithm algo, double gamma, double lambda,
                             double rho);
RateCertificate certify_rate(const Problem& p, const SolverConfig& cfg);

struct RhoTheta {
  double rho;
  double theta;
};

/// Best (rho, theta) for standard ADMM with H = 0: the rho that equalises
/// gamma rho sA^2 and lambda / (rho (sB^2 + sG)), i.e.
///   rho = sqrt(lambda/gamma) / (sA sqrt(sB^2 + sG)),
///   theta = sA sqrt(gamma lambda / (sB^2 + sG)).
RhoTheta optimal_rho_theta_admm(double sigma_A, double sigma_B, double sigma_G, double lambda,
                                double gamma);

/// Comparison point (alpha, v) for the certificate quantities; the matching
/// w is grad phi*(-A^T alpha).
struct Reference {
  Vector alpha;
  Vector v;
};

Reference optimum_reference(const Problem& p);

struct CertificateRow {
  int t = 0;
  double r = 0.0;       // zero at t = 0
  double r_star = 0.0;  // zero at t = 0
  double delta = 0.0;
};

/// r_t, r*_t and delta_t for every iterate against `ref`.
std::vector<CertificateRow> certificate_rows(const Trajectory& traj, const Problem& p,
                                             const SolverConfig& cfg, const Reference& ref,
                                             double theta);

/// Outcome of an inequality sweep. `worst_slack` is the minimum of rhs - lhs
/// over every checked inequality; a check fails when the slack drops below
/// -tolerance.
struct CheckReport {
  bool passed = true;
  double worst_slack = kInfinity;
  double tolerance = 0.0;
  std::optional<int> first_violation;
  std::string worst_check;
  int checked = 0;
};

/// Per-step r_t <= delta_{t-1}/(1+theta) - delta_t (and the same for r*_t),
/// plus both weighted sums
///   sum_{t<=T} (1+theta)^{t-T} r_t <= (1+theta)^{-T} delta_0 - delta_T.
/// Tolerance is 1e-9 (1 + |delta_0|).
CheckReport check_certificates(const std::vector<CertificateRow>& rows, double theta);

/// Bregman bound against the known optimum: weighted sum of
/// max(D_phi, D_phi*) + D_g plus the terminal norms, versus the decayed initial
/// bracket, for every T. Works for theta = 0 as the unweighted bound.
CheckReport corollary_bregman_check(const Trajectory& traj, const Problem& p,
                                    const SolverConfig& cfg, double theta);

/// theta = 0 bounds on averaged iterates:
///   max[D_phi(w*, w_bar), mean D_phi*] + D_g(v*, v_bar)
///     <= 1/(2T) [(rho + sHt)||A(w0 - w*)||^2 + ||alpha0 - alpha*||^2 / rho + rho ||v0 - v*||_G^2].
CheckReport sublinear_check(const Trajectory& traj, const Problem& p, const SolverConfig& cfg);

struct AveragedIterates {
  Vector v_bar;
  Vector alpha_bar;  // built from alpha~
};

/// (1+theta)^t weighted averages over t = 1..T.
AveragedIterates weighted_average_iterates(const Trajectory& traj, double theta);

/// (rho + sHt)||A(w0-w*)||^2 + (1+theta)/rho ||alpha0-alpha*||^2 + rho(1+theta)||v0-v*||_G^2.
double initial_distance(const Problem& p, const SolverConfig& cfg, const Iterate& init,
                        double theta);

struct SmoothingSchedule {
  double lambda;
  long long iterations;
};

/// For a merely convex g: add lambda = eps and run ceil(ln(1/(gamma eps)) / sqrt(gamma eps)) steps.
SmoothingSchedule smoothing_schedule(double gamma, double eps);

/// Asymptotic contraction factor of an error sequence.
///
/// Uses the geometric mean of e_{t+1}/e_t over entries with
/// e_t in [1e-10 e_0, 1e-2 e_0] (only the later half of them once ten or
/// more qualify); falls back to a least-squares slope of log e_t
/// on the same window when fewer than five ratios qualify.
double estimate_rate(std::span<const double> errors);

}  // namespace admmlab

#endif  // ADMMLAB_CERTIFICATES_HPP
