// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "admmlab/certificates.hpp"
#include "admmlab/cli.hpp"
#include "admmlab/lowerbound.hpp"

using namespace admmlab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Problem quadratic_instance() {
  return make_problem(spec::QuadraticDiag{vec({0.2, 10.0}), vec({0.2, 10.0})});
}

Problem paper_instance() { return make_problem(spec::Paper1d{0.1, 0.2, 0.2}); }

SolverConfig make_config(const Problem& p, Algorithm algo, double rho, int iters) {
  SolverOptions o;
  o.algo = algo;
  o.rho = rho;
  o.max_iters = iters;
  o.stop_at_floor = false;
  if (algo == Algorithm::kLinearized) o.H = 2.0 * p.phi().smoothness() * Matrix::Identity(p.n(), p.n());
  return SolverConfig(p, o);
}

double rho_star(const Problem& p) {
  const SolverConfig probe = make_config(p, Algorithm::kStandard, 1.0, 0);
  const SpectralBounds b = spectral_bounds(p, probe);
  return optimal_rho_theta_admm(b.sigma_A, b.sigma_B, b.sigma_G, p.g_lambda(), p.phi_gamma()).rho;
}

Outcome figure(int which) {
  const auto start = std::chrono::steady_clock::now();
  const auto runs = cli::run_figure(which);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = secs < 1.0;
  std::ostringstream d;
  for (const auto& r : runs) {
    const bool hit = r.rate && std::abs(*r.rate - r.reported_rate) <= cli::kFigureRateTolerance;
    ok = ok && hit;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s x%g %.3f/%.2f%s; ", std::string(to_string(r.algo)).c_str(), r.multiplier,
                  r.rate ? *r.rate : std::nan(""), r.reported_rate, hit ? "" : "!");
    d << buf;
  }
  d << "time " << secs << " s";
  return {ok, d.str()};
}

Outcome lower_bound_consistency() {
  double worst = 0.0;
  for (auto [lambda, gamma] : std::vector<std::pair<double, double>>{{1, 1}, {0.2, 0.1}, {0.01, 1}}) {
    const Vector d = vec({lambda, 1.0 / gamma});
    for (double rho : log_grid(1e-3, 1e3, 61)) {
      worst = std::max(worst, std::abs(admm_instance_radius(d, d, rho) - admm_worstcase_rate(rho, lambda, gamma)));
    }
    const auto opt = admm_optimal_rate(lambda, gamma);
    const double closed = (1.0 + gamma * lambda) / std::pow(1.0 + std::sqrt(gamma * lambda), 2);
    worst = std::max(worst, std::abs(admm_worstcase_rate(opt.rho, lambda, gamma) - closed));
  }
  const auto unit = admm_optimal_rate(1.0, 1.0);
  const bool exact = unit.rho == 1.0 && unit.rate == 0.5;
  std::ostringstream d;
  d << "max deviation " << worst << ", optimal(1,1) = (" << unit.rho << ", " << unit.rate << ")";
  return {worst <= 1e-12 && exact, d.str()};
}

Outcome closed_form_oracle() {
  const double lambda = 0.2, gamma = 0.1, rho = std::sqrt(2.0), h = 2.0 / gamma;
  const Problem p = make_problem(spec::QuadraticDiag{vec({lambda, 1.0 / gamma}), vec({lambda, 1.0 / gamma})});
  double worst = 0.0;
  for (Algorithm algo : {Algorithm::kStandard, Algorithm::kLinearized}) {
    SolverOptions o;
    o.algo = algo;
    o.rho = rho;
    if (algo == Algorithm::kLinearized) o.H = h * Matrix::Identity(2, 2);
    const SolverConfig cfg(p, o);
    Iterate it = default_initial_point(p);
    std::vector<Eigen::Vector2d> state(2, Eigen::Vector2d(1.0, 0.0));
    for (int k = 0; k < 50; ++k) {
      it = step(p, cfg, it);
      for (int i = 0; i < 2; ++i) {
        const double q = p.phi().quadratic_curvature()->coeff(i);
        const auto block = algo == Algorithm::kStandard ? admm_block(q, q, rho) : linadmm_block(q, q, h, rho);
        state[i] = block.M * state[i];
        worst = std::max({worst, std::abs(it.w(i) - state[i](0)), std::abs(it.alpha(i) - state[i](1))});
      }
    }
  }
  std::ostringstream d;
  d << "max coordinate deviation " << worst;
  return {worst <= 1e-12, d.str()};
}

Outcome certificate_suite() {
  bool ok = true;
  double worst = kInfinity;
  int cases = 0;
  for (const Problem& p : {quadratic_instance(), paper_instance()}) {
    const double rs = rho_star(p);
    for (Algorithm algo : {Algorithm::kStandard, Algorithm::kLinearized}) {
      for (double scale : {0.3, 1.0, 3.0}) {
        const SolverConfig cfg = make_config(p, algo, scale * rs, 500);
        const Trajectory traj = run(p, cfg, default_initial_point(p));
        const double theta = certify_rate(p, cfg).theta;
        const auto rows = certificate_rows(traj, p, cfg, optimum_reference(p), theta);
        const CheckReport steps = check_certificates(rows, theta);
        const CheckReport cor = corollary_bregman_check(traj, p, cfg, theta);
        ok = ok && steps.passed && cor.passed && theta > 0.0;
        worst = std::min({worst, steps.worst_slack, cor.worst_slack});
        ++cases;
      }
    }
  }
  std::ostringstream d;
  d << cases << " runs, worst slack " << worst;
  return {ok, d.str()};
}

Outcome corollary_rate() {
  const Problem p = quadratic_instance();
  const SolverConfig cfg = make_config(p, Algorithm::kStandard, rho_star(p), 200);
  const Trajectory traj = run(p, cfg, default_initial_point(p));
  const double theta = certify_rate(p, cfg).theta;
  const auto& opt = *p.known_optimum();
  const double rho = cfg.rho();
  auto terminal = [&](const Iterate& it) {
    return 0.5 * rho * (p.A() * (it.w - opt.w)).squaredNorm() +
           (1.0 + theta) / (2.0 * rho) * (it.alpha - opt.alpha).squaredNorm();
  };
  const double delta0 = certificate_rows(traj, p, cfg, optimum_reference(p), theta).front().delta;
  double worst_ratio = 0.0;
  bool ok = true;
  for (const Iterate& it : traj) {
    const double bound = std::pow(1.0 + theta, -it.t) * delta0;
    ok = ok && terminal(it) <= bound;
    if (bound > 0.0) worst_ratio = std::max(worst_ratio, terminal(it) / bound);
  }
  std::ostringstream d;
  d << "theta " << theta << ", max observed/bound " << worst_ratio;
  return {ok, d.str()};
}

Outcome empirical_vs_spectral() {
  const Problem p = quadratic_instance();
  const double rho = rho_star(p);
  SolverOptions o;
  o.rho = rho;
  o.max_iters = 3000;
  const Trajectory traj = run(p, SolverConfig(p, o), default_initial_point(p));
  std::vector<double> e;
  for (const auto& it : traj) e.push_back(error_norm(p, it.w, it.v));
  const Vector q = *p.phi().quadratic_curvature();
  const Vector l = *p.g().quadratic_curvature();
  const double est = estimate_rate(e);
  const double radius = admm_instance_radius(q, l, rho);
  std::ostringstream d;
  d << "estimate " << est << ", spectral " << radius;
  return {std::abs(est - radius) <= 1e-3, d.str()};
}

Outcome function_properties() {
  std::mt19937 rng(20261015);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<FunctionPtr> fs = {make_diagonal_quadratic(vec({0.2, 10.0})), make_arctan_smooth(0.1, 0.2),
                                 make_arctan_smooth(1.0, 1.0), make_quartic_strong(0.2),
                                 make_tikhonov(make_arctan_smooth(1.0, 0.0), 0.05)};
  double fd_worst = 0.0, fy_worst = 0.0, breg_worst = 0.0;
  for (const auto& f : fs) {
    const Eigen::Index n = f->dimension();
    auto draw = [&] {
      Vector x(n);
      for (Eigen::Index i = 0; i < n; ++i) x(i) = u(rng);
      return x;
    };
    for (int k = 0; k < 100; ++k) {
      const Vector x = draw();
      const Vector g = f->gradient(x);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double h = 1e-5 * std::max(1.0, std::abs(x(i)));
        Vector xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        const double fd = (f->value(xp) - f->value(xm)) / (2.0 * h);
        fd_worst = std::max(fd_worst, std::abs(fd - g(i)) / std::max(1.0, std::abs(g(i))));
      }
      const double fy = f->value(x) + conjugate_value(*f, g) - x.dot(g);
      fy_worst = std::max(fy_worst, std::abs(fy) / (1.0 + std::abs(x.dot(g))));

      const Vector y = draw();
      const double dist = (y - x).squaredNorm();
      const double d = bregman(*f, x, y);
      const double lo = 0.5 * f->strong_convexity() * dist;
      const double hi = 0.5 * f->smoothness() * dist;
      const double scale = 1e-12 * (1.0 + std::abs(d));
      breg_worst = std::max({breg_worst, lo - d - scale, d - hi - scale});
    }
  }
  double gap_worst = kInfinity;
  for (const Problem& p : {quadratic_instance(), paper_instance(), make_problem(spec::Paper1d{1.0, 1.0, 1.0})}) {
    std::normal_distribution<double> n(0.0, 2.0);
    for (int k = 0; k < 100; ++k) {
      Vector v(p.m()), a(p.p());
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = n(rng);
      for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = n(rng);
      gap_worst = std::min(gap_worst, duality_gap(p, v, a));
    }
  }
  std::ostringstream d;
  d << "fd " << fd_worst << ", fenchel-young " << fy_worst << ", bregman excess " << breg_worst
    << ", min gap " << gap_worst;
  return {fd_worst <= 1e-6 && fy_worst <= 1e-8 && breg_worst <= 0.0 && gap_worst >= -1e-10, d.str()};
}

Outcome sublinear() {
  bool ok = true;
  double worst = kInfinity;
  for (const Problem& p : {quadratic_instance(), paper_instance()}) {
    for (Algorithm algo : {Algorithm::kStandard, Algorithm::kLinearized}) {
      const SolverConfig cfg = make_config(p, algo, rho_star(p), 500);
      const Trajectory traj = run(p, cfg, default_initial_point(p));
      const CheckReport avg = sublinear_check(traj, p, cfg);
      const CheckReport sum = corollary_bregman_check(traj, p, cfg, 0.0);
      ok = ok && avg.passed && sum.passed;
      worst = std::min({worst, avg.worst_slack, sum.worst_slack});
    }
  }
  std::ostringstream d;
  d << "worst slack " << worst;
  return {ok, d.str()};
}

Outcome determinism() {
  const cli::RunConfig cfg = cli::parse_config_text(R"({
    "problem": {"kind": "paper1d", "gamma": 0.1, "lambda": 0.2, "mu": 0.2},
    "solver": {"algo": "linadmm", "rho": 1.4142135623730951, "iters": 300}})");
  const std::string a = cli::solve(cfg).csv;
  const std::string b = cli::solve(cfg).csv;
  return {a == b && !a.empty(), std::to_string(a.size()) + " bytes"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"figure 1 rates", [] { return figure(1); }},
      {"figure 2 rates", [] { return figure(2); }},
      {"lower-bound consistency", lower_bound_consistency},
      {"closed-form recursion", closed_form_oracle},
      {"certificate suite", certificate_suite},
      {"corollary rate bound", corollary_rate},
      {"empirical vs spectral", empirical_vs_spectral},
      {"function properties", function_properties},
      {"sublinear theta=0", sublinear},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %-24s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
