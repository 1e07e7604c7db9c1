#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <thread>

#include "admmlab/cli.hpp"
#include "admmlab/lowerbound.hpp"

namespace admmlab::cli {

namespace {

using nlohmann::json;

struct FigureSetup {
  double gamma;
  double lambda;
  double mu;
  std::array<double, 3> admm_rates;
  std::array<double, 3> linadmm_rates;
};

constexpr std::array<double, 3> kRhoMultipliers{0.2, 1.0, 5.0};

FigureSetup figure_setup(int which) {
  if (which == 1) return {0.1, 0.2, 0.2, {0.51, 0.21, 0.41}, {0.51, 0.53, 0.64}};
  if (which == 2) return {1.0, 1.0, 1.0, {0.78, 0.49, 0.64}, {0.82, 0.69, 0.82}};
  throw ValidationError("--which must be 1 or 2");
}

int figure_iterations(int which, Algorithm algo) {
  return which == 1 && algo == Algorithm::kLinearized ? 800 : 400;
}

unsigned worker_count(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ADMM_LAB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::min<unsigned>(n, static_cast<unsigned>(jobs));
}

void run_figure_job(const FigureSetup& fs, int which, double init_scale, FigureRun& job) {
  const Problem p = make_problem(spec::Paper1d{fs.gamma, fs.lambda, fs.mu});
  SolverOptions opts;
  opts.algo = job.algo;
  opts.rho = job.rho;
  opts.max_iters = figure_iterations(which, job.algo);
  if (job.algo == Algorithm::kLinearized) opts.H = Matrix::Constant(1, 1, job.h);
  const SolverConfig cfg(p, opts);
  const Iterate init = make_initial_point(p, Vector::Constant(1, init_scale),
                                          Vector::Constant(1, init_scale), Vector::Zero(1));
  job.errors.clear();
  job.errors.push_back(error_norm(p, init.w, init.v));
  run(p, cfg, init, [&](const Iterate& it) { job.errors.push_back(error_norm(p, it.w, it.v)); });
  try {
    job.rate = estimate_rate(job.errors);
  } catch (const DegenerateTrajectoryError&) {
    job.rate.reset();
  } catch (const PreconditionError&) {
    job.rate.reset();
  }
}

std::string multiplier_tag(double m) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%g", m);
  return buf;
}

bool within_tolerance(const FigureRun& r) {
  return r.rate && std::abs(*r.rate - r.reported_rate) <= kFigureRateTolerance;
}

json report_json(const CheckReport& r) {
  return {{"passed", r.passed},
          {"worst_slack", r.checked > 0 ? json(r.worst_slack) : json(nullptr)},
          {"worst_check", r.worst_check},
          {"tolerance", r.tolerance},
          {"checked", r.checked},
          {"first_violation", r.first_violation ? json(*r.first_violation) : json(nullptr)}};
}

}  // namespace

std::vector<FigureRun> run_figure(int which, double init_scale) {
  const FigureSetup fs = figure_setup(which);
  if (!(init_scale > 0.0) || !std::isfinite(init_scale)) {
    throw ValidationError("--init-scale must be positive");
  }
  const double base = std::sqrt(fs.lambda / fs.gamma);
  std::vector<FigureRun> jobs;
  for (Algorithm algo : {Algorithm::kStandard, Algorithm::kLinearized}) {
    for (std::size_t k = 0; k < kRhoMultipliers.size(); ++k) {
      FigureRun job;
      job.algo = algo;
      job.multiplier = kRhoMultipliers[k];
      job.rho = kRhoMultipliers[k] * base;
      job.h = algo == Algorithm::kLinearized ? 2.0 * (fs.mu + 1.0 / fs.gamma) : 0.0;
      job.reported_rate = algo == Algorithm::kStandard ? fs.admm_rates[k] : fs.linadmm_rates[k];
      jobs.push_back(job);
    }
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(jobs.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        run_figure_job(fs, which, init_scale, jobs[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned workers = worker_count(jobs.size());
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return jobs;
}

int cmd_figures(int which, const std::string& out_dir, double init_scale, std::ostream& out) {
  const std::vector<FigureRun> runs = run_figure(which, init_scale);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

  json rates = json::array();
  bool all_match = true;
  for (const FigureRun& r : runs) {
    const std::string name = "fig" + std::to_string(which) + "_" + std::string(to_string(r.algo)) +
                             "_rho" + multiplier_tag(r.multiplier) + ".csv";
    std::string csv = "t,err\n";
    for (std::size_t t = 0; t < r.errors.size(); ++t) {
      csv += std::to_string(t) + "," + format_real(r.errors[t]) + "\n";
    }
    write_file((std::filesystem::path(out_dir) / name).string(), csv);
    const bool ok = within_tolerance(r);
    all_match = all_match && ok;
    rates.push_back({{"algo", std::string(to_string(r.algo))},
                     {"rho_multiplier", r.multiplier},
                     {"rho", r.rho},
                     {"h", r.algo == Algorithm::kLinearized ? json(r.h) : json(nullptr)},
                     {"iterations", static_cast<int>(r.errors.size()) - 1},
                     {"estimated_rate", r.rate ? json(*r.rate) : json(nullptr)},
                     {"reported_rate", r.reported_rate},
                     {"within_tolerance", ok},
                     {"csv", name}});
  }
  json summary = {{"figure", which}, {"tolerance", kFigureRateTolerance}, {"runs", rates}};
  write_file((std::filesystem::path(out_dir) / "rates.json").string(), summary.dump(2) + "\n");

  char line[160];
  std::snprintf(line, sizeof line, "%-8s %6s %10s %10s %10s %8s\n", "algo", "x", "rho", "rate",
                "reported", "match");
  out << line;
  for (const FigureRun& r : runs) {
    char rate[32] = "n/a";
    if (r.rate) std::snprintf(rate, sizeof rate, "%.4f", *r.rate);
    std::snprintf(line, sizeof line, "%-8s %6g %10.4f %10s %10.2f %8s\n",
                  std::string(to_string(r.algo)).c_str(), r.multiplier, r.rho, rate,
                  r.reported_rate, within_tolerance(r) ? "yes" : "NO");
    out << line;
  }
  return all_match ? kExitOk : kExitCheckFailed;
}

bool CertifyOutcome::passed() const {
  return certificates.passed && corollary.passed && (!sublinear || sublinear->passed);
}

CertifyOutcome certify(const RunConfig& cfg, const CertifyOptions& opts) {
  const Resolved res = resolve(cfg);
  const Problem& p = res.problem;
  const Reference ref = optimum_reference(p);
  CertifyOutcome out;
  if (opts.s) {
    const SpectralBounds b = spectral_bounds(p, res.solver);
    out.s = *opts.s;
    out.theta_auto = res.solver.algo() == Algorithm::kStandard
                         ? theta_admm(b, p.phi_gamma(), p.g_lambda(), res.solver.rho(), out.s)
                         : theta_linadmm(b, p.phi_gamma(), p.g_lambda(), res.solver.rho(), out.s);
  } else {
    const RateCertificate c = certify_rate(p, res.solver);
    out.s = c.s;
    out.theta_auto = c.theta;
  }
  out.theta_used = opts.theta.value_or(out.theta_auto);
  out.theta_exceeds_bound = out.theta_used > out.theta_auto * (1.0 + 1e-12);

  const Trajectory traj = run(p, res.solver, res.init);
  out.certificates = check_certificates(
      certificate_rows(traj, p, res.solver, ref, out.theta_used), out.theta_used);
  out.corollary = corollary_bregman_check(traj, p, res.solver, out.theta_used);
  if (out.theta_used == 0.0) out.sublinear = sublinear_check(traj, p, res.solver);
  return out;
}

int cmd_certify(const std::string& config_path, const CertifyOptions& opts, std::ostream& out,
                std::ostream& err) {
  const RunConfig cfg = load_config(config_path);
  const CertifyOutcome c = certify(cfg, opts);
  if (c.theta_exceeds_bound) {
    err << "warning: theta " << c.theta_used << " exceeds the certified bound " << c.theta_auto
        << "; the inequalities are not guaranteed\n";
  }
  json report = {{"algo", std::string(to_string(cfg.algo))},
                 {"rho", cfg.rho},
                 {"s", c.s},
                 {"theta_auto", c.theta_auto},
                 {"theta", c.theta_used},
                 {"certificates", report_json(c.certificates)},
                 {"corollary", report_json(c.corollary)},
                 {"sublinear", c.sublinear ? report_json(*c.sublinear) : json(nullptr)},
                 {"passed", c.passed()}};
  out << report.dump(2) << '\n';
  return c.passed() ? kExitOk : kExitCheckFailed;
}

RhoGrid parse_rho_grid(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? first : text.find(':', first + 1);
  if (second == std::string::npos) throw ValidationError("--rho-grid: expected lo:hi:n");
  RhoGrid g{};
  try {
    std::size_t used = 0;
    g.lo = std::stod(text.substr(0, first), &used);
    if (used != first) throw std::invalid_argument("lo");
    const std::string hi = text.substr(first + 1, second - first - 1);
    g.hi = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument("hi");
    const std::string n = text.substr(second + 1);
    g.n = std::stoi(n, &used);
    if (used != n.size()) throw std::invalid_argument("n");
  } catch (const std::logic_error&) {
    throw ValidationError("--rho-grid: expected lo:hi:n, got \"" + text + "\"");
  }
  if (!(g.lo > 0.0) || !(g.hi >= g.lo) || g.n < 1) {
    throw ValidationError("--rho-grid: need 0 < lo <= hi and n >= 1");
  }
  return g;
}

int cmd_lowerbound(double gamma, double lambda, const std::optional<RhoGrid>& grid,
                   std::ostream& out) {
  const OptimalRate<double> best = admm_optimal_rate(lambda, gamma);
  const RhoGrid g = grid.value_or(RhoGrid{best.rho / 100.0, best.rho * 100.0, 21});
  Vector diag(2);
  diag << lambda, 1.0 / gamma;
  const double h = 2.0 / gamma;

  char line[160];
  std::snprintf(line, sizeof line, "%-14s %-14s %-14s %-14s\n", "rho", "worst_case", "block_radius",
                "linadmm_bound");
  out << line;
  for (double rho : log_grid(g.lo, g.hi, g.n)) {
    std::snprintf(line, sizeof line, "%-14.6g %-14.10f %-14.10f %-14.10f\n", rho,
                  admm_worstcase_rate(rho, lambda, gamma), admm_instance_radius(diag, diag, rho),
                  linadmm_rate_lowerbound(rho, lambda, h, lambda));
    out << line;
  }
  std::snprintf(line, sizeof line, "optimal rho = %.10g, rate = %.10f\n", best.rho, best.rate);
  out << line;
  return kExitOk;
}

}  // namespace admmlab::cli
