#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "admmlab/cli.hpp"

namespace admmlab::cli {

namespace {

using nlohmann::json;

struct CertificateData {
  std::optional<RateCertificate> cert;
  std::vector<CertificateRow> rows;  // empty when no certificate applies
};

CertificateData certificate_data(const Problem& p, const SolverConfig& cfg,
                                 const Trajectory& traj) {
  CertificateData out;
  try {
    out.cert = certify_rate(p, cfg);
  } catch (const PreconditionError&) {
    return out;
  } catch (const ValidationError&) {
    return out;
  }
  if (!p.known_optimum() || !cfg.H_tilde()) return out;
  try {
    out.rows = certificate_rows(traj, p, cfg, optimum_reference(p), out.cert->theta);
  } catch (const DomainError&) {
    out.rows.clear();
  }
  return out;
}

std::optional<double> gap_at(const Problem& p, const Iterate& it) {
  try {
    return duality_gap(p, it.v, it.alpha_tilde);
  } catch (const DomainError&) {
    return std::nullopt;
  } catch (const SingularityError&) {
    return std::nullopt;
  }
}

json optional_json(std::optional<double> x) { return x ? json(*x) : json(nullptr); }

}  // namespace

std::string format_real(std::optional<double> x) {
  if (!x) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *x);
  return buf;
}

std::string trajectory_csv(const Problem& p, const SolverConfig& cfg, const Trajectory& traj) {
  const CertificateData certs = certificate_data(p, cfg, traj);
  const auto& opt = p.known_optimum();
  std::string out = "t,err,feas,gap,bregman_phi,bregman_g,r,r_star,delta\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Iterate& it = traj[k];
    std::optional<double> err, bphi, bg, r, r_star, delta;
    if (opt) {
      err = error_norm(p, it.w, it.v);
      bphi = bregman(p.phi(), opt->w, it.w);
      bg = bregman(p.g(), opt->v, it.v);
    }
    if (!certs.rows.empty()) {
      delta = certs.rows[k].delta;
      if (k > 0) {
        r = certs.rows[k].r;
        r_star = certs.rows[k].r_star;
      }
    }
    const double feas = (p.A() * it.w - p.B() * it.v - p.c()).norm();
    out += std::to_string(it.t);
    for (const auto& field : {err, std::optional<double>(feas), gap_at(p, it), bphi, bg, r, r_star,
                              delta}) {
      out += ',';
      out += format_real(field);
    }
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << contents;
  f.close();
  if (!f) throw IoError("failed writing " + path);
}

SolveOutcome solve(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const Resolved res = resolve(cfg);
  const Problem& p = res.problem;
  SolveOutcome out;
  out.trajectory = run(p, res.solver, res.init);
  out.csv = trajectory_csv(p, res.solver, out.trajectory);

  const Iterate& last = out.trajectory.back();
  std::optional<double> rate, final_error, rho_star;
  if (p.known_optimum()) {
    std::vector<double> errors;
    for (const Iterate& it : out.trajectory) errors.push_back(error_norm(p, it.w, it.v));
    final_error = errors.back();
    try {
      rate = estimate_rate(errors);
    } catch (const PreconditionError&) {
    } catch (const DegenerateTrajectoryError&) {
    }
  }
  json certificate = nullptr;
  const CertificateData certs = certificate_data(p, res.solver, out.trajectory);
  if (!certs.rows.empty()) {
    const CheckReport rep = check_certificates(certs.rows, certs.cert->theta);
    const CheckReport cor = corollary_bregman_check(out.trajectory, p, res.solver, certs.cert->theta);
    certificate = {{"passed", rep.passed && cor.passed},
                   {"worst_slack", std::min(rep.worst_slack, cor.worst_slack)},
                   {"first_violation", rep.first_violation ? json(*rep.first_violation) : json(nullptr)}};
  }
  try {
    const SpectralBounds b = spectral_bounds(p, res.solver);
    rho_star = optimal_rho_theta_admm(b.sigma_A, b.sigma_B, b.sigma_G, p.g_lambda(), p.phi_gamma()).rho;
  } catch (const Error&) {
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  out.report = {
      {"config", config_echo(cfg, res)},
      {"iterations", static_cast<int>(out.trajectory.size()) - 1},
      {"estimated_rate", optional_json(rate)},
      {"theta", certs.cert ? json(certs.cert->theta) : json(nullptr)},
      {"s", certs.cert ? json(certs.cert->s) : json(nullptr)},
      {"rho_star", optional_json(rho_star)},
      {"final_error", optional_json(final_error)},
      {"final_gap", optional_json(gap_at(p, last))},
      {"final_feasibility", (p.A() * last.w - p.B() * last.v - p.c()).norm()},
      {"certificate", certificate},
      {"wall_time_s", wall},
  };
  return out;
}

int cmd_solve(const std::string& config_path, const Overrides& o, const std::string& out_path,
              std::ostream& out) {
  RunConfig cfg = load_config(config_path);
  apply_overrides(cfg, o);
  const SolveOutcome res = solve(cfg);
  write_file(out_path, res.csv);
  out << res.report.dump(2) << '\n';
  return kExitOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const PreconditionError*>(&e)) {
    return kExitValidation;
  }
  return kExitSolver;
}

}  // namespace admmlab::cli
