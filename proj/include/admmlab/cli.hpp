#ifndef ADMMLAB_CLI_HPP
#define ADMMLAB_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "admmlab/certificates.hpp"

namespace admmlab::cli {

/// Unreadable config or unwritable output.
class IoError : public Error {
 public:
  using Error::Error;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitValidation = 2,
  kExitSolver = 3,
  kExitIo = 4,
};

/// G or H as written in a config.
struct MatrixSpec {
  enum class Kind { kDefault, kZero, kScaledIdentity, kRows };
  Kind kind = Kind::kDefault;
  double scale = 0.0;
  Matrix rows;
};

struct RunConfig {
  ProblemSpec problem;
  Algorithm algo = Algorithm::kStandard;
  double rho = 1.0;
  int iters = 200;
  double inner_tol = 1e-12;
  MatrixSpec G;
  MatrixSpec H;  // default: zero for admm, 2 * smoothness(phi) * I for linadmm
  std::optional<Vector> init_w;
  std::optional<Vector> init_v;
  std::optional<Vector> init_alpha;
};

struct Overrides {
  std::optional<double> rho;
  std::optional<int> iters;
  std::optional<Algorithm> algo;
};

/// Parses config text; malformed JSON is a ValidationError carrying line and column.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
void apply_overrides(RunConfig& cfg, const Overrides& o);
Algorithm parse_algorithm(const std::string& name, const std::string& path);

/// Problem, solver settings and starting point built from a config.
struct Resolved {
  Problem problem;
  SolverConfig solver;
  Iterate init;
};

Resolved resolve(const RunConfig& cfg);

/// Fully explicit config (defaults filled in); parse_config(echo) reruns identically.
nlohmann::json config_echo(const RunConfig& cfg, const Resolved& r);

/// "%.17g", or an empty field for a missing value.
std::string format_real(std::optional<double> x);

/// Trajectory CSV with header t,err,feas,gap,bregman_phi,bregman_g,r,r_star,delta.
/// Columns needing an optimum, H~ or a certified theta are left blank when
/// those are unavailable.
std::string trajectory_csv(const Problem& p, const SolverConfig& cfg, const Trajectory& traj);

void write_file(const std::string& path, const std::string& contents);

struct SolveOutcome {
  Trajectory trajectory;
  std::string csv;
  nlohmann::json report;
};

/// Runs a config end to end and assembles the report (config echo, rate
/// estimate, theta and rho*, final error and gap, certificate verdict, wall time).
SolveOutcome solve(const RunConfig& cfg);

int cmd_solve(const std::string& config_path, const Overrides& o, const std::string& out_path,
              std::ostream& out);

struct FigureRun {
  Algorithm algo = Algorithm::kStandard;
  double multiplier = 1.0;  // rho = multiplier * sqrt(lambda/gamma)
  double rho = 0.0;
  double h = 0.0;  // linearized preconditioner; 0 for standard ADMM
  std::vector<double> errors;
  std::optional<double> rate;
  double reported_rate = 0.0;
};

inline constexpr double kFigureRateTolerance = 0.05;

/// The six runs behind figure 1 or 2, executed in parallel (ADMM_LAB_THREADS caps
/// the worker count). `init_scale` multiplies the (w, v) starting point.
std::vector<FigureRun> run_figure(int which, double init_scale = 1.0);

int cmd_figures(int which, const std::string& out_dir, double init_scale, std::ostream& out);

struct CertifyOptions {
  std::optional<double> s;      // fixed slack; default picks the best grid value
  std::optional<double> theta;  // fixed theta; default is the certified value
};

struct CertifyOutcome {
  double theta_auto = 0.0;
  double theta_used = 0.0;
  double s = 0.0;
  bool theta_exceeds_bound = false;
  CheckReport certificates;
  CheckReport corollary;
  std::optional<CheckReport> sublinear;  // only when theta = 0
  bool passed() const;
};

CertifyOutcome certify(const RunConfig& cfg, const CertifyOptions& opts);

int cmd_certify(const std::string& config_path, const CertifyOptions& opts, std::ostream& out,
                std::ostream& err);

struct RhoGrid {
  double lo;
  double hi;
  int n;
};

/// "lo:hi:n".
RhoGrid parse_rho_grid(const std::string& text);

int cmd_lowerbound(double gamma, double lambda, const std::optional<RhoGrid>& grid,
                   std::ostream& out);

/// Maps a thrown error onto the documented exit codes.
int exit_code_for(const std::exception& e);

}  // namespace admmlab::cli

#endif  // ADMMLAB_CLI_HPP
