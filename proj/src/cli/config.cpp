#include <cmath>
#include <fstream>
#include <sstream>

#include "admmlab/cli.hpp"

namespace admmlab::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail(join(path, key), "unknown field");
  }
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

double number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail(join(path, key), "missing required field");
  return number_at(obj.at(key), join(path, key));
}

Vector vector_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of numbers");
  Vector out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = number_at(j[i], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

Vector vector(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail(join(path, key), "missing required field");
  return vector_at(obj.at(key), join(path, key));
}

Matrix matrix_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix out(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    const Vector row = vector_at(j[r], row_path);
    if (static_cast<std::size_t>(row.size()) != cols) {
      fail(row_path, "has " + std::to_string(row.size()) + " entries, expected " +
                         std::to_string(cols));
    }
    out.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return out;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

spec::FunctionSpec function_spec(const json& j, const std::string& path) {
  require_object(j, path);
  if (!j.contains("type") || !j.at("type").is_string()) {
    fail(join(path, "type"), "expected \"quadratic\", \"arctan\" or \"quartic\"");
  }
  const std::string type = j.at("type").get<std::string>();
  spec::FunctionSpec f;
  if (type == "quadratic") {
    reject_unknown(j, path, {"type", "diag", "tikhonov"});
    f.kind = spec::Quadratic{vector(j, "diag", path)};
  } else if (type == "arctan") {
    reject_unknown(j, path, {"type", "gamma", "mu", "tikhonov"});
    f.kind = spec::Arctan{number(j, "gamma", path), j.contains("mu") ? number(j, "mu", path) : 0.0};
  } else if (type == "quartic") {
    reject_unknown(j, path, {"type", "lambda", "tikhonov"});
    f.kind = spec::Quartic{number(j, "lambda", path)};
  } else {
    fail(join(path, "type"), "unknown function type \"" + type + "\"");
  }
  if (j.contains("tikhonov")) f.tikhonov = number(j, "tikhonov", path);
  return f;
}

json function_json(const spec::FunctionSpec& f) {
  json out = std::visit(
      [](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, spec::Quadratic>) {
          return {{"type", "quadratic"}, {"diag", vector_json(k.diag)}};
        } else if constexpr (std::is_same_v<T, spec::Arctan>) {
          return {{"type", "arctan"}, {"gamma", k.gamma}, {"mu", k.mu}};
        } else {
          return {{"type", "quartic"}, {"lambda", k.lambda}};
        }
      },
      f.kind);
  if (f.tikhonov) out["tikhonov"] = *f.tikhonov;
  return out;
}

Eigen::Index function_dimension(const spec::FunctionSpec& f) {
  if (const auto* q = std::get_if<spec::Quadratic>(&f.kind)) return q->diag.size();
  return 1;
}

ProblemSpec problem_spec(const json& j) {
  const std::string path = "problem";
  require_object(j, path);
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    fail("problem.kind", "expected \"paper1d\", \"quadratic_diag\" or \"custom\"");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "paper1d") {
    reject_unknown(j, path, {"kind", "gamma", "lambda", "mu"});
    return spec::Paper1d{number(j, "gamma", path), number(j, "lambda", path),
                         j.contains("mu") ? number(j, "mu", path) : 0.0};
  }
  if (kind == "quadratic_diag") {
    reject_unknown(j, path, {"kind", "q", "lambda"});
    spec::QuadraticDiag s{vector(j, "q", path), vector(j, "lambda", path)};
    if (s.q.size() != s.lambda.size()) {
      fail("problem.lambda", "has " + std::to_string(s.lambda.size()) + " entries but problem.q has " +
                                 std::to_string(s.q.size()));
    }
    return s;
  }
  if (kind == "custom") {
    reject_unknown(j, path, {"kind", "phi", "g", "A", "B", "c", "optimum"});
    for (const char* key : {"phi", "g", "A", "B", "c"}) {
      if (!j.contains(key)) fail(join(path, key), "missing required field");
    }
    spec::Custom s;
    s.phi = function_spec(j.at("phi"), "problem.phi");
    s.g = function_spec(j.at("g"), "problem.g");
    s.A = matrix_at(j.at("A"), "problem.A");
    s.B = matrix_at(j.at("B"), "problem.B");
    s.c = vector_at(j.at("c"), "problem.c");
    const Eigen::Index n = function_dimension(s.phi);
    const Eigen::Index m = function_dimension(s.g);
    auto dims = [](Eigen::Index r, Eigen::Index c) {
      return std::to_string(r) + "x" + std::to_string(c);
    };
    if (s.A.cols() != n) fail("problem.A", "is " + dims(s.A.rows(), s.A.cols()) +
                                               ", needs " + std::to_string(n) + " columns (dim phi)");
    if (s.B.cols() != m) fail("problem.B", "is " + dims(s.B.rows(), s.B.cols()) +
                                               ", needs " + std::to_string(m) + " columns (dim g)");
    if (s.B.rows() != s.A.rows()) {
      fail("problem.B", "has " + std::to_string(s.B.rows()) + " rows, problem.A has " +
                            std::to_string(s.A.rows()));
    }
    if (s.c.size() != s.A.rows()) {
      fail("problem.c", "has " + std::to_string(s.c.size()) + " entries, expected " +
                            std::to_string(s.A.rows()));
    }
    if (j.contains("optimum")) {
      const json& o = j.at("optimum");
      require_object(o, "problem.optimum");
      reject_unknown(o, "problem.optimum", {"w", "v", "alpha"});
      KnownOptimum opt{vector(o, "w", "problem.optimum"), vector(o, "v", "problem.optimum"),
                       vector(o, "alpha", "problem.optimum")};
      if (opt.w.size() != n) fail("problem.optimum.w", "wrong length");
      if (opt.v.size() != m) fail("problem.optimum.v", "wrong length");
      if (opt.alpha.size() != s.A.rows()) fail("problem.optimum.alpha", "wrong length");
      s.optimum = std::move(opt);
    }
    return s;
  }
  fail("problem.kind", "unknown kind \"" + kind + "\"");
}

json problem_json(const ProblemSpec& p) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, spec::Paper1d>) {
          return {{"kind", "paper1d"}, {"gamma", s.gamma}, {"lambda", s.lambda}, {"mu", s.mu}};
        } else if constexpr (std::is_same_v<T, spec::QuadraticDiag>) {
          return {{"kind", "quadratic_diag"}, {"q", vector_json(s.q)}, {"lambda", vector_json(s.lambda)}};
        } else {
          json out = {{"kind", "custom"},      {"phi", function_json(s.phi)},
                      {"g", function_json(s.g)}, {"A", matrix_json(s.A)},
                      {"B", matrix_json(s.B)},     {"c", vector_json(s.c)}};
          if (s.optimum) {
            out["optimum"] = {{"w", vector_json(s.optimum->w)},
                              {"v", vector_json(s.optimum->v)},
                              {"alpha", vector_json(s.optimum->alpha)}};
          }
          return out;
        }
      },
      p);
}

MatrixSpec matrix_spec(const json& j, const std::string& path, bool allow_scaled) {
  MatrixSpec m;
  if (j.is_string()) {
    if (j.get<std::string>() != "zero") fail(path, "expected \"zero\" or a matrix");
    m.kind = MatrixSpec::Kind::kZero;
  } else if (j.is_object()) {
    if (!allow_scaled) fail(path, "expected \"zero\" or a matrix");
    reject_unknown(j, path, {"scaled_identity"});
    m.kind = MatrixSpec::Kind::kScaledIdentity;
    m.scale = number(j, "scaled_identity", path);
  } else {
    m.kind = MatrixSpec::Kind::kRows;
    m.rows = matrix_at(j, path);
  }
  return m;
}

json matrix_spec_json(const MatrixSpec& m) {
  switch (m.kind) {
    case MatrixSpec::Kind::kZero:
      return "zero";
    case MatrixSpec::Kind::kScaledIdentity:
      return {{"scaled_identity", m.scale}};
    case MatrixSpec::Kind::kRows:
      return matrix_json(m.rows);
    case MatrixSpec::Kind::kDefault:
      break;
  }
  throw InternalConsistencyError("matrix_spec_json: unresolved default");
}

Matrix build_matrix(const MatrixSpec& m, Eigen::Index dim, const std::string& path) {
  switch (m.kind) {
    case MatrixSpec::Kind::kDefault:
    case MatrixSpec::Kind::kZero:
      return Matrix::Zero(dim, dim);
    case MatrixSpec::Kind::kScaledIdentity:
      if (!(m.scale >= 0.0)) fail(join(path, "scaled_identity"), "must be nonnegative");
      return m.scale * Matrix::Identity(dim, dim);
    case MatrixSpec::Kind::kRows:
      if (m.rows.rows() != dim || m.rows.cols() != dim) {
        fail(path, "is " + std::to_string(m.rows.rows()) + "x" + std::to_string(m.rows.cols()) +
                       ", expected " + std::to_string(dim) + "x" + std::to_string(dim));
      }
      return m.rows;
  }
  return Matrix();
}

// H left unspecified for the linearized variant: twice the smoothness of phi.
MatrixSpec effective_h(const RunConfig& cfg, const Problem& p) {
  if (cfg.H.kind != MatrixSpec::Kind::kDefault) return cfg.H;
  MatrixSpec h;
  if (cfg.algo == Algorithm::kLinearized) {
    const double smooth = p.phi().smoothness();
    if (!std::isfinite(smooth)) fail("solver.H", "required for linadmm when phi is not smooth");
    h.kind = MatrixSpec::Kind::kScaledIdentity;
    h.scale = 2.0 * smooth;
  } else {
    h.kind = MatrixSpec::Kind::kZero;
  }
  return h;
}

MatrixSpec effective_g(const RunConfig& cfg) {
  if (cfg.G.kind != MatrixSpec::Kind::kDefault) return cfg.G;
  MatrixSpec g;
  g.kind = MatrixSpec::Kind::kZero;
  return g;
}

void check_length(const std::optional<Vector>& v, Eigen::Index want, const char* path) {
  if (v && v->size() != want) {
    fail(path, "has " + std::to_string(v->size()) + " entries, expected " + std::to_string(want));
  }
}

}  // namespace

Algorithm parse_algorithm(const std::string& name, const std::string& path) {
  if (name == "admm") return Algorithm::kStandard;
  if (name == "linadmm") return Algorithm::kLinearized;
  fail(path, "expected \"admm\" or \"linadmm\", got \"" + name + "\"");
}

RunConfig parse_config(const json& j) {
  require_object(j, "config");
  reject_unknown(j, "", {"problem", "solver", "init"});
  if (!j.contains("problem")) fail("problem", "missing required field");
  RunConfig cfg;
  cfg.problem = problem_spec(j.at("problem"));

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    require_object(s, "solver");
    reject_unknown(s, "solver", {"algo", "rho", "iters", "G", "H", "inner_tol"});
    if (s.contains("algo")) {
      if (!s.at("algo").is_string()) fail("solver.algo", "expected a string");
      cfg.algo = parse_algorithm(s.at("algo").get<std::string>(), "solver.algo");
    }
    if (s.contains("rho")) cfg.rho = number(s, "rho", "solver");
    if (s.contains("iters")) {
      const json& it = s.at("iters");
      if (!it.is_number_integer()) fail("solver.iters", "expected an integer");
      const auto n = it.get<long long>();
      if (n < 0 || n > 100000000) fail("solver.iters", "must lie in [0, 1e8]");
      cfg.iters = static_cast<int>(n);
    }
    if (s.contains("inner_tol")) cfg.inner_tol = number(s, "inner_tol", "solver");
    if (s.contains("G")) cfg.G = matrix_spec(s.at("G"), "solver.G", false);
    if (s.contains("H")) cfg.H = matrix_spec(s.at("H"), "solver.H", true);
  }
  if (j.contains("init")) {
    const json& in = j.at("init");
    require_object(in, "init");
    reject_unknown(in, "init", {"w", "v", "alpha"});
    if (in.contains("w")) cfg.init_w = vector(in, "w", "init");
    if (in.contains("v")) cfg.init_v = vector(in, "v", "init");
    if (in.contains("alpha")) cfg.init_alpha = vector(in, "alpha", "init");
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character
    const std::size_t stop = std::min(text.size(), e.byte == 0 ? 0 : e.byte - 1);
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream os;
    os << "config: malformed JSON at line " << line << ", column " << column;
    throw ValidationError(os.str());
  }
  return parse_config(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.rho) cfg.rho = *o.rho;
  if (o.iters) {
    if (*o.iters < 0) fail("--iters", "must be nonnegative");
    cfg.iters = *o.iters;
  }
  if (o.algo) cfg.algo = *o.algo;
}

Resolved resolve(const RunConfig& cfg) {
  Problem problem = make_problem(cfg.problem);
  check_length(cfg.init_w, problem.n(), "init.w");
  check_length(cfg.init_v, problem.m(), "init.v");
  check_length(cfg.init_alpha, problem.p(), "init.alpha");

  SolverOptions opts;
  opts.algo = cfg.algo;
  opts.rho = cfg.rho;
  opts.max_iters = cfg.iters;
  opts.inner_tol = cfg.inner_tol;
  opts.G = build_matrix(effective_g(cfg), problem.m(), "solver.G");
  opts.H = build_matrix(effective_h(cfg, problem), problem.n(), "solver.H");
  SolverConfig solver(problem, std::move(opts));

  Iterate init = make_initial_point(problem, cfg.init_w.value_or(Vector::Ones(problem.n())),
                                    cfg.init_v.value_or(Vector::Ones(problem.m())),
                                    cfg.init_alpha.value_or(Vector::Zero(problem.p())));
  return {std::move(problem), std::move(solver), std::move(init)};
}

json config_echo(const RunConfig& cfg, const Resolved& r) {
  json solver = {{"algo", std::string(to_string(cfg.algo))},
                 {"rho", cfg.rho},
                 {"iters", cfg.iters},
                 {"inner_tol", cfg.inner_tol},
                 {"G", matrix_spec_json(effective_g(cfg))},
                 {"H", matrix_spec_json(effective_h(cfg, r.problem))}};
  json init = {{"w", vector_json(r.init.w)},
               {"v", vector_json(r.init.v)},
               {"alpha", vector_json(r.init.alpha)}};
  return {{"problem", problem_json(cfg.problem)}, {"solver", solver}, {"init", init}};
}

}  // namespace admmlab::cli
