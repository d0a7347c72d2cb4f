#include "fhnvs_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "fhnvs/error.hpp"

namespace fhnvs::cli {

using nlohmann::json;

namespace {

/// Reads one JSON object, tracking which keys were consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(key_path(key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(key_path(key) + ": must be finite");
    return d;
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(key_path(key) + ": expected an integer");
    return v.get<int>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned()) throw ConfigError(key_path(key) + ": expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(key_path(key) + ": expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (seen_.count(it.key()) == 0) throw ConfigError(key_path(it.key()) + ": unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path + ": " + what);
}

}  // namespace

RunConfig parse_config_json(const json& j, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  cfg.base_dir = base_dir;
  Section root(j, "");
  if (!root.has("grid")) throw ConfigError("grid: required section missing");

  {
    Section s(root.raw("grid"), "grid");
    cfg.grid.dim = s.integer("dim", cfg.grid.dim);
    cfg.grid.L = s.number("L", cfg.grid.L);
    cfg.grid.n = s.integer("n", cfg.grid.n);
    s.finish();
    require(cfg.grid.dim >= 1 && cfg.grid.dim <= 3, "grid.dim", "must be 1, 2 or 3");
    require(cfg.grid.L > 0.0, "grid.L", "must be positive");
    require(cfg.grid.n >= 1, "grid.n", "must be >= 1");
  }

  if (root.has("coeff")) {
    Section s(root.raw("coeff"), "coeff");
    CoeffConfig& c = cfg.coeff;
    c.kind = s.string("kind", c.kind);
    c.beta = s.number("beta", c.beta);
    c.a = s.number("a", c.a);
    c.b = s.number("b", c.b);
    c.r = s.number("r", c.r);
    c.kappa = s.number("kappa", c.kappa);
    c.r1 = s.number("r1", c.r1);
    c.kappa1 = s.number("kappa1", c.kappa1);
    c.r2 = s.number("r2", c.r2);
    c.kappa2 = s.number("kappa2", c.kappa2);
    c.a_file = s.string("a_file", c.a_file);
    c.b_file = s.string("b_file", c.b_file);
    c.phi_file = s.string("phi", c.phi_file);
    s.finish();
    static const std::set<std::string> kinds{"constant", "example_sigma", "gaussian", "paired", "file"};
    require(kinds.count(c.kind) == 1, "coeff.kind", "expected constant, example_sigma, gaussian, paired or file");
    require(c.beta > 0.0, "coeff.beta", "must be positive");
    if (c.kind == "file") {
      require(!c.a_file.empty(), "coeff.a_file", "required for kind 'file'");
      require(!c.b_file.empty(), "coeff.b_file", "required for kind 'file'");
    }
  }

  if (root.has("nl")) {
    Section s(root.raw("nl"), "nl");
    cfg.nl.kind = s.string("kind", cfg.nl.kind);
    cfg.nl.p = s.number("p", cfg.nl.p);
    if (s.has("alpha")) cfg.nl.alpha = s.number("alpha", 0.0);
    s.finish();
    require(cfg.nl.kind == "power", "nl.kind", "expected power");
    require(cfg.nl.p > 1.0, "nl.p", "must be > 1");
    if (cfg.grid.dim >= 3) {
      const double crit = (cfg.grid.dim + 2.0) / (cfg.grid.dim - 2.0);
      require(cfg.nl.p < crit, "nl.p", "supercritical exponent (p must be below 2* - 1)");
    }
    if (cfg.nl.alpha) {
      require(*cfg.nl.alpha > std::max(2.0, 0.5 * cfg.grid.dim), "nl.alpha", "must exceed max(2, N/2)");
    }
  }

  if (root.has("solver")) {
    Section s(root.raw("solver"), "solver");
    SolverConfig& sc = cfg.solver.cfg;
    sc.path_points = s.integer("path_points", sc.path_points);
    sc.descent_step = s.number("descent_step", sc.descent_step);
    sc.max_outer_iters = s.integer("max_outer_iters", sc.max_outer_iters);
    sc.grad_tol = s.number("grad_tol", sc.grad_tol);
    sc.newton_tol = s.number("newton_tol", sc.newton_tol);
    sc.newton_max_iters = s.integer("newton_max_iters", sc.newton_max_iters);
    sc.newton_inner_tol = s.number("newton_inner_tol", sc.newton_inner_tol);
    sc.rho_fraction = s.number("rho_fraction", sc.rho_fraction);
    sc.seed = s.unsigned_integer("seed", sc.seed);
    sc.u3_restarts = s.integer("u3_restarts", sc.u3_restarts);
    sc.stagnation_sweeps = s.integer("stagnation_sweeps", sc.stagnation_sweeps);
    const std::string metric = s.string("metric", to_string(cfg.solver.metric));
    cfg.solver.inner_tol = s.number("inner_tol", cfg.solver.inner_tol);
    cfg.solver.outer_tol = s.number("outer_tol", cfg.solver.outer_tol);
    s.finish();
    require(metric == "ab" || metric == "ab_star", "solver.metric", "expected ab or ab_star");
    cfg.solver.metric = metric_from_string(metric);
    require(cfg.solver.inner_tol > 0.0, "solver.inner_tol", "must be positive");
    require(cfg.solver.outer_tol > 0.0, "solver.outer_tol", "must be positive");
    try {
      sc.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }

  if (root.has("spectral")) {
    Section s(root.raw("spectral"), "spectral");
    SpectralConfig& sp = cfg.spectral;
    sp.target = s.string("target", sp.target);
    sp.s = s.number("s", sp.s);
    sp.ball_radius = s.number("ball_radius", sp.ball_radius);
    sp.restarts = s.integer("restarts", sp.restarts);
    sp.seed = s.unsigned_integer("seed", sp.seed);
    if (s.has("centers")) {
      const json& arr = s.raw("centers");
      require(arr.is_array(), "spectral.centers", "expected an array of points");
      for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string kp = "spectral.centers[" + std::to_string(k) + "]";
        require(arr[k].is_array() && !arr[k].empty() && arr[k].size() <= 3, kp, "expected an array of 1-3 numbers");
        Point pnt{0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < arr[k].size(); ++i) {
          require(arr[k][i].is_number(), kp, "expected numbers");
          pnt[i] = arr[k][i].get<double>();
        }
        sp.centers.push_back(pnt);
      }
    }
    if (s.has("ladder")) {
      const json& arr = s.raw("ladder");
      require(arr.is_array(), "spectral.ladder", "expected an array of radii");
      for (const json& v : arr) {
        require(v.is_number() && v.get<double>() >= 0.0, "spectral.ladder", "expected nonnegative numbers");
        sp.ladder.push_back(v.get<double>());
      }
    }
    s.finish();
    static const std::set<std::string> targets{"a", "b", "d", "e"};
    require(targets.count(sp.target) == 1, "spectral.target", "expected a, b, d or e");
    require(sp.s >= 2.0, "spectral.s", "must be >= 2");
    require(sp.ball_radius > 0.0, "spectral.ball_radius", "must be positive");
    require(sp.restarts >= 1, "spectral.restarts", "must be >= 1");
  }

  if (root.has("outputs")) {
    Section s(root.raw("outputs"), "outputs");
    cfg.outputs.dir = s.string("dir", cfg.outputs.dir);
    if (s.has("formats")) {
      const json& arr = s.raw("formats");
      require(arr.is_array(), "outputs.formats", "expected an array");
      cfg.outputs.formats.clear();
      for (const json& v : arr) {
        require(v.is_string() && (v == "csv" || v == "vtk"), "outputs.formats", "entries must be csv or vtk");
        cfg.outputs.formats.push_back(v.get<std::string>());
      }
    }
    s.finish();
  }
  root.finish();
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_config_json(j, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

json RunConfig::to_json() const {
  json centers = json::array();
  for (const Point& p : spectral.centers) centers.push_back({p[0], p[1], p[2]});
  json nl_j = {{"kind", nl.kind}, {"p", nl.p}};
  if (nl.alpha) nl_j["alpha"] = *nl.alpha;
  const SolverConfig& sc = solver.cfg;
  const auto resolve = [&](const std::string& f) {
    return f.empty() ? f : std::filesystem::absolute(base_dir / f).lexically_normal().string();
  };
  json coeff_j = {{"kind", coeff.kind}, {"beta", coeff.beta}, {"a", coeff.a},     {"b", coeff.b},
                  {"r", coeff.r},       {"kappa", coeff.kappa}, {"r1", coeff.r1},  {"kappa1", coeff.kappa1},
                  {"r2", coeff.r2},     {"kappa2", coeff.kappa2}};
  if (!coeff.a_file.empty()) coeff_j["a_file"] = resolve(coeff.a_file);
  if (!coeff.b_file.empty()) coeff_j["b_file"] = resolve(coeff.b_file);
  if (!coeff.phi_file.empty()) coeff_j["phi"] = resolve(coeff.phi_file);
  return {
      {"grid", {{"dim", grid.dim}, {"L", grid.L}, {"n", grid.n}}},
      {"coeff", coeff_j},
      {"nl", nl_j},
      {"solver",
       {{"path_points", sc.path_points},
        {"descent_step", sc.descent_step},
        {"max_outer_iters", sc.max_outer_iters},
        {"grad_tol", sc.grad_tol},
        {"newton_tol", sc.newton_tol},
        {"newton_max_iters", sc.newton_max_iters},
        {"newton_inner_tol", sc.newton_inner_tol},
        {"rho_fraction", sc.rho_fraction},
        {"seed", sc.seed},
        {"u3_restarts", sc.u3_restarts},
        {"stagnation_sweeps", sc.stagnation_sweeps},
        {"metric", to_string(solver.metric)},
        {"inner_tol", solver.inner_tol},
        {"outer_tol", solver.outer_tol}}},
      {"spectral",
       {{"target", spectral.target},
        {"s", spectral.s},
        {"ball_radius", spectral.ball_radius},
        {"centers", centers},
        {"ladder", spectral.ladder},
        {"restarts", spectral.restarts},
        {"seed", spectral.seed}}},
      {"outputs", {{"dir", outputs.dir}, {"formats", outputs.formats}}},
  };
}

Grid make_grid(const RunConfig& cfg) {
  try {
    return Grid(cfg.grid.dim, cfg.grid.L, cfg.grid.n);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

CoefficientSet make_coefficients(const RunConfig& cfg, const Grid& grid) {
  const CoeffConfig& c = cfg.coeff;
  std::optional<Field> phi;
  if (!c.phi_file.empty()) phi = load_field(grid, cfg.base_dir / c.phi_file);
  if (c.kind == "constant") return CoefficientSet(Field(grid, c.a), Field(grid, c.b), c.beta, phi);
  if (c.kind == "example_sigma") {
    const double mu = poincare_mu(grid, c.r);
    return CoefficientSet(Field(grid, c.a), example_sigma(grid, c.r, c.kappa, mu), c.beta, phi);
  }
  if (c.kind == "gaussian") return CoefficientSet(Field(grid, c.a), gaussian_sigma(grid), c.beta, phi);
  if (c.kind == "paired") {
    PairedCoefficients pc = paired_class_coeffs(grid, c.r1, c.kappa1, c.r2, c.kappa2);
    return CoefficientSet(std::move(pc.a), std::move(pc.b), c.beta, phi);
  }
  return CoefficientSet(load_field(grid, cfg.base_dir / c.a_file), load_field(grid, cfg.base_dir / c.b_file), c.beta,
                        phi);
}

NonlinearitySpec make_nonlinearity(const RunConfig& cfg, const Grid& grid) {
  NonlinearitySpec spec = power_nonlinearity(grid, cfg.nl.p);
  if (cfg.nl.alpha) spec.alpha = *cfg.nl.alpha;
  return spec;
}

}  // namespace fhnvs::cli
