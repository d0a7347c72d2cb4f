#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fhnvs/coefficients.hpp"
#include "fhnvs/energy.hpp"
#include "fhnvs/solvers.hpp"

namespace fhnvs::cli {

/// Schema violation; the message starts with the offending key path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  int dim = 3;
  double L = 5.0;
  int n = 15;
};

struct CoeffConfig {
  /// constant | example_sigma | gaussian | paired | file
  std::string kind = "constant";
  double beta = 1.0;
  double a = 1.0;
  double b = 3.0;
  double r = 2.0;
  double kappa = 1.0;
  double r1 = 2.0;
  double kappa1 = 1.0;
  double r2 = 2.0;
  double kappa2 = 1.0;
  std::string a_file;
  std::string b_file;
  std::string phi_file;
};

struct NlConfig {
  std::string kind = "power";
  double p = 3.0;
  std::optional<double> alpha;
};

struct SolverSection {
  SolverConfig cfg;
  Metric metric = Metric::ab;
  double inner_tol = 1e-10;
  double outer_tol = 1e-8;
};

struct SpectralConfig {
  /// Which coefficient the spectral commands examine: a | b | d | e.
  std::string target = "b";
  double s = 2.0;
  double ball_radius = 1.0;
  std::vector<Point> centers;
  std::vector<double> ladder;
  int restarts = 6;
  std::uint64_t seed = 20240901;
};

struct OutputConfig {
  std::string dir = "out";
  std::vector<std::string> formats{"csv"};
};

struct RunConfig {
  GridConfig grid;
  CoeffConfig coeff;
  NlConfig nl;
  SolverSection solver;
  SpectralConfig spectral;
  OutputConfig outputs;
  /// Directory that relative file paths resolve against.
  std::filesystem::path base_dir;

  /// Fully populated echo; parsing it back yields an identical config.
  nlohmann::json to_json() const;
};

RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_json(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");

Grid make_grid(const RunConfig& cfg);
CoefficientSet make_coefficients(const RunConfig& cfg, const Grid& grid);
NonlinearitySpec make_nonlinearity(const RunConfig& cfg, const Grid& grid);

}  // namespace fhnvs::cli
