#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpbessel/cauchy_tp.hpp"
#include "tpbessel/oracle.hpp"

namespace tpbcli {

using tpbessel::cdouble;

enum class Command { error_map, nu_sweep, contour_convergence, table1_fit };
enum class Method { lg, airy_type, both };
enum class Precision { double_, ext };

// Bad or inconsistent settings (exit code 1).
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::error_map;

  double nu = 100.25;
  // Sweep range; nu_count = 0 means the single value nu.
  double nu_min = 2.0, nu_max = 200.0;
  int nu_count = 0;
  bool nu_log = true;
  std::vector<double> nu_list;  // explicit list, overrides nu / range

  std::vector<cdouble> z{cdouble(1.0, 0.1)};

  // Rectangle [x0, x1] x [y0, y1]; regular nx x ny grid, or random_points
  // uniform samples when random_points > 0.
  double grid_x0 = -2, grid_x1 = 2, grid_y0 = -2, grid_y1 = 2;
  int grid_nx = 200, grid_ny = 200;
  int random_points = 0;
  bool inside_contour = false;  // keep only points inside the contour minus the margin

  std::string function = "H1";
  Method method = Method::lg;

  cdouble contour_center{2.0, 0.0};
  double contour_radius = 1.8;
  int nodes = 500;
  std::vector<int> terms{14};
  double margin = 0.05;
  double nu_guard = 5.0;

  double threshold = 1e-12;
  std::uint64_t seed = 20240229;
  int threads = 0;  // 0: hardware concurrency

  std::vector<int> n_list{100, 200, 300, 400};
  int n_ref = 2000;
  Precision precision = Precision::ext;

  std::string oracle_cache;
  bool compute_oracle = false;
  std::string output = "-";

  // Throws config_error.
  void validate() const;
  tpbessel::ContourSpec contour(int n_terms) const;
  std::vector<double> nu_values() const;
};

// Defaults differ per command (table1-fit starts from its nu list and z set).
RunConfig defaults_for(Command c);

using Settings = std::vector<std::pair<std::string, std::string>>;

// Command-specific defaults, then file settings, then flag settings; the
// command itself is taken from the flags first, then the file.
RunConfig build_config(const Settings& file, const Settings& flags);

// Keys accepted by config files and (as --key) on the command line.
const std::vector<std::string>& config_keys();

// Sets one field from its text form; keys may use '-' or '_'.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Flat "key = value" lines; '#' starts a comment.
Settings read_config_file(const std::string& path);

// Every field as "key = value" lines in config_keys() order.
Settings describe(const RunConfig& cfg);

const char* command_name(Command c);
const char* method_name(Method m);

// "1.5,0.2" or "1.5" (real)
cdouble parse_complex(const std::string& s);

}  // namespace tpbcli
