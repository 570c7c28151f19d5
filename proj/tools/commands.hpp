#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "run_config.hpp"
#include "tpbessel/oracle.hpp"

namespace tpbcli {

// Oracle values absent from the cache while computing is disabled (exit code 3).
class missing_oracle : public std::runtime_error {
 public:
  explicit missing_oracle(std::vector<std::string> points);
  const std::vector<std::string>& points() const { return points_; }

 private:
  std::vector<std::string> points_;
};

enum ExitCode { kOk = 0, kConfigError = 1, kGuardRejected = 2, kMissingOracle = 3 };

struct OracleRequest {
  double nu;
  cdouble z;
  tpbessel::OracleFn fn;
};

// Cache-backed oracle lookups; prefetch() fills every missing entry (or
// throws missing_oracle) before the evaluation pass.
class OracleSource {
 public:
  OracleSource(std::string cache_path, bool compute, int threads);

  // Requests the oracle rejects outright (e.g. near-integer nu) are returned
  // as unavailable rather than treated as missing.
  void prefetch(const std::vector<OracleRequest>& reqs);
  bool available(const OracleRequest& r) const;
  cdouble value(const OracleRequest& r) const;
  std::size_t size() const { return cache_.size(); }

 private:
  std::string path_;
  bool compute_;
  int threads_;
  tpbessel::OracleCache cache_;
  std::vector<OracleRequest> rejected_;
};

struct CommandResult {
  std::string csv;
  int exit_code = kOk;
  std::string message;  // reason for a non-zero exit code
};

std::optional<tpbessel::OracleFn> oracle_fn(const std::string& function);

// Each command returns the CSV text; guard problems that make the whole run
// meaningless set exit_code = kGuardRejected.
CommandResult run_error_map(const RunConfig& cfg, OracleSource& oracle);
CommandResult run_nu_sweep(const RunConfig& cfg, OracleSource& oracle);
CommandResult run_contour_convergence(const RunConfig& cfg);
CommandResult run_table1_fit(const RunConfig& cfg, OracleSource& oracle);

// Validates, runs and maps exceptions to exit codes. The CSV goes to out
// even when the exit code is kGuardRejected.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Points of the error-map grid in output order.
std::vector<cdouble> grid_points(const RunConfig& cfg);

// Least-squares fit of log(err) = log(C) + slope log(nu) over err > 0.
struct PowerFit {
  double slope = 0, constant = 0;
  int used = 0;
};
PowerFit fit_power_law(const std::vector<double>& nu, const std::vector<double>& err);

// Published error constants C_{n+1} for n = 4, 6, ..., 18 (0 when not tabulated).
double table1_constant(int n);

// 17 significant digits, scientific notation.
std::string fmt17(double x);

// Runs f(i) for i in [0, n) on a worker pool; threads = 0 uses the
// hardware concurrency.
void parallel_for(int n, int threads, const std::function<void(int)>& f);

}  // namespace tpbcli
