#pragma once

// Verification campaigns behind the command-line front end, and their reports.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sobtrace/vec.hpp"

namespace sobtrace::cli {

/// Raised for bad flags or contradictory parameters (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric fields left at 0 (or empty) take the campaign's default; run() resolves them
/// before the config is echoed.
struct RunConfig {
  std::string command;
  int order = 4;
  int dim = 3;
  Vec z0;
  Vec a;
  double lambda = 1.0;
  double c = 0.0;
  std::string family = "extremal";
  int kmax = 40;
  int trials = 0;
  int modes = 6;
  double eps = 0.1;
  int samples = 0;
  std::uint64_t seed = 1;
  int res_sphere = 0;
  int res_radial = 0;
  int res_inner = -1;  // -1: reduced (1) when the data is zonal about e_1, else res_sphere
  double fd_h = 0.0;
  std::map<std::string, double> tol;  // overrides, keyed without the "tol-" prefix
  std::string out;
  std::string format = "json";
  bool timing = false;
  std::string config_file;

  double tolerance(const std::string& key, double fallback) const;
};

enum class Relation { AtMost, AtLeast, Equals };

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

Check make_check(std::string name, double value, double tolerance, Relation rel = Relation::AtMost);

struct Report {
  std::vector<std::pair<std::string, std::string>> config;  // echo, in definition order
  std::vector<Check> checks;
  bool pass = false;
  double elapsed_ms = 0.0;
};

const std::vector<std::string>& commands();

/// Fills campaign defaults and validates; throws UsageError.
RunConfig resolve(RunConfig cfg);

/// Runs a resolved config. Numerical failures become failing checks named after the stage.
Report run(const RunConfig& cfg);

std::string to_json(const Report& r);
std::string to_csv(const Report& r);

/// Full command-line entry point; returns the process exit code.
int main(int argc, char** argv);

}  // namespace sobtrace::cli
