#pragma once

#include <string>
#include <vector>

#include "output.hpp"

namespace bftool {

struct RunConfig {
  double kappa = 0.0;
  std::string kappa_grid;  // "a:b:n" or comma list
  double eps = 0.01;
  std::string eps_grid = "0.02,0.01,0.005";
  double mu = 0.01;
  double mu_max = 0.0;  // 0: 1.2 times the leading threshold
  int samples = 40;
  int band = 32;
  double gap_factor = 1.5;
  double guard = 1e-6;
  int resonance_cap = 4;
  std::string out;
  std::string format = "csv";
  bool mutate_e22 = false;

  /// Throws InvalidArgument on non-finite values, K outside [8, 512] or eps outside [0, 0.05].
  void validate() const;
  json to_json() const;
};

/// Parses "a:b:n" (n points, both ends included) or "x1,x2,...".
std::vector<double> parse_grid(const std::string& spec);

/// Each command writes its own output and returns the process exit code.
int cmd_coeffs(const RunConfig& cfg);
int cmd_figure8(const RunConfig& cfg);
int cmd_spectrum(const RunConfig& cfg);
int cmd_mu_bar(const RunConfig& cfg);
int cmd_stokes_residual(const RunConfig& cfg);
int cmd_validate(const RunConfig& cfg);

}  // namespace bftool
