#pragma once

// Self-check suite: twelve numbered criteria covering the closed forms, the
// Stokes expansion, the truncated operator, its near-zero spectrum and the 4x4
// reduction. Shared by `bf validate` and the acceptance test.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace bf {

struct ValidationConfig {
  int band = 32;
  std::uint64_t seed = 20240917;
  /// Random Sylvester systems drawn for criterion 11.
  int random_trials = 1000;
  /// Test hook: flips the sign of e22 wherever the suite predicts from the
  /// coefficient table. The suite must then fail.
  bool mutate_e22_sign = false;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Measured quantities against their bounds.
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 12;

/// Runs criterion `id` (1..12). Exceptions from the numerics become failures
/// with the error text in `detail`.
CriterionResult run_criterion(int id, const ValidationConfig& cfg = {});

/// All criteria in order; `progress` is called after each one.
std::vector<CriterionResult> run_acceptance(
    const ValidationConfig& cfg = {},
    const std::function<void(const CriterionResult&)>& progress = {});

}  // namespace bf
