#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bf {

enum class ErrorCode {
  InvalidArgument,
  SingularKappa,
  ResonantKappa,
  NotUnstable,
  NoConvergence,
  GapFailure,
  ContourTooTight,
  RankFailure,
  StructureViolation,
  DegenerateG,
  SingularSystem,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Domain failures that the CLI maps onto exit codes
/// (2 = domain, 3 = I/O, 4 = numerical).
int exit_code_for(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by structure checks; carries the (row, col) pairs that broke the pattern.
class StructureViolationError : public Error {
 public:
  StructureViolationError(const std::string& what, std::vector<std::pair<int, int>> entries)
      : Error(ErrorCode::StructureViolation, what), entries_(std::move(entries)) {}

  const std::vector<std::pair<int, int>>& entries() const noexcept { return entries_; }

 private:
  std::vector<std::pair<int, int>> entries_;
};

}  // namespace bf
