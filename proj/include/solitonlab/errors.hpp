#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace solitonlab {

enum class ErrorCode {
  Empty,
  Unbounded,
  NotFullDim,
  UnboundedSection,
  WeightNonpositive,
  WeightPolytopeMismatch,
  NewtonDiverged,
  Infeasible,
  WeightDomain,
  NonGorenstein,
  NotPointed,
  OutsideReebCone,
  EmptySlice,
  IrregularQuotient,
  ZeroVector,
  NotConcave,
  NotConvex,
  QuadratureDiverged,
  ObstructedFutaki,
  LatticeMismatch,
  InvalidInput,
};

std::string_view to_string(ErrorCode code);

// Mathematical infeasibility (exit code 2 in the CLI) versus everything else.
bool is_infeasibility(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace solitonlab
