#ifndef KAMLAT_ERRORS_HPP
#define KAMLAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kamlat {

enum class ErrorKind {
  Config,
  ZeroIndex,
  NonZeroAverage,
  ResonantDivisor,
  BudgetOverflow,
  ExhaustedRetries,
  OutOfRange,
  DegenerateHessian,
  InversionDiverged,
  AliasingBudgetExceeded,
  CapsExceeded,
  TurningPointNotFound,
  NondegeneracyViolated,
  IntegrationFailure,
  UnstableStep,
  NoDiophantineXi,
  Diverged,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config: return "Config";
    case ErrorKind::ZeroIndex: return "ZeroIndex";
    case ErrorKind::NonZeroAverage: return "NonZeroAverage";
    case ErrorKind::ResonantDivisor: return "ResonantDivisor";
    case ErrorKind::BudgetOverflow: return "BudgetOverflow";
    case ErrorKind::ExhaustedRetries: return "ExhaustedRetries";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DegenerateHessian: return "DegenerateHessian";
    case ErrorKind::InversionDiverged: return "InversionDiverged";
    case ErrorKind::AliasingBudgetExceeded: return "AliasingBudgetExceeded";
    case ErrorKind::CapsExceeded: return "CapsExceeded";
    case ErrorKind::TurningPointNotFound: return "TurningPointNotFound";
    case ErrorKind::NondegeneracyViolated: return "NondegeneracyViolated";
    case ErrorKind::IntegrationFailure: return "IntegrationFailure";
    case ErrorKind::UnstableStep: return "UnstableStep";
    case ErrorKind::NoDiophantineXi: return "NoDiophantineXi";
    case ErrorKind::Diverged: return "Diverged";
  }
  return "Unknown";
}

}  // namespace kamlat

#endif
