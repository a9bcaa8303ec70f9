#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsafe {

enum class ErrorKind {
  InvalidInput,
  NegativeEntry,
  NotNormalized,
  DimensionMismatch,
  IndexOutOfRange,
  DimensionTooLarge,
  CorrelatedSpecRejected,
  NotHermitian,
  NotPositive,
};

std::string_view to_string(ErrorKind kind);

// Every validation failure in the library is reported through this type.
// what() is prefixed with the kind name so CLI users see which invariant broke.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::CorrelatedSpecRejected: return "CorrelatedSpecRejected";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositive: return "NotPositive";
  }
  return "Unknown";
}

}  // namespace qsafe
