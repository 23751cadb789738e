#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace catmouse {

enum class ErrorCode {
  // circuit
  SyntaxError,
  DuplicateId,
  UnknownRef,
  OutputIsInput,
  NotTopological,
  NotSynchronous,
  UnreachableGate,
  LengthMismatch,
  InvalidParams,
  // graph
  InconsistentGraph,
  UnknownNode,
  // solver
  InvalidInstance,
  TooLarge,
  PolicyIllegalMove,
  // strategies
  NoMove,
  NoSafeMove,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownRef: return "UnknownRef";
    case ErrorCode::OutputIsInput: return "OutputIsInput";
    case ErrorCode::NotTopological: return "NotTopological";
    case ErrorCode::NotSynchronous: return "NotSynchronous";
    case ErrorCode::UnreachableGate: return "UnreachableGate";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InconsistentGraph: return "InconsistentGraph";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::PolicyIllegalMove: return "PolicyIllegalMove";
    case ErrorCode::NoMove: return "NoMove";
    case ErrorCode::NoSafeMove: return "NoSafeMove";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable code.
/// `subject()` names the offending line number, gate id, or node id when
/// there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string subject, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) +
                           (subject.empty() ? "" : "(" + subject + ")") +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code),
        subject_(std::move(subject)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace catmouse
