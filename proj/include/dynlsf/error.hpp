#pragma once

#include <stdexcept>
#include <string>

namespace dynlsf {

enum class ErrorCode {
  InvalidNode,
  DeleteAbsentEdge,
  EdgeAbsent,
  ResampleExhausted,
  RepairInProgress,
  InvalidBeta,
  InvalidParameters,
  NotSpanning,
  ParseError,
  IllegalDelete,
  InvalidParams,
  Internal,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidNode: return "InvalidNode";
    case ErrorCode::DeleteAbsentEdge: return "DeleteAbsentEdge";
    case ErrorCode::EdgeAbsent: return "EdgeAbsent";
    case ErrorCode::ResampleExhausted: return "ResampleExhausted";
    case ErrorCode::RepairInProgress: return "RepairInProgress";
    case ErrorCode::InvalidBeta: return "InvalidBeta";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::NotSpanning: return "NotSpanning";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IllegalDelete: return "IllegalDelete";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dynlsf
