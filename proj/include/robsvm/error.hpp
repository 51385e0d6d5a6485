#pragma once

#include <stdexcept>
#include <string>

namespace robsvm {

enum class ErrorCode {
  // data / input errors
  MissingFile,
  MalformedCell,
  MissingValue,
  EmptyDataset,
  TooManyLabelValues,
  BadLabel,
  NonMonotoneIndex,
  IndexOutOfRange,
  DimensionMismatch,
  SingleClass,
  EmptyInput,
  VerticalBoundary,
  UndefinedDisparity,
  InvalidArgument,
  // solver errors
  Infeasible,
  FactorizationFailed,
  SolverFailure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // true for errors caused by bad input data rather than numerical failure
  bool is_data_error() const noexcept {
    return code_ != ErrorCode::Infeasible &&
           code_ != ErrorCode::FactorizationFailed &&
           code_ != ErrorCode::SolverFailure &&
           code_ != ErrorCode::InvalidArgument;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace robsvm
