#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eegbci {

/// Machine-readable failure categories. The CLI prints these verbatim.
enum class ErrorCode {
  InvalidArgument,
  Io,
  Format,
  ChannelMismatch,
  NonFinite,
  OutOfRange,
  TaskAbsent,
  Nyquist,
  SingleClass,
  NotPositiveDefinite,
  LayoutMismatch,
  WidthMismatch,
  TooFewGroups,
  DegenerateFold,
  EmptyTestSet,
  Leakage,
  Protocol,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace eegbci
