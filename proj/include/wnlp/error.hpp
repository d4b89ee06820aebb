#pragma once

#include <stdexcept>
#include <string>

namespace wnlp {

enum class ErrorCode {
  InvalidArgument = 1,
  DimensionMismatch = 2,
  NotHermitian = 3,
  NonMonotone = 4,
  Degenerate = 5,
  NonConvergence = 6,
  Config = 7,
  Io = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace wnlp
