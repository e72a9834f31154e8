#pragma once

#include <stdexcept>
#include <string>

namespace pform {

enum class ErrorCode {
  invalid_argument = 1,
  degree_mismatch,
  cfl_violation,
  topological_obstruction,
  precondition,
  solver_failure,
  mode_leakage,
  amplitude_guard,
  config,
  io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace pform
