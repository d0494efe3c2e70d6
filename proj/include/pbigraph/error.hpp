#pragma once

#include <stdexcept>
#include <string>

namespace pbg {

enum class ErrorCode {
  invalid_argument = 1,
  length_mismatch,
  degenerate_input,
  resolution,
  invalid_density,
  self_adjointness,
  io,
  config,
};

/// Exception type used throughout the library. The code maps one-to-one onto
/// the status values of the C API.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

inline void require_arg(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::invalid_argument, what);
}

inline void require_length(std::size_t got, std::size_t expected, const char* what) {
  if (got != expected) {
    fail(ErrorCode::length_mismatch,
         std::string(what) + ": expected length " + std::to_string(expected) + ", got " + std::to_string(got));
  }
}

}  // namespace pbg
