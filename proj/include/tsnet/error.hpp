#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tsnet {

enum class ErrorKind {
  invalid_argument,
  degenerate_input,
  io,
  kernel,
  incomplete_merge,
  merge_conflict,
  asymmetric_kernel,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A distance kernel failed on the pair (i, j); indices are 1-based.
class KernelError : public Error {
 public:
  KernelError(std::size_t i, std::size_t j, ErrorKind cause, const std::string& what);

  std::size_t i() const noexcept { return i_; }
  std::size_t j() const noexcept { return j_; }
  ErrorKind cause() const noexcept { return cause_; }

 private:
  std::size_t i_;
  std::size_t j_;
  ErrorKind cause_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

[[noreturn]] inline void invalid_argument(const std::string& message) {
  throw Error(ErrorKind::invalid_argument, message);
}

[[noreturn]] inline void degenerate_input(const std::string& message) {
  throw Error(ErrorKind::degenerate_input, message);
}

}  // namespace tsnet
