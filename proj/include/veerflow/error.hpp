#pragma once

#include <stdexcept>
#include <string>

namespace veerflow {

/// Error families; each maps to one process exit code of the CLI.
enum class ErrorKind {
  Precondition = 1,  // mathematical precondition violated (not taut, class not positive, ...)
  Usage = 2,
  Parse = 3,
  Internal = 4,      // invariant breach inside the engine
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& what)
      : std::runtime_error(what), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const { return kind_; }
  /// Machine-readable identifier such as "NotVeering" or "GluingConflict".
  const std::string& code() const { return code_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
  std::string code_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& code, const std::string& msg) {
  throw Error(kind, code, code + ": " + msg);
}

[[noreturn]] inline void internal_error(const std::string& code, const std::string& msg) {
  fail(ErrorKind::Internal, code, msg);
}

#define VEERFLOW_ASSERT(cond, code, msg)                   \
  do {                                                     \
    if (!(cond)) ::veerflow::internal_error((code), (msg)); \
  } while (0)

}  // namespace veerflow
