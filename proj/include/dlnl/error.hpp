#pragma once

#include <stdexcept>
#include <string>

namespace dlnl {

enum class ErrorKind {
  Parse,
  Sort,
  RuleMismatch,
  Arity,
  PreconditionViolated,
  ShapeMismatch,
  AdditiveContext,
  Binder,
  NotARedex,
  NotACommute,
  FuelExhausted,
  UnboundAtom,
  TooManyAtoms,
  Usage,
};

const char* error_kind_name(ErrorKind k);

// Every failure in the kernel is reported through this one type; `path` is a
// proof-tree path like "0.1" (premise indices from the root), empty if n/a.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::string path = {}, int line = 0, int col = 0)
      : std::runtime_error(std::move(message)), kind_(kind), path_(std::move(path)), line_(line), col_(col) {}

  ErrorKind kind() const { return kind_; }
  const std::string& path() const { return path_; }
  int line() const { return line_; }
  int col() const { return col_; }

  // Prefix a premise index onto the node path while unwinding a checker.
  Error at_premise(std::size_t i) const {
    std::string p = std::to_string(i);
    if (!path_.empty()) p += "." + path_;
    return Error(kind_, what(), p, line_, col_);
  }

 private:
  ErrorKind kind_;
  std::string path_;
  int line_, col_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace dlnl
