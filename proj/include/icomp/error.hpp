#pragma once

#include <stdexcept>
#include <string>

namespace icomp {

enum class ErrorKind {
  HorizonExceeded,
  OutOfRange,
  UnsupportedShrink,
  NotNonthin,
  NoFreshBlock,
  NotInDomain,
  DomainViolation,
  UnknownName,
  ShapeMismatch,
  NoMetric,
  WitnessInvalid,
  ExtractionStalled,
  SplitUndecided,
  ModeMismatch,
  ParseError,
  Overflow,
};

const char* errorName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);
  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& detail);

}  // namespace icomp
