#include "icomp/error.hpp"

#include "icomp/verdict.hpp"

namespace icomp {

const char* errorName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::HorizonExceeded: return "HorizonExceeded";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::UnsupportedShrink: return "UnsupportedShrink";
    case ErrorKind::NotNonthin: return "NotNonthin";
    case ErrorKind::NoFreshBlock: return "NoFreshBlock";
    case ErrorKind::NotInDomain: return "NotInDomain";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NoMetric: return "NoMetric";
    case ErrorKind::WitnessInvalid: return "WitnessInvalid";
    case ErrorKind::ExtractionStalled: return "ExtractionStalled";
    case ErrorKind::SplitUndecided: return "SplitUndecided";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Overflow: return "Overflow";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(errorName(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

void fail(ErrorKind kind, const std::string& detail) { throw Error(kind, detail); }

const char* truthName(Truth t) {
  switch (t) {
    case Truth::True: return "True";
    case Truth::False: return "False";
    case Truth::Unknown: return "Unknown";
  }
  return "?";
}

Verdict Verdict::yes(std::string rule, std::vector<std::string> trace) {
  return Verdict{Truth::True, 0, std::move(rule), std::move(trace)};
}

Verdict Verdict::no(std::string rule, std::vector<std::string> trace) {
  return Verdict{Truth::False, 0, std::move(rule), std::move(trace)};
}

Verdict Verdict::unknown(std::uint64_t horizon, std::string rule, std::vector<std::string> trace) {
  return Verdict{Truth::Unknown, horizon, std::move(rule), std::move(trace)};
}

std::string Verdict::summary() const {
  std::string s = truthName(value);
  if (value == Truth::Unknown) s += "@" + std::to_string(horizon);
  if (!rule.empty()) s += " [" + rule + "]";
  return s;
}

Verdict negate(Verdict v) {
  if (v.value == Truth::True) v.value = Truth::False;
  else if (v.value == Truth::False) v.value = Truth::True;
  return v;
}

}  // namespace icomp
