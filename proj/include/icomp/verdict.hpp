#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace icomp {

enum class Truth { True, False, Unknown };

const char* truthName(Truth t);

struct Verdict {
  Truth value = Truth::Unknown;
  // Largest index examined; only meaningful for Unknown.
  std::uint64_t horizon = 0;
  std::string rule;
  std::vector<std::string> trace;

  static Verdict yes(std::string rule, std::vector<std::string> trace = {});
  static Verdict no(std::string rule, std::vector<std::string> trace = {});
  static Verdict unknown(std::uint64_t horizon, std::string rule,
                         std::vector<std::string> trace = {});

  bool isTrue() const { return value == Truth::True; }
  bool isFalse() const { return value == Truth::False; }
  bool isUnknown() const { return value == Truth::Unknown; }
  bool definitive() const { return value != Truth::Unknown; }

  // One-line summary: "True [rule]" or "Unknown@h [rule]".
  std::string summary() const;
};

Verdict negate(Verdict v);

}  // namespace icomp
