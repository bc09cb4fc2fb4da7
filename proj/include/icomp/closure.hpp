#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icomp/convergence.hpp"

namespace icomp {

// A subset of [0,1]: finitely many points or a finite union of rational intervals.
struct SetDescription {
  enum Kind { FinitePointSet, IntervalUnion } kind = IntervalUnion;
  std::vector<Rational> points;
  std::vector<Interval> intervals;

  static SetDescription pointSet(std::vector<Rational> ps);
  static SetDescription intervalUnion(std::vector<Interval> is);
  bool contains(const Rational& x) const;
  bool empty() const;
  std::string toString() const;
};

// Concatenation of the two descriptions; point sets are added as degenerate intervals.
SetDescription uniteSets(const SetDescription& a, const SetDescription& b);

struct ClosureResult {
  Verdict verdict;
  // constant, block-constant, approach or separating ball.
  std::string schema;
  std::optional<Sequence> witness;
  std::optional<Rational> separatingRadius;
};

inline constexpr std::uint64_t kDefaultClosureBudget = 10;

// Is x in the I-closure (or I*-closure) of A? budget is the number of basis neighborhoods checked.
ClosureResult iClosureMember(const SetDescription& A, const Point& x, const Ideal& I,
                             std::uint64_t budget = kDefaultClosureBudget, Mode mode = Mode::I);

// Grid points k/q outside A whose closure verdict is True; empty means A passes the closedness check.
std::vector<Rational> closureEscapes(const SetDescription& A, const Ideal& I, std::uint64_t q,
                                     std::uint64_t budget = kDefaultClosureBudget, Mode mode = Mode::I);

// "empty", "{p, q, ...}" or intervals joined by 'u', e.g. "(0,1/2] u [3/4,1]".
SetDescription parseSetDescription(std::string_view text);

}  // namespace icomp
