#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icomp/blockset.hpp"
#include "icomp/natset.hpp"
#include "icomp/spaces.hpp"

namespace icomp {

inline constexpr std::uint64_t kDefaultSequenceHorizon = std::uint64_t{1} << 14;

struct Interval {
  Rational lo, hi;
  bool loOpen = false, hiOpen = false;

  bool contains(const Rational& x) const;
  std::string toString() const;
};

// A condition on sequence values whose preimage the sequence can compute.
struct ValuePredicate {
  enum Kind { InNbhd, InClosed, Equals } kind = InNbhd;
  Nbhd nbhd;
  // One closed interval per real coordinate.
  std::vector<Interval> closed;
  Point point;

  static ValuePredicate in(Nbhd U);
  static ValuePredicate closedInterval(Rational lo, Rational hi);
  static ValuePredicate closedBox(std::vector<Interval> box);
  static ValuePredicate equals(Point p);

  bool holds(const Space& sp, const Point& x) const;
  // The restriction of a box-shaped predicate to one factor.
  ValuePredicate factor(std::size_t i) const;
  std::string toString() const;
};

// Values of a block-constant sequence, v_j on block Δ_j.
class BlockValues {
 public:
  virtual ~BlockValues() = default;
  virtual Point value(std::uint64_t j) const = 0;
  // Limit of v_j as j grows.
  virtual std::optional<Point> limit() const = 0;
  // Exact set of j with pred(v_j).
  virtual BlockSet where(const Space& sp, const ValuePredicate& pred) const = 0;
  virtual std::string describe() const = 0;
};

// v_j = L + sign * scale * w(j + shift), with w(k) = 1/k or 2^-k, plus finitely many overrides.
class MonotoneValues final : public BlockValues {
 public:
  enum Shape { Harmonic, Geometric };
  MonotoneValues(Rational limit, int sign, Rational scale, Shape shape, std::int64_t shift = 0,
                 std::map<std::uint64_t, Rational> overrides = {});

  Point value(std::uint64_t j) const override { return Point::rat(real(j)); }
  Rational real(std::uint64_t j) const;
  std::optional<Point> limit() const override { return Point::rat(limit_); }
  BlockSet where(const Space& sp, const ValuePredicate& pred) const override;
  BlockSet whereInterval(const Interval& I) const;
  std::string describe() const override;
  int sign() const { return sign_; }
  const std::map<std::uint64_t, Rational>& overrides() const { return overrides_; }

 private:
  Rational tailValue(std::uint64_t j) const;
  // Smallest J such that |v_j - L| < delta for all j >= J.
  std::uint64_t settleIndex(const Rational& delta) const;
  BlockSet tailWhere(const Interval& I) const;

  Rational limit_;
  int sign_;
  Rational scale_;
  Shape shape_;
  std::int64_t shift_;
  std::map<std::uint64_t, Rational> overrides_;
};

class ConstantValues final : public BlockValues {
 public:
  explicit ConstantValues(Point p) : p_(std::move(p)) {}
  Point value(std::uint64_t) const override { return p_; }
  std::optional<Point> limit() const override { return p_; }
  BlockSet where(const Space& sp, const ValuePredicate& pred) const override;
  std::string describe() const override { return "constant " + p_.toString(); }

 private:
  Point p_;
};

// Cube values: v_j has coordinates 1..j-1 equal to 1 and all later ones 0.
class StaircaseValues final : public BlockValues {
 public:
  Point value(std::uint64_t j) const override;
  std::optional<Point> limit() const override { return Point::of(CubePoint::ones()); }
  BlockSet where(const Space& sp, const ValuePredicate& pred) const override;
  std::string describe() const override { return "staircase: coordinate i is 1 on blocks j > i"; }
};

struct ExplicitRule {
  std::string name;
  std::function<Point(std::uint64_t)> eval;
  // Exact {n >= 1 : pred(x_n)} when derivable from the formula.
  std::function<std::optional<IndexSet>(const ValuePredicate&)> exactPreimage;
  // Density of {n : pred(x_n)} when known from the structure.
  std::function<std::optional<Rational>(const ValuePredicate&)> preimageDensity;
  // Set when x_n converges classically to this point.
  std::optional<Point> classicalLimit;
};

class Sequence {
 public:
  enum Structure { BlockConstant, Explicit, ProductOf, Restricted };

  Structure structure() const;
  const IndexSet& domain() const;
  const Space& space() const;
  const std::string& name() const;

  Point at(std::uint64_t n) const;

  const BlockValues* blockValues() const;
  const DecompositionPtr& decomposition() const;
  const ExplicitRule* rule() const;
  const std::vector<Sequence>& components() const;
  const Sequence* base() const;

  struct Node;
  explicit Sequence(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const Node> node_;
};

Sequence constantSequence(const Space& sp, const Point& p, IndexSet domain = IndexSet::naturals());
Sequence blockConstant(const Space& sp, std::shared_ptr<const BlockValues> values, DecompositionPtr delta = twoAdic(),
                       IndexSet domain = IndexSet::naturals(), std::string name = "");
Sequence explicitSequence(const Space& sp, ExplicitRule rule, IndexSet domain = IndexSet::naturals());
// x_n = target + offset / n
Sequence approachSequence(const Rational& target, const Rational& offset);
Sequence productOf(std::vector<Sequence> parts);

Point evalAt(const Sequence& s, std::uint64_t n);
Sequence subsequence(const Sequence& s, const IndexSet& K, std::uint64_t checkHorizon = kDefaultSequenceHorizon);
Sequence paperSequence(std::string_view name);

// {n in domain : pred(x_n)}, or its complement in the domain when negate is set.
IndexSet preimage(const Sequence& s, const ValuePredicate& pred, bool negate,
                  std::uint64_t horizon = kDefaultSequenceHorizon);
IndexSet exceptionalSet(const Sequence& s, const Nbhd& U, std::uint64_t horizon = kDefaultSequenceHorizon);

// A block-constant sequence seen through any restrictions.
struct BlockView {
  const BlockValues* values = nullptr;
  DecompositionPtr delta;
  IndexSet domain;
};
std::optional<BlockView> blockView(const Sequence& s);

// Grammar: primary ('|' 'restrict' <indexset>)*, where primary is paper:<name>,
// const <point>, approach(<target>,<offset>), pair(<seq>,<seq>) or
// blocks(harmonic|geometric, <limit>, <sign>, <scale>[, <shift>]).
Sequence parseSequence(std::string_view text);

}  // namespace icomp
