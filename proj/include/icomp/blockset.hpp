#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace icomp {

// A set of block indices j >= 1 stored as disjoint sorted closed ranges;
// the last range may be unbounded (hi == kNoBound).
class BlockSet {
 public:
  using Range = std::pair<std::uint64_t, std::uint64_t>;

  BlockSet() = default;
  static BlockSet all();
  static BlockSet single(std::uint64_t j);
  static BlockSet range(std::uint64_t lo, std::uint64_t hi);
  static BlockSet from(std::uint64_t lo);
  static BlockSet of(std::vector<std::uint64_t> js);

  bool empty() const { return ranges_.empty(); }
  bool isFinite() const;
  bool contains(std::uint64_t j) const;
  // Number of blocks; only for finite sets.
  std::uint64_t count() const;
  std::optional<std::uint64_t> first() const;
  std::optional<std::uint64_t> last() const;
  // Smallest member strictly greater than j.
  std::optional<std::uint64_t> next(std::uint64_t j) const;
  // Smallest member >= j.
  std::optional<std::uint64_t> firstFrom(std::uint64_t j) const;

  BlockSet unite(const BlockSet& o) const;
  BlockSet intersect(const BlockSet& o) const;
  BlockSet complement() const;
  BlockSet minus(const BlockSet& o) const { return intersect(o.complement()); }

  const std::vector<Range>& ranges() const { return ranges_; }
  // Explicit members, at most limit of them.
  std::vector<std::uint64_t> members(std::uint64_t limit) const;

  std::string toString() const;
  bool operator==(const BlockSet&) const = default;

 private:
  void normalize();
  std::vector<Range> ranges_;
};

}  // namespace icomp
