#include "icomp/blockset.hpp"

#include <algorithm>

#include "icomp/error.hpp"
#include "icomp/numeric.hpp"

namespace icomp {

BlockSet BlockSet::all() { return from(1); }
BlockSet BlockSet::single(std::uint64_t j) { return range(j, j); }
BlockSet BlockSet::from(std::uint64_t lo) { return range(lo, kNoBound); }

BlockSet BlockSet::range(std::uint64_t lo, std::uint64_t hi) {
  BlockSet b;
  if (lo == 0) lo = 1;
  if (lo <= hi) b.ranges_.push_back({lo, hi});
  return b;
}

BlockSet BlockSet::of(std::vector<std::uint64_t> js) {
  BlockSet b;
  for (auto j : js)
    if (j >= 1) b.ranges_.push_back({j, j});
  b.normalize();
  return b;
}

void BlockSet::normalize() {
  std::sort(ranges_.begin(), ranges_.end());
  std::vector<Range> out;
  for (const auto& r : ranges_) {
    if (!out.empty() && (out.back().second == kNoBound || out.back().second + 1 >= r.first)) {
      out.back().second = std::max(out.back().second, r.second);
    } else {
      out.push_back(r);
    }
  }
  ranges_ = std::move(out);
}

bool BlockSet::isFinite() const { return ranges_.empty() || ranges_.back().second != kNoBound; }

bool BlockSet::contains(std::uint64_t j) const {
  for (const auto& r : ranges_)
    if (j >= r.first && j <= r.second) return true;
  return false;
}

std::uint64_t BlockSet::count() const {
  if (!isFinite()) fail(ErrorKind::OutOfRange, "count of an infinite block set");
  std::uint64_t c = 0;
  for (const auto& r : ranges_) c += r.second - r.first + 1;
  return c;
}

std::optional<std::uint64_t> BlockSet::first() const {
  if (ranges_.empty()) return std::nullopt;
  return ranges_.front().first;
}

std::optional<std::uint64_t> BlockSet::last() const {
  if (ranges_.empty() || !isFinite()) return std::nullopt;
  return ranges_.back().second;
}

std::optional<std::uint64_t> BlockSet::firstFrom(std::uint64_t j) const {
  for (const auto& r : ranges_) {
    if (r.second < j) continue;
    return std::max(r.first, j);
  }
  return std::nullopt;
}

std::optional<std::uint64_t> BlockSet::next(std::uint64_t j) const {
  if (j == kNoBound) return std::nullopt;
  return firstFrom(j + 1);
}

BlockSet BlockSet::unite(const BlockSet& o) const {
  BlockSet b = *this;
  b.ranges_.insert(b.ranges_.end(), o.ranges_.begin(), o.ranges_.end());
  b.normalize();
  return b;
}

BlockSet BlockSet::intersect(const BlockSet& o) const {
  BlockSet b;
  std::size_t i = 0, k = 0;
  while (i < ranges_.size() && k < o.ranges_.size()) {
    std::uint64_t lo = std::max(ranges_[i].first, o.ranges_[k].first);
    std::uint64_t hi = std::min(ranges_[i].second, o.ranges_[k].second);
    if (lo <= hi) b.ranges_.push_back({lo, hi});
    if (ranges_[i].second < o.ranges_[k].second) ++i;
    else ++k;
  }
  return b;
}

BlockSet BlockSet::complement() const {
  BlockSet b;
  std::uint64_t cursor = 1;
  for (const auto& r : ranges_) {
    if (r.first > cursor) b.ranges_.push_back({cursor, r.first - 1});
    if (r.second == kNoBound) return b;
    cursor = r.second + 1;
  }
  b.ranges_.push_back({cursor, kNoBound});
  return b;
}

std::vector<std::uint64_t> BlockSet::members(std::uint64_t limit) const {
  std::vector<std::uint64_t> out;
  for (const auto& r : ranges_) {
    for (std::uint64_t j = r.first; out.size() < limit; ++j) {
      out.push_back(j);
      if (j == r.second) break;
    }
    if (out.size() >= limit) break;
  }
  return out;
}

std::string BlockSet::toString() const {
  std::string s = "{";
  for (std::size_t i = 0; i < ranges_.size(); ++i) {
    if (i) s += ", ";
    const auto& r = ranges_[i];
    if (r.second == kNoBound) s += std::to_string(r.first) + "..";
    else if (r.first == r.second) s += std::to_string(r.first);
    else s += std::to_string(r.first) + ".." + std::to_string(r.second);
  }
  return s + "}";
}

}  // namespace icomp
