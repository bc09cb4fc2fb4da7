#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "icomp/blockset.hpp"
#include "icomp/numeric.hpp"

namespace icomp {

// {first + k*step : k >= 0}
struct Progression {
  Nat first = 1;
  Nat step = 1;

  bool contains(const Nat& n) const { return n >= first && (n - first) % step == 0; }
  // |P ∩ [1, N]|
  Nat countUpTo(const Nat& N) const { return N < first ? Nat(0) : Nat((N - first) / step + 1); }
  bool operator==(const Progression&) const = default;
};

// Intersection by the Chinese remainder theorem; nullopt when empty.
std::optional<Progression> intersect(const Progression& p, const Progression& q);
bool isSubprogression(const Progression& p, const Progression& q);

// Partition of the positive naturals into infinitely many infinite blocks Δ_1, Δ_2, ...
class Decomposition {
 public:
  virtual ~Decomposition() = default;
  virtual const std::string& name() const = 0;
  virtual std::uint64_t blockOf(std::uint64_t n) const = 0;

  // Δ_j as a progression when the decomposition is arithmetic.
  virtual std::optional<Progression> blockProgression(std::uint64_t) const { return std::nullopt; }
  // Δ_j ∪ Δ_{j+1} ∪ ... as a progression.
  virtual std::optional<Progression> tailProgression(std::uint64_t) const { return std::nullopt; }
  // Blocks met by an infinite progression; every met block is met infinitely often.
  virtual std::optional<BlockSet> spread(const Progression&) const { return std::nullopt; }
  virtual std::optional<Rational> blockDensity(std::uint64_t) const { return std::nullopt; }

  bool arithmetic() const { return blockProgression(1).has_value(); }
};

using DecompositionPtr = std::shared_ptr<const Decomposition>;

// Δ_j = odd multiples of 2^(j-1).
DecompositionPtr twoAdic();

// A decomposition known only through its block map.
DecompositionPtr functionDecomposition(std::string name, std::function<std::uint64_t(std::uint64_t)> blockOf);

bool sameDecomposition(const DecompositionPtr& a, const DecompositionPtr& b);

}  // namespace icomp
