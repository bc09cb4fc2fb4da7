#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icomp/blockset.hpp"
#include "icomp/decomposition.hpp"
#include "icomp/numeric.hpp"
#include "icomp/verdict.hpp"

namespace icomp {

inline constexpr std::uint64_t kDefaultSampleHorizon = std::uint64_t{1} << 17;

enum class GeneratorKind { Tail, Progression, Block, BlockTail, BlockProgression };

// One infinite generator of the normal form. Block kinds refer to the
// decomposition of the owning IndexSet.
struct Generator {
  GeneratorKind kind = GeneratorKind::Tail;
  std::uint64_t block = 0;
  Nat start = 1;
  Nat step = 1;

  static Generator tail(Nat n0);
  static Generator ap(Nat a, Nat d);
  static Generator block_(std::uint64_t j);
  static Generator blockTail(std::uint64_t j, Nat n0);
  static Generator blockAp(std::uint64_t j, Nat a, Nat d);

  bool labelled() const { return block != 0; }
  bool operator==(const Generator&) const = default;
};

struct SampledData {
  std::vector<std::uint64_t> members;  // sorted, all <= horizon
  std::uint64_t horizon = 0;
  std::string note;
  // Density known from the structure that produced the sample.
  std::optional<Rational> certifiedDensity;
};

// (finite ∪ generators) ∖ excluded, or an opaque sample known up to a horizon.
class IndexSet {
 public:
  IndexSet();

  static IndexSet empty() { return IndexSet(); }
  static IndexSet finite(std::vector<std::uint64_t> elements);
  static IndexSet naturals();
  static IndexSet tail(std::uint64_t n0);
  static IndexSet ap(std::uint64_t a, std::uint64_t d);
  static IndexSet apNat(Nat a, Nat d);
  static IndexSet block(std::uint64_t j, DecompositionPtr delta = twoAdic());
  static IndexSet blockTail(std::uint64_t j, std::uint64_t n0, DecompositionPtr delta = twoAdic());
  static IndexSet blockAp(std::uint64_t j, std::uint64_t a, std::uint64_t d,
                          DecompositionPtr delta = twoAdic());
  // Union of the blocks in b; falls back to a sample when the tail has no closed form.
  static IndexSet blocks(const BlockSet& b, DecompositionPtr delta = twoAdic(),
                         std::uint64_t fallbackHorizon = kDefaultSampleHorizon);
  static IndexSet normalForm(std::vector<std::uint64_t> finite, std::vector<Generator> gens,
                             std::vector<std::uint64_t> excluded, DecompositionPtr delta = twoAdic());
  static IndexSet sampled(std::vector<std::uint64_t> members, std::uint64_t horizon, std::string note,
                          std::optional<Rational> certifiedDensity = std::nullopt);
  static IndexSet sampleOf(const std::function<bool(std::uint64_t)>& pred, std::uint64_t horizon,
                           std::string note);

  bool isSampled() const { return sampled_ != nullptr; }
  // kNoBound for symbolic forms.
  std::uint64_t horizon() const;
  const std::vector<std::uint64_t>& finitePart() const { return finite_; }
  const std::vector<Generator>& generators() const { return gens_; }
  const std::vector<std::uint64_t>& excluded() const { return excluded_; }
  const DecompositionPtr& decomposition() const { return delta_; }
  const SampledData* sample() const { return sampled_.get(); }
  bool hasGenerators() const { return !gens_.empty(); }

  std::string toString() const;
  bool operator==(const IndexSet& o) const;

 private:
  void normalize();

  std::vector<std::uint64_t> finite_;
  std::vector<Generator> gens_;
  std::vector<std::uint64_t> excluded_;
  DecompositionPtr delta_;
  std::shared_ptr<const SampledData> sampled_;
};

enum class SetOp { Union, Difference, Intersect };
enum class BlockSignature { Empty, FiniteNonempty, Infinite, Unknown };

const char* signatureName(BlockSignature s);

bool contains(const IndexSet& s, std::uint64_t n);
std::uint64_t prefixCount(const IndexSet& s, std::uint64_t N);
std::uint64_t nth(const IndexSet& s, std::uint64_t k);
// Elements of s in [1, N], ascending.
std::vector<std::uint64_t> enumerate(const IndexSet& s, std::uint64_t N);
// First `count` elements (fewer if s is smaller).
std::vector<std::uint64_t> firstElements(const IndexSet& s, std::size_t count);
// Smallest element > n, if any (nullopt also past a sample horizon).
std::optional<std::uint64_t> firstAbove(const IndexSet& s, std::uint64_t n);

IndexSet combine(SetOp op, const IndexSet& s, const IndexSet& t,
                 std::uint64_t fallbackHorizon = kDefaultSampleHorizon);
IndexSet unite(const IndexSet& s, const IndexSet& t);
IndexSet intersect(const IndexSet& s, const IndexSet& t);
IndexSet subtract(const IndexSet& s, const IndexSet& t);

BlockSignature blockSignature(const IndexSet& s, const DecompositionPtr& delta, std::uint64_t j);

Verdict isFiniteSet(const IndexSet& s);
Verdict isEmptySet(const IndexSet& s);
Verdict isSubset(const IndexSet& a, const IndexSet& b);
// Extensional equality (normal forms are not minimal, so == is structural only).
Verdict sameSet(const IndexSet& a, const IndexSet& b);

// Blocks of delta that the generators of s meet infinitely often.
std::optional<BlockSet> infiniteBlocks(const IndexSet& s, const DecompositionPtr& delta);
// Blocks of delta that s meets at all.
std::optional<BlockSet> metBlocks(const IndexSet& s, const DecompositionPtr& delta);
// Per-generator variant of infiniteBlocks.
std::optional<BlockSet> generatorSpread(const Generator& g, const DecompositionPtr& owner,
                                        const DecompositionPtr& delta);

// Exact form of a generator as a progression when the decomposition allows it.
struct GeneratorForm {
  enum State { Empty, Known, Opaque } state = Opaque;
  Progression p;
};
GeneratorForm generatorForm(const Generator& g, const Decomposition& delta);
bool generatorContains(const Generator& g, const Decomposition& delta, std::uint64_t n);

std::string toString(const Generator& g, const DecompositionPtr& delta);
IndexSet parseIndexSet(std::string_view text, DecompositionPtr delta = twoAdic());

}  // namespace icomp
