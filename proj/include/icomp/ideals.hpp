#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "icomp/natset.hpp"
#include "icomp/verdict.hpp"

namespace icomp {

enum class IdealKind { Fin, Density, DecA, DecB, Restriction };

class Ideal {
 public:
  static Ideal fin();
  static Ideal density();
  // Sets meeting finitely many blocks.
  static Ideal decA(DecompositionPtr delta = twoAdic());
  // Sets meeting only finitely many blocks in an infinite set.
  static Ideal decB(DecompositionPtr delta = twoAdic());

  IdealKind kind() const { return kind_; }
  // Innermost non-restriction family.
  IdealKind family() const;
  // Decomposition of a DecA/DecB family (also through restrictions); null otherwise.
  const DecompositionPtr& decomposition() const;
  const Ideal* base() const { return base_.get(); }
  const IndexSet* support() const { return support_.get(); }
  bool supportsShrinkA() const;
  bool supportsShrinkB() const;
  // For restrictions: True when the support is not a member of the base.
  const Verdict& nontrivial() const { return nontrivial_; }

  std::string toString() const;

 private:
  friend Ideal restrict(const Ideal& I, const IndexSet& M);
  IdealKind kind_ = IdealKind::Fin;
  DecompositionPtr delta_;
  std::shared_ptr<const Ideal> base_;
  std::shared_ptr<const IndexSet> support_;
  Verdict nontrivial_ = Verdict::yes("the full index set is not a member");
};

Ideal restrict(const Ideal& I, const IndexSet& M);
Verdict member(const Ideal& I, const IndexSet& A);

inline constexpr std::uint64_t kSubsetCheckDepth = std::uint64_t{1} << 14;

// member(I, domain \ A), after checking A ⊆ domain on [1, checkDepth].
Verdict filterMember(const Ideal& I, const IndexSet& A, const IndexSet& domain,
                     std::uint64_t checkDepth = kSubsetCheckDepth);

struct ShrinkWitness {
  std::vector<IndexSet> parts;
  IndexSet unionSet;
  std::vector<Verdict> perPartCertificates;
  Verdict unionVerdict;
  // Blocks chosen per part (shrinkB) or blocks hit per part (shrinkA).
  std::vector<std::vector<std::uint64_t>> blocks;
  // How the union extends past the listed parts.
  std::string continuation;
};

// Finite B_i ⊆ A_i hitting fresh blocks; the list is a prefix whose last set repeats.
ShrinkWitness shrinkA(const Ideal& I, const std::vector<IndexSet>& As, std::vector<std::uint64_t> sizes = {});
// B_i = A_i ∩ Δ_j for the lowest fresh block j met infinitely by A_i.
ShrinkWitness shrinkB(const Ideal& I, const std::vector<IndexSet>& As);

Ideal parseIdeal(std::string_view text);

}  // namespace icomp
