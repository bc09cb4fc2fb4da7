#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "icomp/ideals.hpp"
#include "icomp/sequences.hpp"

namespace icomp {

enum class Mode { I, IStar };
const char* modeName(Mode m);

struct BasisCheck {
  Nbhd nbhd;
  std::string exceptional;
  Verdict verdict;
};

struct ConvergenceReport {
  Mode mode = Mode::I;
  std::string sequence;
  std::string ideal;
  std::string limit;
  std::string schedule;
  std::vector<BasisCheck> perBasis;
  Verdict overall;
};

struct IStarWitness {
  IndexSet M;
  Verdict filterVerdict;
  std::string tailLimitCertificate;
  // The certificate covers every neighborhood, not just the tested ones.
  bool symbolic = false;
  // M itself belongs to the ideal.
  bool thin = false;
  std::vector<std::uint64_t> enumeratedPrefix;
  // Per tested neighborhood: last index of M whose term lies outside it (0 if none).
  std::vector<std::pair<std::string, std::uint64_t>> cuts;
};

inline constexpr std::uint64_t kExtractHorizon = std::uint64_t{1} << 16;

// The ideal a sequence is judged by: I traced on its domain.
Ideal idealOn(const Ideal& I, const IndexSet& domain);

// Limit read off the structure: block-value limit, classical limit or per-component limits.
std::optional<Point> structuralLimit(const Sequence& s);

ConvergenceReport iConverges(const Sequence& s, const Ideal& I, const Point& xi, std::uint64_t depth,
                             std::uint64_t horizon = kDefaultSequenceHorizon);

std::pair<ConvergenceReport, std::optional<IStarWitness>> iStarConverges(
    const Sequence& s, const Ideal& I, const Point& xi, std::uint64_t depth,
    std::uint64_t horizon = kDefaultSequenceHorizon);

// I-convergence from an I*-witness: each exceptional set lies in a finite head of M plus domain \ M.
Verdict iStarToI(const Sequence& s, const IStarWitness& w, const Ideal& I, const Point& xi, std::uint64_t depth,
                 std::uint64_t horizon = kDefaultSequenceHorizon);

// n_1 < ... < n_k with x_{n_j} in the j-th basis neighborhood.
std::vector<std::uint64_t> classicalExtract(const Sequence& s, const Ideal& I, const Point& xi, std::uint64_t k,
                                            std::uint64_t horizon = kExtractHorizon);

// Coordinatewise verdicts for cube and finite-product sequences.
ConvergenceReport productVerdict(const Sequence& s, const Ideal& I, const Point& xi, std::uint64_t coordDepth,
                                 std::uint64_t horizon = kDefaultSequenceHorizon);

}  // namespace icomp
