#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "icomp/convergence.hpp"

namespace icomp {

inline constexpr std::uint64_t kDefaultExtractDepth = 12;

struct BisectTrace {
  // Cell J_k per level, one closed interval per real coordinate.
  std::vector<std::vector<Interval>> cells;
  std::vector<IndexSet> indexSets;
  std::vector<Verdict> verdicts;
  std::vector<std::string> choices;
};

struct ExtractionWitness {
  std::string method;
  IndexSet K;
  Verdict kVerdict;
  Point xi;
  // xi is the exact limit rather than the centre of the last cell.
  bool xiExact = false;
  BisectTrace trace;
  ShrinkWitness shrink;
  ConvergenceReport report;
};

ExtractionWitness bisectExtract(const Sequence& s, const Ideal& I, std::uint64_t depth = kDefaultExtractDepth,
                                std::uint64_t horizon = kDefaultSequenceHorizon);
ExtractionWitness netExtract(const Sequence& s, const Ideal& I, std::uint64_t depth = kDefaultExtractDepth,
                             std::uint64_t horizon = kDefaultSequenceHorizon);
ExtractionWitness productExtract(const Sequence& s, const Ideal& I, std::uint64_t coords,
                                 std::uint64_t horizon = kDefaultSequenceHorizon);

// Finite parts K_m of D_m = {n in K : x_n in V_m} whose union converges classically.
IStarWitness upgradeToStar(const Sequence& s, const ExtractionWitness& w, const Ideal& I, std::uint64_t depth,
                           std::uint64_t horizon = kExtractHorizon);

enum class RefuteMode { DensityBound, BlockRecurrence, CubeBlockRecurrence, CubeDensityDiag };
const char* refuteModeName(RefuteMode m);
RefuteMode parseRefuteMode(std::string_view name);

struct RefuteOptions {
  std::uint64_t horizon = 10000;
  std::vector<Rational> xis;   // default k/12, k = 0..12
  std::vector<Rational> eps;   // default 1/10, 1/20, 1/40
  std::uint64_t diagDepth = 10;
  std::uint64_t diagHorizon = std::uint64_t{1} << 16;
};

struct RefutationRow {
  std::string label;
  Rational measured;
  Rational reference;
  Rational tolerance;
  bool ok = false;
  std::string note;
};

struct Refutation {
  RefuteMode mode = RefuteMode::DensityBound;
  Verdict verdict;
  std::vector<RefutationRow> rows;
};

Refutation refuteNonthinConvergence(const Sequence& s, const Ideal& I, RefuteMode mode,
                                    const RefuteOptions& opts = {});

}  // namespace icomp
