#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace icomp {

struct ChainStats {
  int cases = 0;
  // (case, ideal) pairs with a nonthin domain.
  int tested = 0;
  int starTrue = 0;
  int iTrue = 0;
  int extracted = 0;
  std::vector<std::string> counterexamples;
};

// Generated block-constant sequences judged under fin, density, decA and decB:
// I* True must give I True and an I* to I conversion; I True must give a classical extraction.
ChainStats implicationChainSuite(std::uint64_t seed, int cases, std::uint64_t depth = 10, bool corrupt = false);

struct ClosureStats {
  int instances = 0;
  int checks = 0;
  std::vector<std::string> failures;
};

// Empty set, expansiveness, finite unions and agreement with the classical closure on
// random interval unions, per ideal.
ClosureStats closurePropertySuite(std::uint64_t seed, int instancesPerIdeal, int pointsPerInstance,
                                  bool corrupt = false);

struct SuiteRow {
  std::string id;
  std::string claim;
  bool pass = false;
  std::vector<std::pair<std::string, std::string>> facts;
};

struct SuiteOptions {
  std::uint64_t depth = 10;
  std::uint64_t horizon = 10000;
  // Row id whose generator is replaced by a corrupted one.
  std::string fault;
};

const std::vector<std::string>& suiteRowIds();
std::vector<SuiteRow> verifySuite(const SuiteOptions& opts);

}  // namespace icomp
