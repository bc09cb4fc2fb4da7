// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any line fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "icomp/closure.hpp"
#include "icomp/compactness.hpp"
#include "icomp/density.hpp"
#include "icomp/error.hpp"
#include "icomp/suite.hpp"
#include "oracles.hpp"
#include "run_cli.hpp"

using namespace icomp;

namespace {

// Pinned thresholds.
constexpr double kRuntimeLimitSeconds = 10.0;
const Rational kUdTolerance(2, 100);          // hit-set density vs 2*eps at N = 10^4
constexpr std::uint64_t kUdHorizon = 10000;
const Rational kDiagTolerance = pow2(-8);     // d(A_m) vs 2^-m at N = 2^16
constexpr std::uint64_t kDiagHorizon = 1 << 16;
const Rational kDensityAgreement = pow2(-8);  // exact vs prefix density at N = 2^16
constexpr std::uint64_t kOracleHorizon = 100000;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::optional<ErrorKind> raised(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

double seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

void criterion1(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  Sequence s = paperSequence("inverseBlocks");
  auto w = bisectExtract(s, Ideal::decB(), 10);
  o.require(w.kVerdict.isFalse(), "K certified nonthin");
  o.require(w.report.overall.isTrue(), "I/K-convergence certified");
  o.require(w.xi.kind == Point::Real && absolute(w.xi.value) <= pow2(-10), "|xi| <= 2^-10");
  auto up = raised([&] { upgradeToStar(s, w, Ideal::decB(), 4); });
  o.require(up == ErrorKind::UnsupportedShrink, "upgradeToStar raises UnsupportedShrink");
  auto ref = refuteNonthinConvergence(s, Ideal::decB(), RefuteMode::BlockRecurrence);
  o.require(ref.verdict.isTrue(), "blockRecurrence certificate");
  double t = seconds(t0);
  o.require(t < kRuntimeLimitSeconds, "runtime");
  std::string k = w.K.toString();
  if (k.size() > 60) k = k.substr(0, 57) + "...";
  o.detail << "K=" << k << " xi=" << w.xi.toString() << " upgrade="
           << (up ? errorName(*up) : "succeeded") << " refutation=" << truthName(ref.verdict.value) << " time=" << t
           << "s";
}

void criterion2(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  Sequence s = paperSequence("udSequence");
  std::vector<Rational> x(kUdHorizon + 1);
  for (std::uint64_t n = 1; n <= kUdHorizon; ++n) x[n] = s.at(n).value;
  int rows = 0, within = 0;
  Rational worst = 0;
  for (int k = 0; k <= 12; ++k)
    for (const Rational& eps : {Rational(1, 10), Rational(1, 20)}) {
      Rational xi(k, 12);
      if (xi < eps || xi > 1 - eps) continue;
      std::uint64_t hits = 0;
      for (std::uint64_t n = 1; n <= kUdHorizon; ++n) hits += absolute(x[n] - xi) < eps;
      Rational density(static_cast<std::int64_t>(hits), static_cast<std::int64_t>(kUdHorizon));
      Rational dev = absolute(density - 2 * eps);
      worst = std::max(worst, dev);
      ++rows;
      within += dev <= kUdTolerance;
    }
  o.require(rows > 0 && within == rows, "every interior hit density within 0.02 of 2*eps");
  auto bis = raised([&] { bisectExtract(s, Ideal::density(), 10); });
  o.require(bis == ErrorKind::UnsupportedShrink, "bisectExtract under density raises UnsupportedShrink");
  double t = seconds(t0);
  o.require(t < kRuntimeLimitSeconds, "runtime");
  o.detail << within << "/" << rows << " rows within " << toString(kUdTolerance) << ", worst deviation "
           << toDecimal(worst, 4) << ", bisection=" << (bis ? errorName(*bis) : "succeeded") << " time=" << t << "s";
}

void criterion3(Outcome& o) {
  Sequence s = paperSequence("prodDiagDensity");
  RefuteOptions ro;
  ro.diagDepth = 10;
  ro.diagHorizon = kDiagHorizon;
  auto ref = refuteNonthinConvergence(s, Ideal::density(), RefuteMode::CubeDensityDiag, ro);
  o.require(ref.rows.size() == 10, "ten chain levels");
  std::vector<std::string> off;
  for (std::size_t i = 0; i < ref.rows.size(); ++i) {
    int m = static_cast<int>(i) + 1;
    const Rational& d = ref.rows[i].measured;
    o.detail << "m=" << m << ":" << toDecimal(d, 5) << " ";
    if (absolute(d - pow2(-m)) > kDiagTolerance) off.push_back(std::to_string(m));
  }
  std::string offList;
  for (const auto& m : off) offList += (offList.empty() ? "" : ",") + m;
  o.require(off.empty(), "d(A_m) within 2^-8 of 2^-m, off at m=" + offList);
  auto prod = raised([&] { productExtract(s, Ideal::density(), 4); });
  o.require(prod == ErrorKind::UnsupportedShrink, "productExtract under density raises UnsupportedShrink");
  o.detail << " decay certificate=" << truthName(ref.verdict.value)
           << " product=" << (prod ? errorName(*prod) : "succeeded");
}

void criterion4(Outcome& o) {
  Sequence s = paperSequence("prodDiagBlocks");
  auto w = productExtract(s, Ideal::decB(), 6);
  o.require(w.kVerdict.isFalse(), "B certified nonthin");
  bool ones = w.xi.kind == Point::Cube && sameCubePoint(w.xi.cube, CubePoint::ones()).value_or(false);
  o.require(ones, "limit is all ones");
  bool coords = w.report.perBasis.size() == 6;
  for (const auto& b : w.report.perBasis) coords = coords && b.verdict.isTrue();
  o.require(coords, "six coordinate verdicts True");
  auto ref = refuteNonthinConvergence(s, Ideal::decB(), RefuteMode::CubeBlockRecurrence);
  o.require(ref.verdict.isTrue(), "cubeBlockRecurrence certificate");
  o.detail << "B=" << w.K.toString() << " xi=" << w.xi.toString() << " coordinates=" << w.report.perBasis.size()
           << " refutation=" << truthName(ref.verdict.value);
}

void criterion5(Outcome& o) {
  std::vector<IndexSet> As{IndexSet::naturals(), IndexSet::ap(2, 2), IndexSet::ap(1, 3),
                           IndexSet::blocks(BlockSet::from(3))};
  o.require(shrinkA(Ideal::decA(), As).unionVerdict.isFalse(), "shrinkA on decA");
  for (const Ideal& id : {Ideal::density(), Ideal::fin(), Ideal::decB()})
    o.require(raised([&] { shrinkA(id, As); }) == ErrorKind::UnsupportedShrink, "shrinkA rejects " + id.toString());
  for (const Ideal& id : {Ideal::decA(), Ideal::decB()})
    o.require(shrinkB(id, As).unionVerdict.isFalse(), "shrinkB on " + id.toString());
  for (const Ideal& id : {Ideal::density(), Ideal::fin()})
    o.require(raised([&] { shrinkB(id, As); }) == ErrorKind::UnsupportedShrink, "shrinkB rejects " + id.toString());
  o.detail << "A: decA only; B: decA and decB; density and fin rejected by both";
}

void criterion6(Outcome& o) {
  auto st = implicationChainSuite(424242, 100, 10);
  o.require(st.cases == 100, "100 generated cases");
  o.require(st.counterexamples.empty(),
            "no counterexample" + (st.counterexamples.empty() ? "" : ": " + st.counterexamples.front()));
  o.detail << "cases=" << st.cases << " pairs=" << st.tested << " istar=" << st.starTrue << " i=" << st.iTrue
           << " extracted=" << st.extracted;
}

void criterion7(Outcome& o) {
  std::mt19937_64 rng(20240601);
  int sets = 0, densities = 0;
  for (int i = 0; i < 300; ++i) {
    oracle::Sample s = oracle::randomSet(rng, i % 3 + 1);
    if (s.set.isSampled()) continue;
    ++sets;
    std::uint64_t c = 0;
    bool ok = true;
    for (std::uint64_t n = 1; n <= kOracleHorizon && ok; ++n) {
      bool in = s.pred(n);
      c += in;
      ok = contains(s.set, n) == in;
      if (ok && (n <= 2000 || n % 977 == 0 || n == kOracleHorizon)) ok = prefixCount(s.set, n) == c;
    }
    o.require(ok, "prefix counts of " + s.expr);
    if (auto d = exactDensity(s.set)) {
      ++densities;
      o.require(absolute(*d - prefixDensity(s.set, 1 << 16)) <= kDensityAgreement, "density of " + s.expr);
    }
  }

  // Exceptional sets of the named and generated sequences on basis neighborhoods.
  const Space sp = Space::unitInterval();
  std::vector<std::pair<Sequence, Point>> seqs{
      {paperSequence("inverseBlocks"), Point::rat(0)},
      {approachSequence(Rational(1, 3), Rational(1, 4)), Point::rat(Rational(1, 3))},
      {constantSequence(sp, Point::rat(Rational(2, 5))), Point::rat(Rational(1, 2))},
      {blockConstant(sp, std::make_shared<MonotoneValues>(Rational(1, 2), -1, Rational(1, 2), MonotoneValues::Geometric)),
       Point::rat(Rational(1, 2))}};
  int exc = 0;
  for (const auto& [seq, xi] : seqs)
    for (const Nbhd& U : basisFamily(sp, xi, 6)) {
      IndexSet E = exceptionalSet(seq, U);
      if (E.isSampled()) continue;
      ++exc;
      std::uint64_t c = 0;
      bool ok = true;
      for (std::uint64_t n = 1; n <= kOracleHorizon && ok; ++n) {
        bool out = !inNbhd(sp, seq.at(n), U);
        c += out;
        ok = contains(E, n) == out;
        if (ok && n % 1000 == 0) ok = prefixCount(E, n) == c;
      }
      o.require(ok, "exceptional set of " + seq.name() + " on " + U.toString());
    }
  o.require(sets > 0 && exc > 0, "non-empty corpus");
  o.detail << sets << " index sets, " << densities << " exact densities, " << exc << " exceptional sets to N="
           << kOracleHorizon;
}

void criterion8(Outcome& o) {
  auto st = closurePropertySuite(20241014, 50, 10);
  o.require(st.instances == 200, "50 instances for each of 4 ideals");
  o.require(st.failures.empty(), st.failures.empty() ? "no failures" : st.failures.front());
  o.detail << "instances=" << st.instances << " checks=" << st.checks << " failures=" << st.failures.size();
}

void criterion9(Outcome& o) {
  auto a = cli::run({"verify-paper", "--format", "structured"});
  auto b = cli::run({"verify-paper", "--format", "structured"});
  o.require(!a.out.empty(), "non-empty report");
  o.require(a.out == b.out, "byte-identical reports");
  o.detail << "report bytes=" << a.out.size() << " exit codes=" << a.code << "," << b.code;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)(Outcome&)>> criteria{
      {"inverse-blocks extraction under decB", criterion1},
      {"equidistributed hit-set density bound", criterion2},
      {"diagonal cube density chain 2^-m", criterion3},
      {"staircase cube extraction under decB", criterion4},
      {"shrinking selectors", criterion5},
      {"implication chain suite", criterion6},
      {"oracle equivalence", criterion7},
      {"closure property suite", criterion8},
      {"verify-paper determinism", criterion9}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const Error& e) {
      o.pass = false;
      o.detail << " [error: " << errorName(e.kind()) << ": " << e.detail() << "]";
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail.str()
              << "\n";
  }
  return failed ? 1 : 0;
}
