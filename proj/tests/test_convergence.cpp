#include <doctest.h>

#include <random>

#include "icomp/convergence.hpp"
#include "icomp/density.hpp"
#include "icomp/error.hpp"
#include "oracles.hpp"

using namespace icomp;

namespace {

const Space I = Space::unitInterval();
const Space C = Space::cantorCube();

std::vector<Ideal> allIdeals() { return {Ideal::fin(), Ideal::density(), Ideal::decA(), Ideal::decB()}; }

ErrorKind kindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Overflow;
}

Sequence tailBlocks() { return subsequence(paperSequence("inverseBlocks"), subtract(IndexSet::naturals(), IndexSet::block(1))); }

}  // namespace

TEST_CASE("I-convergence verdicts") {
  auto r = iConverges(tailBlocks(), Ideal::decB(), Point::rat(0), 8);
  CHECK(r.overall.isTrue());
  CHECK(r.perBasis.size() == 8);
  for (const auto& b : r.perBasis) CHECK(b.verdict.isTrue());

  for (const Ideal& id : allIdeals()) {
    auto c = iConverges(constantSequence(I, Point::rat(Rational(2, 5))), id, Point::rat(Rational(2, 5)), 5);
    CHECK(c.overall.isTrue());
  }

  auto u = iConverges(paperSequence("udSequence"), Ideal::density(), Point::rat(Rational(1, 2)), 6);
  CHECK(u.overall.isFalse());
  bool sawEighth = false;
  for (const auto& b : u.perBasis) {
    if (b.nbhd.toString() != "ball(1/2, 1/8)") continue;
    sawEighth = true;
    CHECK(b.verdict.isFalse());
    IndexSet E = exceptionalSet(paperSequence("udSequence"), b.nbhd, 10000);
    CHECK(*E.sample()->certifiedDensity == Rational(3, 4));
    CHECK(prefixDensity(E, 10000) > Rational(74, 100));
    CHECK(prefixDensity(E, 10000) < Rational(76, 100));
  }
  CHECK(sawEighth);

  // Values tend to 0 but every block is infinite, so Fin and Density fail.
  auto f = iConverges(paperSequence("inverseBlocks"), Ideal::fin(), Point::rat(0), 3);
  CHECK(f.overall.isFalse());
  auto d = iConverges(paperSequence("inverseBlocks"), Ideal::density(), Point::rat(0), 3);
  CHECK(d.overall.isFalse());
  // Wrong limit under DecB.
  CHECK(iConverges(paperSequence("inverseBlocks"), Ideal::decB(), Point::rat(Rational(1, 2)), 4).overall.isFalse());
}

TEST_CASE("I*-convergence verdicts") {
  auto [r, w] = iStarConverges(paperSequence("inverseBlocks"), Ideal::decB(), Point::rat(0), 6);
  CHECK(r.overall.isFalse());
  CHECK(r.overall.rule.find("every M in the dual filter") != std::string::npos);
  CHECK_FALSE(w);

  auto [c, cw] = iStarConverges(constantSequence(I, Point::rat(Rational(1, 3))), Ideal::fin(), Point::rat(Rational(1, 3)), 4);
  CHECK(c.overall.isTrue());
  REQUIRE(cw);
  CHECK(sameSet(cw->M, IndexSet::naturals()).isTrue());
  CHECK(cw->filterVerdict.isTrue());
  CHECK_FALSE(cw->thin);

  Sequence b5 = subsequence(paperSequence("inverseBlocks"), IndexSet::block(5));
  auto [f, fw] = iStarConverges(b5, Ideal::decB(), Point::rat(Rational(1, 5)), 4);
  CHECK(f.overall.isTrue());
  REQUIRE(fw);
  CHECK(sameSet(fw->M, IndexSet::block(5)).isTrue());
  CHECK(fw->thin);

  // Finitely many bad blocks can be discarded under DecB but not under Fin.
  auto vals = std::make_shared<MonotoneValues>(Rational(1, 2), 0, Rational(0), MonotoneValues::Harmonic, 0,
                                               std::map<std::uint64_t, Rational>{{1, 0}, {3, 1}});
  Sequence s = blockConstant(I, vals);
  auto [g, gw] = iStarConverges(s, Ideal::decB(), Point::rat(Rational(1, 2)), 4);
  CHECK(g.overall.isTrue());
  REQUIRE(gw);
  CHECK(sameSet(gw->M, subtract(IndexSet::naturals(), unite(IndexSet::block(1), IndexSet::block(3)))).isTrue());
  CHECK(iStarConverges(s, Ideal::fin(), Point::rat(Rational(1, 2)), 4).first.overall.isFalse());
  CHECK(iStarConverges(s, Ideal::density(), Point::rat(Rational(1, 2)), 4).first.overall.isFalse());
}

TEST_CASE("from I* witnesses to I-convergence") {
  Sequence c = constantSequence(I, Point::rat(Rational(1, 3)));
  auto [r, w] = iStarConverges(c, Ideal::decB(), Point::rat(Rational(1, 3)), 4);
  REQUIRE(w);
  Verdict v = iStarToI(c, *w, Ideal::decB(), Point::rat(Rational(1, 3)), 6);
  CHECK(v.isTrue());
  CHECK(v.trace.at(1).find("p_0") != std::string::npos);

  IStarWitness bad = *w;
  bad.M = IndexSet::block(1);
  CHECK(kindOf([&] { iStarToI(c, bad, Ideal::decB(), Point::rat(Rational(1, 3)), 4); }) == ErrorKind::WitnessInvalid);

  // M = the whole domain Δ3 ∪ Δ4 ∪ ... repeats 1/3 infinitely often, so no head covers E_U.
  IndexSet K = IndexSet::blocks(BlockSet::from(3));
  Sequence t = subsequence(paperSequence("inverseBlocks"), K);
  IStarWitness m;
  m.M = K;
  m.symbolic = true;
  CHECK(kindOf([&] { iStarToI(t, m, Ideal::decB(), Point::rat(0), 4); }) == ErrorKind::WitnessInvalid);

  // A witness from the engine always converts.
  auto vals = std::make_shared<MonotoneValues>(Rational(1, 4), 0, Rational(0), MonotoneValues::Geometric, 0,
                                               std::map<std::uint64_t, Rational>{{2, 1}, {5, 0}});
  Sequence g = blockConstant(I, vals);
  auto [gr, gw] = iStarConverges(g, Ideal::decA(), Point::rat(Rational(1, 4)), 6);
  REQUIRE(gw);
  CHECK(iStarToI(g, *gw, Ideal::decA(), Point::rat(Rational(1, 4)), 8).isTrue());
}

TEST_CASE("classical extraction") {
  auto idx = classicalExtract(constantSequence(I, Point::rat(Rational(1, 2))), Ideal::decB(), Point::rat(Rational(1, 2)), 5);
  CHECK(idx == std::vector<std::uint64_t>{1, 2, 3, 4, 5});

  Sequence t = tailBlocks();
  auto e = classicalExtract(t, Ideal::decB(), Point::rat(0), 3);
  REQUIRE(e.size() == 3);
  for (std::size_t j = 0; j < 3; ++j) {
    Rational v(1, oracle::block2(e[j]));
    CHECK(v < Rational(1, std::int64_t{1} << (j + 1)));
    if (j) CHECK(e[j] > e[j - 1]);
  }
  CHECK(e == std::vector<std::uint64_t>{4, 16, 256});

  CHECK(kindOf([&] {
          classicalExtract(paperSequence("udSequence"), Ideal::density(), Point::rat(Rational(1, 2)), 3);
        }) == ErrorKind::ExtractionStalled);
}

TEST_CASE("coordinatewise verdicts") {
  Sequence pb = paperSequence("prodDiagBlocks");
  Sequence tail = subsequence(pb, subtract(IndexSet::naturals(), IndexSet::block(1)));
  auto r = productVerdict(tail, Ideal::decB(), Point::of(CubePoint::ones()), 6);
  CHECK(r.overall.isTrue());
  REQUIRE(r.perBasis.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(r.perBasis[i].verdict.isTrue());
    IndexSet E = exceptionalSet(tail, r.perBasis[i].nbhd);
    CHECK(sameSet(E, IndexSet::blocks(BlockSet::range(2, i + 1))).isTrue());
  }

  auto full = productVerdict(pb, Ideal::decB(), Point::of(CubePoint::ones()), 6);
  CHECK(full.perBasis[0].verdict.isTrue());
  CHECK(sameSet(exceptionalSet(pb, full.perBasis[0].nbhd), IndexSet::block(1)).isTrue());
  CHECK(full.overall.isTrue());

  // On M = Δ1 ∪ Δ2 the traced ideal is trivial, since M itself lies in DecB.
  IndexSet M = unite(IndexSet::block(1), IndexSet::block(2));
  Sequence onM = subsequence(pb, M);
  auto tm = productVerdict(onM, Ideal::decB(), Point::of(CubePoint::ones()), 6);
  CHECK(restrict(Ideal::decB(), M).nontrivial().isFalse());
  CHECK(sameSet(exceptionalSet(onM, Nbhd::cylinder({{2, true}})), M).isTrue());
  CHECK(tm.perBasis[1].verdict.isTrue());

  auto cst = productVerdict(constantSequence(C, Point::of(CubePoint::eventually({true, false}, true))), Ideal::fin(),
                            Point::of(CubePoint::eventually({true, false}, true)), 8);
  CHECK(cst.overall.isTrue());

  CHECK(kindOf([&] { productVerdict(paperSequence("inverseBlocks"), Ideal::decB(), Point::rat(0), 3); }) ==
        ErrorKind::ShapeMismatch);

  // The density diagonal has each coordinate off on half the indices.
  auto dd = productVerdict(paperSequence("prodDiagDensity"), Ideal::density(), Point::of(CubePoint::ones()), 4);
  CHECK(dd.overall.isFalse());

  auto pair = productOf({tailBlocks(), constantSequence(I, Point::rat(Rational(1, 2)), tailBlocks().domain())});
  auto pr = productVerdict(pair, Ideal::decB(), Point::tuple({Point::rat(0), Point::rat(Rational(1, 2))}), 5);
  CHECK(pr.overall.isTrue());
}

TEST_CASE("cylinder exceptional sets are unions of coordinate ones") {
  std::mt19937_64 rng(11);
  const std::uint64_t N = 10000;
  for (const char* name : {"prodDiagBlocks", "prodDiagDensity"}) {
    Sequence s = paperSequence(name);
    for (int trial = 0; trial < 30; ++trial) {
      std::map<std::uint64_t, bool> cons;
      int d = std::uniform_int_distribution<int>(1, 4)(rng);
      for (int k = 0; k < d; ++k)
        cons[std::uniform_int_distribution<std::uint64_t>(1, 9)(rng)] = std::uniform_int_distribution<int>(0, 1)(rng);
      auto whole = enumerate(exceptionalSet(s, Nbhd::cylinder(cons), N), N);
      std::vector<bool> mark(N + 1, false);
      for (const auto& [i, b] : cons)
        for (std::uint64_t n : enumerate(exceptionalSet(s, Nbhd::cylinder({{i, b}}), N), N)) mark[n] = true;
      std::vector<std::uint64_t> uni;
      for (std::uint64_t n = 1; n <= N; ++n)
        if (mark[n]) uni.push_back(n);
      REQUIRE(whole == uni);
    }
  }
}

TEST_CASE("verdicts are monotone in depth") {
  std::vector<std::pair<Sequence, Point>> cases{
      {paperSequence("udSequence"), Point::rat(Rational(1, 2))},
      {paperSequence("inverseBlocks"), Point::rat(Rational(1, 3))},
      {paperSequence("inverseBlocks"), Point::rat(0)},
      {approachSequence(Rational(1, 4), Rational(1, 8)), Point::rat(Rational(1, 4))}};
  for (const auto& [s, xi] : cases)
    for (const Ideal& id : allIdeals()) {
      bool wasFalse = false;
      for (std::uint64_t d = 1; d <= 8; ++d) {
        auto r = iConverges(s, id, xi, d);
        if (wasFalse) CHECK(r.overall.isFalse());
        wasFalse = r.overall.isFalse();
      }
    }
}

TEST_CASE("classical convergence upgrades for every ideal") {
  std::vector<std::pair<Sequence, Point>> cases{
      {constantSequence(I, Point::rat(Rational(5, 7))), Point::rat(Rational(5, 7))},
      {approachSequence(Rational(1, 2), Rational(-1, 2)), Point::rat(Rational(1, 2))},
      {approachSequence(0, Rational(1, 3)), Point::rat(0)}};
  // Block values equal the limit except on blocks the domain meets finitely.
  auto vals = std::make_shared<MonotoneValues>(Rational(1, 3), 0, Rational(0), MonotoneValues::Harmonic, 0,
                                               std::map<std::uint64_t, Rational>{{1, 1}, {2, 0}});
  IndexSet dom = unite(subtract(IndexSet::naturals(), unite(IndexSet::block(1), IndexSet::block(2))),
                       IndexSet::finite({1, 3, 6}));
  cases.push_back({subsequence(blockConstant(I, vals), dom), Point::rat(Rational(1, 3))});
  for (const auto& [s, xi] : cases)
    for (const Ideal& id : allIdeals()) {
      INFO(s.name(), " under ", id.toString());
      CHECK(iConverges(s, id, xi, 6).overall.isTrue());
      CHECK(iStarConverges(s, id, xi, 6).first.overall.isTrue());
    }
}

TEST_CASE("implication chain on generated block-constant sequences") {
  std::mt19937_64 rng(424242);
  int tested = 0, starTrue = 0, iTrue = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto r = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    Rational L(r(0, 8), 8);
    int sign = L == 0 ? 1 : L == 1 ? -1 : (r(0, 1) ? 1 : -1);
    Rational scale = std::min(Rational(r(0, 4), 8), sign > 0 ? Rational(1 - L) : L);
    std::map<std::uint64_t, Rational> ov;
    for (int k = r(0, 2); k > 0; --k) ov[r(1, 5)] = Rational(r(0, 4), 4);
    auto vals = std::make_shared<MonotoneValues>(L, sign, scale, MonotoneValues::Geometric, r(0, 2), ov);
    std::vector<IndexSet> domains{IndexSet::naturals(), IndexSet::tail(r(2, 30)),
                                  IndexSet::ap(r(1, 5), 2 * r(0, 3) + 1),
                                  subtract(IndexSet::naturals(), IndexSet::block(r(1, 4))),
                                  unite(IndexSet::blocks(BlockSet::from(r(2, 4))), IndexSet::finite({1, 3}))};
    const IndexSet& dom = domains[r(0, 4)];
    Sequence s = dom == IndexSet::naturals() ? blockConstant(I, vals) : subsequence(blockConstant(I, vals), dom);
    std::vector<Point> limits{Point::rat(L), Point::rat(Rational(r(0, 4), 4))};
    for (const Point& xi : limits)
      for (const Ideal& id : allIdeals()) {
        if (!idealOn(id, s.domain()).nontrivial().isTrue() && !(s.domain() == IndexSet::naturals())) continue;
        ++tested;
        INFO(vals->describe(), " on ", s.domain().toString(), " under ", id.toString(), " to ", xi.toString());
        auto [sr, sw] = iStarConverges(s, id, xi, 10);
        auto ir = iConverges(s, id, xi, 10);
        if (sr.overall.isTrue()) {
          ++starTrue;
          CHECK(ir.overall.isTrue());
          REQUIRE(sw);
          CHECK(iStarToI(s, *sw, id, xi, 10).isTrue());
        }
        if (ir.overall.isTrue()) {
          ++iTrue;
          auto idx = classicalExtract(s, id, xi, 10);
          auto basis = basisFamily(I, xi, 10);
          for (std::size_t j = 0; j < idx.size(); ++j) CHECK(inNbhd(I, s.at(idx[j]), basis[j]));
        }
      }
  }
  CHECK(tested >= 100);
  CHECK(starTrue > 10);
  CHECK(iTrue > starTrue);
}
