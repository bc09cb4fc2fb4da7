#include <doctest.h>

#include <random>

#include "icomp/density.hpp"
#include "icomp/error.hpp"
#include "icomp/sequences.hpp"
#include "oracles.hpp"

using namespace icomp;

namespace {

const Space I = Space::unitInterval();
const Space C = Space::cantorCube();

// Independent listing: block 1 is {0}, block m >= 2 is k/(m-1) for k = 0..m-1.
std::vector<std::uint64_t> scan(std::uint64_t N, const std::function<bool(std::uint64_t)>& p) {
  std::vector<std::uint64_t> r;
  for (std::uint64_t n = 1; n <= N; ++n)
    if (p(n)) r.push_back(n);
  return r;
}

bool inBall(const Rational& x, const Rational& c, const Rational& r) { return absolute(x - c) < r; }

Rational randomRational(std::mt19937_64& rng, std::int64_t maxDen) {
  std::int64_t d = std::uniform_int_distribution<std::int64_t>(1, maxDen)(rng);
  std::int64_t n = std::uniform_int_distribution<std::int64_t>(0, d)(rng);
  return Rational(n, d);
}

}  // namespace

TEST_CASE("evaluation of the named sequences") {
  Sequence ud = paperSequence("udSequence");
  std::vector<Rational> want{0, 0, 1, 0, Rational(1, 2), 1, 0, Rational(1, 3), Rational(2, 3), 1};
  for (std::uint64_t n = 1; n <= 10; ++n) CHECK(evalAt(ud, n).value == want[n - 1]);
  auto listing = oracle::udListing(5000);
  for (std::uint64_t n = 1; n <= 5000; ++n) REQUIRE(evalAt(ud, n).value == listing[n - 1]);

  Sequence inv = paperSequence("inverseBlocks");
  CHECK(evalAt(inv, 8).value == Rational(1, 4));
  for (std::uint64_t n = 1; n <= 4096; ++n) REQUIRE(evalAt(inv, n).value == Rational(1, oracle::block2(n)));

  Sequence c = constantSequence(I, Point::rat(Rational(2, 7)));
  CHECK(evalAt(c, 99).value == Rational(2, 7));

  Sequence pd = paperSequence("prodDiagDensity");
  for (std::uint64_t n = 1; n <= 60; ++n)
    for (std::uint64_t m = 1; m <= 8; ++m) {
      // Residues 1..m mod 2m, listed directly.
      bool want1 = false;
      for (std::uint64_t r = 1; r <= m; ++r) want1 = want1 || (n >= r && (n - r) % (2 * m) == 0);
      REQUIRE(evalAt(pd, n).cube.bit(m) == want1);
    }

  Sequence pb = paperSequence("prodDiagBlocks");
  for (std::uint64_t n = 1; n <= 200; ++n)
    for (std::uint64_t i = 1; i <= 10; ++i) REQUIRE(evalAt(pb, n).cube.bit(i) == (oracle::block2(n) > i));

  CHECK_THROWS_AS(paperSequence("nope"), Error);
}

TEST_CASE("domains and subsequences") {
  Sequence inv = paperSequence("inverseBlocks");
  Sequence s3 = subsequence(inv, IndexSet::block(3));
  CHECK(evalAt(s3, 4).value == Rational(1, 3));
  try {
    evalAt(s3, 5);
    FAIL("expected NotInDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInDomain);
  }
  try {
    subsequence(s3, IndexSet::ap(1, 2));
    FAIL("expected DomainViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainViolation);
  }
  Sequence same = subsequence(inv, inv.domain());
  CHECK(sameSet(exceptionalSet(same, Nbhd::ball(0, Rational(1, 5))),
                exceptionalSet(inv, Nbhd::ball(0, Rational(1, 5))))
            .value == Truth::True);
  Sequence fin = subsequence(paperSequence("udSequence"), IndexSet::finite({1, 2}));
  CHECK(isFiniteSet(fin.domain()).value == Truth::True);
}

TEST_CASE("exact exceptional sets") {
  Sequence inv = paperSequence("inverseBlocks");
  IndexSet e = exceptionalSet(inv, Nbhd::ball(0, Rational(1, 3)));
  CHECK_FALSE(e.isSampled());
  IndexSet want = unite(unite(IndexSet::block(1), IndexSet::block(2)), IndexSet::block(3));
  CHECK(sameSet(e, want).value == Truth::True);

  Sequence c = constantSequence(I, Point::rat(Rational(1, 3)));
  CHECK(isEmptySet(exceptionalSet(c, Nbhd::ball(Rational(1, 3), Rational(1, 100)))).value == Truth::True);

  // Coordinate i of prodDiagBlocks is 0 exactly on blocks 1..i.
  Sequence pb = paperSequence("prodDiagBlocks");
  IndexSet e4 = exceptionalSet(pb, Nbhd::cylinder({{4, true}}));
  CHECK_FALSE(e4.isSampled());
  CHECK(sameSet(e4, IndexSet::blocks(BlockSet::range(1, 4))).value == Truth::True);

  // Residue-class form for the density diagonal.
  Sequence pd = paperSequence("prodDiagDensity");
  IndexSet d3 = exceptionalSet(pd, Nbhd::cylinder({{3, true}}));
  CHECK_FALSE(d3.isSampled());
  CHECK(sameSet(d3, unite(unite(IndexSet::ap(4, 6), IndexSet::ap(5, 6)), IndexSet::ap(6, 6))).value == Truth::True);
  CHECK(exactDensity(d3) == Rational(1, 2));
}

TEST_CASE("udSequence exceptional set near 0") {
  Sequence ud = paperSequence("udSequence");
  IndexSet e = exceptionalSet(ud, Nbhd::ball(0, Rational(1, 10)), 10000);
  REQUIRE(e.isSampled());
  auto listing = oracle::udListing(10000);
  auto want = scan(10000, [&](std::uint64_t n) { return !inBall(listing[n - 1], 0, Rational(1, 10)); });
  CHECK(enumerate(e, 10000) == want);
  double d = static_cast<double>(want.size()) / 10000.0;
  // Only [0, 1/10) of the unit interval lies in the ball.
  CHECK(d == doctest::Approx(0.9).epsilon(0.01));
  REQUIRE(e.sample()->certifiedDensity);
  CHECK(*e.sample()->certifiedDensity == Rational(9, 10));
}

TEST_CASE("udSequence equidistribution") {
  // Block-aligned length: 141 blocks hold 141*142/2 terms.
  const std::uint64_t N = 141 * 142 / 2;
  auto listing = oracle::udListing(N);
  Sequence ud = paperSequence("udSequence");
  std::vector<std::pair<Rational, Rational>> intervals{
      {0, Rational(1, 10)},          {Rational(1, 10), Rational(1, 2)}, {Rational(1, 3), Rational(2, 3)},
      {Rational(1, 4), Rational(3, 4)}, {Rational(7, 8), 1},             {Rational(2, 5), Rational(3, 7)}};
  for (const auto& [a, b] : intervals) {
    ValuePredicate p = ValuePredicate::in(Nbhd::ball((a + b) / 2, (b - a) / 2));
    IndexSet hits = preimage(ud, p, false, N);
    auto want = scan(N, [&](std::uint64_t n) { return listing[n - 1] > a && listing[n - 1] < b; });
    REQUIRE(enumerate(hits, N) == want);
    double dens = static_cast<double>(want.size()) / static_cast<double>(N);
    CHECK(std::abs(dens - toDouble(b - a)) < 0.02);
  }
}

TEST_CASE("structural and sampled exceptional sets agree") {
  std::mt19937_64 rng(20261014);
  const std::uint64_t N = 10000;
  for (int trial = 0; trial < 120; ++trial) {
    // Random monotone block values with a few overrides.
    std::uniform_int_distribution<int> pick(0, 1);
    Rational L = randomRational(rng, 8);
    int sign = L == 0 ? 1 : L == 1 ? -1 : (pick(rng) ? 1 : -1);
    Rational scale = randomRational(rng, 6);
    if (sign > 0) scale = std::min(scale, Rational(1 - L));
    else scale = std::min(scale, L);
    auto shape = pick(rng) ? MonotoneValues::Harmonic : MonotoneValues::Geometric;
    std::int64_t shift = std::uniform_int_distribution<std::int64_t>(0, 3)(rng);
    std::map<std::uint64_t, Rational> ov;
    if (pick(rng)) ov[std::uniform_int_distribution<std::uint64_t>(1, 8)(rng)] = randomRational(rng, 5);
    auto values = std::make_shared<MonotoneValues>(L, sign, scale, shape, shift, ov);
    Sequence s = blockConstant(I, values);

    auto v = [&](std::uint64_t j) -> Rational {
      if (ov.count(j)) return ov[j];
      Rational w = shape == MonotoneValues::Harmonic ? Rational(1, static_cast<std::int64_t>(j) + shift)
                                                     : Rational(1, std::int64_t{1} << (j + shift));
      return L + sign * scale * w;
    };
    for (int u = 0; u < 4; ++u) {
      Rational c = randomRational(rng, 8);
      Rational r = Rational(1, std::int64_t{1} << std::uniform_int_distribution<int>(1, 9)(rng));
      IndexSet e = exceptionalSet(s, Nbhd::ball(c, r), N);
      REQUIRE_FALSE(e.isSampled());
      std::vector<int> outside(64, -1);
      auto want = scan(N, [&](std::uint64_t n) {
        auto j = oracle::block2(n);
        if (outside[j] < 0) outside[j] = !inBall(v(j), c, r);
        return outside[j] == 1;
      });
      INFO(values->describe(), " ball ", c, " ", r);
      REQUIRE(enumerate(e, N) == want);
    }
  }

  // Cylinders on the staircase.
  Sequence pb = paperSequence("prodDiagBlocks");
  for (int trial = 0; trial < 60; ++trial) {
    std::map<std::uint64_t, bool> cons;
    int depth = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int k = 0; k < depth; ++k)
      cons[std::uniform_int_distribution<std::uint64_t>(1, 12)(rng)] = std::uniform_int_distribution<int>(0, 1)(rng);
    IndexSet e = exceptionalSet(pb, Nbhd::cylinder(cons), N);
    REQUIRE_FALSE(e.isSampled());
    auto want = scan(N, [&](std::uint64_t n) {
      for (const auto& [i, b] : cons)
        if ((oracle::block2(n) > i) != b) return true;
      return false;
    });
    REQUIRE(enumerate(e, N) == want);
  }
}

TEST_CASE("residue forms for the density diagonal") {
  std::mt19937_64 rng(7);
  Sequence pd = paperSequence("prodDiagDensity");
  const std::uint64_t N = 10000;
  for (int trial = 0; trial < 40; ++trial) {
    std::map<std::uint64_t, bool> cons;
    int depth = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int k = 0; k < depth; ++k)
      cons[std::uniform_int_distribution<std::uint64_t>(1, 7)(rng)] = std::uniform_int_distribution<int>(0, 1)(rng);
    IndexSet e = exceptionalSet(pd, Nbhd::cylinder(cons), N);
    REQUIRE_FALSE(e.isSampled());
    auto want = scan(N, [&](std::uint64_t n) {
      for (const auto& [m, b] : cons)
        if ((((n - 1) % (2 * m)) < m) != b) return true;
      return false;
    });
    REQUIRE(enumerate(e, N) == want);
  }
}

TEST_CASE("restriction coherence") {
  std::mt19937_64 rng(99);
  const std::uint64_t N = 4096;
  std::vector<Sequence> bases{paperSequence("inverseBlocks"), paperSequence("udSequence"),
                              approachSequence(Rational(1, 2), Rational(-1, 3))};
  std::vector<Nbhd> nbhds{Nbhd::ball(0, Rational(1, 4)), Nbhd::ball(Rational(1, 2), Rational(1, 8)),
                          Nbhd::ball(Rational(1, 3), Rational(1, 3))};
  for (int trial = 0; trial < 40; ++trial) {
    auto k = oracle::randomSet(rng, 2);
    for (const auto& s : bases) {
      Sequence sub = subsequence(s, k.set, N);
      for (const auto& U : nbhds) {
        auto lhs = enumerate(exceptionalSet(sub, U, N), N);
        auto rhs = enumerate(intersect(exceptionalSet(s, U, N), k.set), N);
        INFO(s.name(), " K=", k.expr, " U=", U.toString());
        REQUIRE(lhs == rhs);
      }
    }
  }
}

TEST_CASE("approach sequences have exact preimages") {
  Sequence a = approachSequence(Rational(1, 2), Rational(1, 4));
  CHECK(evalAt(a, 1).value == Rational(3, 4));
  CHECK(evalAt(a, 4).value == Rational(9, 16));
  IndexSet e = exceptionalSet(a, Nbhd::ball(Rational(1, 2), Rational(1, 16)));
  CHECK_FALSE(e.isSampled());
  // 1/(4n) < 1/16 iff n > 4.
  CHECK(sameSet(e, IndexSet::finite({1, 2, 3, 4})).value == Truth::True);
  CHECK_THROWS_AS(approachSequence(Rational(1, 2), Rational(2, 3)), Error);
}

TEST_CASE("products and parsing") {
  Sequence p = parseSequence("pair(paper:inverseBlocks, const rat(1/2))");
  CHECK(p.space().kind() == Space::FiniteProduct);
  CHECK(evalAt(p, 8).toString() == "(rat(1/4), rat(1/2))");
  IndexSet e = exceptionalSet(p, Nbhd::box({Nbhd::ball(0, Rational(1, 3)), Nbhd::ball(Rational(1, 2), Rational(1, 8))}));
  CHECK(sameSet(e, IndexSet::blocks(BlockSet::range(1, 3))).value == Truth::True);

  Sequence r = parseSequence("paper:inverseBlocks | restrict ap(1,2)");
  CHECK(r.structure() == Sequence::Restricted);
  CHECK(sameSet(r.domain(), IndexSet::ap(1, 2)).value == Truth::True);
  CHECK(parseSequence("const rat(1/2)").structure() == Sequence::BlockConstant);
  CHECK(evalAt(parseSequence("blocks(geometric, 0, 1, 1)"), 4).value == Rational(1, 8));
  CHECK_THROWS_AS(parseSequence("paper:inverseBlocks | shuffle"), Error);
  CHECK_THROWS_AS(parseSequence("pair(paper:udSequence"), Error);
  auto v = blockView(r);
  REQUIRE(v);
  CHECK(v->values->value(3).value == Rational(1, 3));
  CHECK(sameSet(v->domain, IndexSet::ap(1, 2)).value == Truth::True);
}
