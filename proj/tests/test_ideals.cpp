#include <doctest.h>

#include <random>

#include "icomp/error.hpp"
#include "icomp/ideals.hpp"
#include "oracles.hpp"

using namespace icomp;

namespace {

std::vector<Ideal> families() { return {Ideal::fin(), Ideal::density(), Ideal::decA(), Ideal::decB()}; }

ErrorKind errorOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Overflow;
}

IndexSet nat() { return IndexSet::naturals(); }

}  // namespace

TEST_CASE("membership examples") {
  CHECK(member(Ideal::fin(), IndexSet::tail(10)).isFalse());
  Verdict b = member(Ideal::decB(), IndexSet::block(1));
  CHECK(b.isTrue());
  CHECK(b.rule.find("infinite in exactly 1 block") != std::string::npos);
  Verdict d = member(Ideal::density(), IndexSet::block(3));
  CHECK(d.isFalse());
  CHECK(d.rule.find("exact density 1/8 > 0") != std::string::npos);
  // Prefix density at 2^20 from a brute-force count.
  double emp = double(oracle::count([](auto n) { return oracle::v2(n) == 2; }, 1u << 20)) / double(1u << 20);
  CHECK(emp == doctest::Approx(0.125).epsilon(1e-4));
}

TEST_CASE("decA and decB differ on finite parts only in certificates") {
  IndexSet a = unite(IndexSet::finite({1, 2, 4, 8}), IndexSet::block(5));
  Verdict va = member(Ideal::decA(), a), vb = member(Ideal::decB(), a);
  CHECK(va.isTrue());
  CHECK(vb.isTrue());
  CHECK(va.rule.find("meets exactly 5 blocks") != std::string::npos);
  CHECK(vb.rule.find("exactly 1 block") != std::string::npos);
  CHECK(member(Ideal::decA(), IndexSet::ap(3, 3)).isFalse());
  CHECK(member(Ideal::decB(), IndexSet::ap(4, 8)).isTrue());
  CHECK(member(Ideal::decB(), IndexSet::ap(4, 4)).isFalse());
}

TEST_CASE("restriction") {
  CHECK(restrict(Ideal::decB(), nat()).nontrivial().isTrue());
  CHECK(restrict(Ideal::fin(), IndexSet::finite({1, 2, 3})).nontrivial().isFalse());
  Ideal r = restrict(Ideal::decB(), subtract(nat(), IndexSet::block(1)));
  CHECK(member(r, IndexSet::block(2)).isTrue());
  CHECK(member(r, IndexSet::block(1)).isFalse());
  CHECK(r.toString() == "restrict(decB(2adic), ap(2,2))");
  CHECK(parseIdeal(r.toString()).toString() == r.toString());
}

TEST_CASE("filter membership") {
  CHECK(filterMember(Ideal::fin(), IndexSet::tail(5), nat()).isTrue());
  CHECK(filterMember(Ideal::decB(), subtract(nat(), IndexSet::block(1)), nat()).isTrue());
  CHECK(filterMember(Ideal::density(), IndexSet::ap(1, 2), nat()).isFalse());
  CHECK(errorOf([] { filterMember(Ideal::fin(), IndexSet::tail(1), IndexSet::tail(3)); }) == ErrorKind::DomainViolation);
}

TEST_CASE("admissible and nontrivial families") {
  for (const auto& I : families()) {
    CAPTURE(I.toString());
    for (std::uint64_t n : {1u, 2u, 17u, 1024u, 99999u}) CHECK(member(I, IndexSet::finite({n})).isTrue());
    CHECK(member(I, nat()).isFalse());
    CHECK(member(I, IndexSet::empty()).isTrue());
  }
}

TEST_CASE("ideal axioms on random sets") {
  std::mt19937_64 rng(11);
  for (const auto& I : families()) {
    CAPTURE(I.toString());
    for (int i = 0; i < 80; ++i) {
      auto b = oracle::randomSet(rng, 2);
      auto a = intersect(b.set, oracle::randomSet(rng, 1).set);
      Verdict vb = member(I, b.set), va = member(I, a);
      REQUIRE(vb.definitive());
      REQUIRE(va.definitive());
      if (vb.isTrue()) CHECK(va.isTrue());
      auto c = oracle::randomSet(rng, 1);
      if (vb.isTrue() && member(I, c.set).isTrue()) CHECK(member(I, unite(b.set, c.set)).isTrue());
    }
  }
}

TEST_CASE("restriction law by brute force") {
  std::mt19937_64 rng(12);
  const std::uint64_t N = 20000;
  for (const auto& I : families()) {
    for (int i = 0; i < 40; ++i) {
      auto m = oracle::randomSet(rng, 1);
      auto a = oracle::randomSet(rng, 1);
      bool sub = true;
      for (std::uint64_t n = 1; n <= N && sub; ++n)
        if (a.pred(n) && !m.pred(n)) sub = false;
      Verdict v = member(restrict(I, m.set), a.set);
      CAPTURE(m.set.toString());
      CAPTURE(a.set.toString());
      CHECK(v.isTrue() == (sub && member(I, a.set).isTrue()));
    }
  }
}

TEST_CASE("shrinking condition A") {
  ShrinkWitness w = shrinkA(Ideal::decA(), {nat(), nat(), nat()}, {1, 2, 3});
  REQUIRE(w.parts.size() == 3);
  std::set<std::uint64_t> blocks;
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(isFiniteSet(w.parts[i]).isTrue());
    CHECK(w.parts[i].finitePart().size() == i + 1);
    CHECK(w.perPartCertificates[i].isTrue());
    for (auto n : w.parts[i].finitePart()) blocks.insert(oracle::block2(n));
  }
  CHECK(blocks.size() >= 6);
  CHECK(w.unionVerdict.isFalse());
  CHECK(errorOf([] { shrinkA(Ideal::density(), {nat()}); }) == ErrorKind::UnsupportedShrink);
  CHECK(errorOf([] { shrinkA(Ideal::fin(), {nat()}); }) == ErrorKind::UnsupportedShrink);
  CHECK(errorOf([] { shrinkA(Ideal::decB(), {nat()}); }) == ErrorKind::UnsupportedShrink);
  CHECK(errorOf([] { shrinkA(Ideal::decA(), {IndexSet::block(1)}, {1}); }) == ErrorKind::NotNonthin);
}

TEST_CASE("shrinking condition B") {
  IndexSet a1 = subtract(nat(), IndexSet::block(1));
  IndexSet a2 = subtract(a1, IndexSet::block(2));
  IndexSet a3 = subtract(a2, IndexSet::block(3));
  ShrinkWitness w = shrinkB(Ideal::decB(), {a1, a2, a3});
  REQUIRE(w.parts.size() == 3);
  CHECK(w.parts[0] == IndexSet::block(2));
  CHECK(w.parts[1] == IndexSet::block(3));
  CHECK(w.parts[2] == IndexSet::block(4));
  CHECK(w.unionVerdict.isFalse());
  CHECK(sameSet(w.unionSet, IndexSet::ap(2, 2)).isTrue());
  for (std::size_t i = 0; i < 3; ++i) CHECK(member(Ideal::decB(), w.parts[i]).value == w.perPartCertificates[i].value);
  CHECK(member(Ideal::decB(), w.unionSet).value == w.unionVerdict.value);

  ShrinkWitness wa = shrinkB(Ideal::decA(), {nat(), a1});
  CHECK(wa.unionVerdict.isFalse());
  CHECK(errorOf([] { shrinkB(Ideal::density(), {nat()}); }) == ErrorKind::UnsupportedShrink);
  CHECK(errorOf([] { shrinkB(Ideal::fin(), {nat()}); }) == ErrorKind::UnsupportedShrink);
  CHECK(errorOf([] { shrinkB(Ideal::decB(), {unite(IndexSet::block(1), IndexSet::finite({2}))}); }) ==
        ErrorKind::NotNonthin);
}

TEST_CASE("shrink witnesses re-verify") {
  std::mt19937_64 rng(5);
  int done = 0;
  for (int i = 0; i < 60; ++i) {
    auto s = oracle::randomSet(rng, 1);
    if (!member(Ideal::decB(), s.set).isFalse()) continue;
    auto t = intersect(s.set, IndexSet::tail(30));
    ShrinkWitness w = shrinkB(Ideal::decB(), {s.set, t});
    for (std::size_t k = 0; k < w.parts.size(); ++k) {
      CHECK(member(Ideal::decB(), w.parts[k]).value == w.perPartCertificates[k].value);
      CHECK(w.perPartCertificates[k].isTrue());
    }
    CHECK(isSubset(w.parts[0], s.set).isTrue());
    CHECK(isSubset(w.parts[1], t).isTrue());
    CHECK(member(Ideal::decB(), w.unionSet).isFalse());
    ++done;
  }
  CHECK(done > 5);
}

TEST_CASE("parse ideals") {
  CHECK(parseIdeal("fin").kind() == IdealKind::Fin);
  CHECK(parseIdeal("density").kind() == IdealKind::Density);
  CHECK(parseIdeal("decA(2adic)").kind() == IdealKind::DecA);
  CHECK(parseIdeal("decB(2adic)").kind() == IdealKind::DecB);
  CHECK(parseIdeal("restrict(fin, tail(3))").kind() == IdealKind::Restriction);
  CHECK(errorOf([] { parseIdeal("maximal"); }) == ErrorKind::UnknownName);
}
