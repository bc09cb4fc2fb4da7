#include "icomp/suite.hpp"

#include <functional>
#include <map>
#include <memory>
#include <random>

#include "icomp/closure.hpp"
#include "icomp/compactness.hpp"
#include "icomp/error.hpp"

namespace icomp {

namespace {

const std::vector<Ideal>& fourIdeals() {
  static const std::vector<Ideal> ids{Ideal::fin(), Ideal::density(), Ideal::decA(), Ideal::decB()};
  return ids;
}

std::string describeError(const Error& e) { return std::string(errorName(e.kind())) + ": " + e.detail(); }

// Kind of the error f raises, or nullopt when it returns.
std::optional<ErrorKind> raised(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

bool classicalClosure(const SetDescription& A, const Rational& x) {
  for (const auto& p : A.points)
    if (p == x) return true;
  for (const auto& J : A.intervals) {
    bool nonempty = J.lo < J.hi || (J.lo == J.hi && !J.loOpen && !J.hiOpen);
    if (nonempty && J.lo <= x && x <= J.hi) return true;
  }
  return false;
}

}  // namespace

ChainStats implicationChainSuite(std::uint64_t seed, int cases, std::uint64_t depth, bool corrupt) {
  const Space sp = Space::unitInterval();
  std::mt19937_64 rng(seed);
  auto r = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  ChainStats st;
  for (int c = 0; c < cases; ++c) {
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
    IndexSet dom = domains[r(0, 4)];
    if (corrupt) dom = IndexSet::finite({1, 2, 3});
    Sequence s = dom == IndexSet::naturals() ? blockConstant(sp, vals) : subsequence(blockConstant(sp, vals), dom);
    Point other = Point::rat(Rational(r(0, 4), 4));
    ++st.cases;
    for (const Point& xi : {Point::rat(L), other})
      for (const Ideal& id : fourIdeals()) {
        if (!member(id, s.domain()).isFalse()) continue;
        ++st.tested;
        std::string label = vals->describe() + " on " + s.domain().toString() + " under " + id.toString() + " to " +
                            xi.toString();
        try {
          auto [sr, sw] = iStarConverges(s, id, xi, depth);
          ConvergenceReport ir = iConverges(s, id, xi, depth);
          if (sr.overall.isTrue()) {
            ++st.starTrue;
            if (!ir.overall.isTrue()) st.counterexamples.push_back(label + ": I* True but I " + ir.overall.summary());
            if (!sw || !iStarToI(s, *sw, id, xi, depth).isTrue())
              st.counterexamples.push_back(label + ": I* witness does not convert");
          }
          if (ir.overall.isTrue()) {
            ++st.iTrue;
            auto idx = classicalExtract(s, id, xi, 10);
            auto basis = basisFamily(sp, xi, 10);
            bool ok = idx.size() == basis.size();
            for (std::size_t j = 0; ok && j < idx.size(); ++j) ok = inNbhd(sp, s.at(idx[j]), basis[j]);
            if (ok) ++st.extracted;
            else st.counterexamples.push_back(label + ": extracted terms leave the basis neighborhoods");
          }
        } catch (const Error& e) {
          st.counterexamples.push_back(label + ": " + describeError(e));
        }
      }
  }
  return st;
}

ClosureStats closurePropertySuite(std::uint64_t seed, int instancesPerIdeal, int pointsPerInstance, bool corrupt) {
  std::mt19937_64 rng(seed);
  auto grid = [&](std::int64_t q) { return Rational(std::uniform_int_distribution<std::int64_t>(0, q)(rng), q); };
  auto randomUnion = [&] {
    std::vector<Interval> is;
    int k = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < k; ++i) {
      Rational a = grid(12), b = grid(12);
      if (a > b) std::swap(a, b);
      if (corrupt) b += Rational(1, 12);
      bool lo = rng() % 2 == 0, hi = rng() % 2 == 0;
      is.push_back(Interval{a, b, lo, hi});
    }
    return SetDescription::intervalUnion(std::move(is));
  };
  ClosureStats st;
  const std::uint64_t budget = 8;
  for (const Ideal& id : fourIdeals())
    for (int t = 0; t < instancesPerIdeal; ++t) {
      ++st.instances;
      SetDescription A = randomUnion(), B = randomUnion();
      SetDescription AB = uniteSets(A, B);
      try {
        for (int k = 0; k < pointsPerInstance; ++k) {
          Rational x = grid(24);
          Point px = Point::rat(x);
          std::string where = id.toString() + ", A = " + A.toString() + ", B = " + B.toString() + ", x = " + toString(x);
          st.checks += 5;
          if (!iClosureMember(SetDescription::intervalUnion({}), px, id, budget).verdict.isFalse())
            st.failures.push_back("empty set " + where);
          SetDescription Ax = A;
          Ax.points.push_back(x);
          if (!iClosureMember(Ax, px, id, budget).verdict.isTrue()) st.failures.push_back("expansive " + where);
          Verdict va = iClosureMember(A, px, id, budget).verdict;
          Verdict vb = iClosureMember(B, px, id, budget).verdict;
          Verdict vab = iClosureMember(AB, px, id, budget).verdict;
          if (!va.definitive() || !vb.definitive() || !vab.definitive() ||
              vab.isTrue() != (va.isTrue() || vb.isTrue()))
            st.failures.push_back("finite union " + where);
          bool want = classicalClosure(A, x);
          if (va.isTrue() != want) st.failures.push_back("I-closure differs from the closure " + where);
          if (iClosureMember(A, px, id, budget, Mode::IStar).verdict.isTrue() != want)
            st.failures.push_back("I*-closure differs from the closure " + where);
        }
      } catch (const Error& e) {
        st.failures.push_back(id.toString() + ", A = " + A.toString() + ": " + describeError(e));
      }
    }
  return st;
}

const std::vector<std::string>& suiteRowIds() {
  static const std::vector<std::string> ids{
      "inverse-blocks-extraction", "inverse-blocks-no-star", "ud-density-refutation", "cube-density-diagonal",
      "cube-blocks-extraction",    "cube-blocks-no-star",    "shrink-selectors",      "closure-properties",
      "implication-chain",         "star-upgrade"};
  return ids;
}

namespace {

Sequence squashedUd() {
  ExplicitRule rule = *paperSequence("udSequence").rule();
  rule.name += " halved";
  rule.eval = [e = rule.eval](std::uint64_t n) {
    Point p = e(n);
    p.value /= 2;
    return p;
  };
  return explicitSequence(Space::unitInterval(), std::move(rule));
}

// Every coordinate equals the parity bit, so the nested halves never thin out.
Sequence flatDiagonal() {
  ExplicitRule rule;
  rule.name = "parity cube";
  rule.eval = [](std::uint64_t n) {
    bool b = n % 2 == 1;
    return Point::of(CubePoint::eventually({}, b));
  };
  // 1 or 0 when every constraint asks for that bit, 2 when unconstrained, -1 when contradictory.
  auto parity = [](const ValuePredicate& pred) -> std::optional<int> {
    if (pred.kind != ValuePredicate::InNbhd || pred.nbhd.kind != Nbhd::Cylinder) return std::nullopt;
    int v = 2;
    for (const auto& [m, b] : pred.nbhd.constraints) {
      if (v == 2) v = b;
      else if (v != static_cast<int>(b)) return -1;
    }
    return v;
  };
  rule.exactPreimage = [parity](const ValuePredicate& pred) -> std::optional<IndexSet> {
    auto v = parity(pred);
    if (!v) return std::nullopt;
    if (*v == -1) return IndexSet::empty();
    if (*v == 2) return IndexSet::naturals();
    return IndexSet::ap(*v == 1 ? 1 : 2, 2);
  };
  rule.preimageDensity = [parity](const ValuePredicate& pred) -> std::optional<Rational> {
    auto v = parity(pred);
    if (!v) return std::nullopt;
    return *v == -1 ? Rational(0) : *v == 2 ? Rational(1) : Rational(1, 2);
  };
  return explicitSequence(Space::cantorCube(), std::move(rule));
}

void inverseBlocksExtraction(SuiteRow& row, const SuiteOptions& o, bool fault) {
  row.claim = "bisection under decB extracts a nonthin K from x_n = 1/i on block i, converging to 0";
  Sequence s = fault ? constantSequence(Space::unitInterval(), Point::rat(Rational(1, 2)))
                     : paperSequence("inverseBlocks");
  auto w = bisectExtract(s, Ideal::decB(), o.depth);
  bool small = w.xi.kind == Point::Real && absolute(w.xi.value) <= pow2(-static_cast<int>(o.depth));
  row.facts = {{"K", w.K.toString()},
               {"K_member", w.kVerdict.summary()},
               {"xi", w.xi.toString()},
               {"report", w.report.overall.summary()}};
  row.pass = w.kVerdict.isFalse() && w.report.overall.isTrue() && small;
}

void inverseBlocksNoStar(SuiteRow& row, const SuiteOptions& o, bool fault) {
  row.claim = "x_n = 1/i on block i has no nonthin classically convergent subsequence; decB admits no finite selection";
  Sequence s = fault ? constantSequence(Space::unitInterval(), Point::rat(Rational(1, 3)))
                     : paperSequence("inverseBlocks");
  auto w = bisectExtract(s, Ideal::decB(), o.depth);
  auto up = raised([&] { upgradeToStar(s, w, Ideal::decB(), o.depth); });
  auto ref = refuteNonthinConvergence(s, Ideal::decB(), RefuteMode::BlockRecurrence);
  row.facts = {{"upgrade", up ? errorName(*up) : "succeeded"},
               {"refutation", ref.verdict.summary()},
               {"witness", ref.rows.empty() ? "" : ref.rows[0].note}};
  row.pass = up == ErrorKind::UnsupportedShrink && ref.verdict.isTrue();
}

void udDensity(SuiteRow& row, const SuiteOptions& o, bool fault) {
  row.claim = "hit sets of the equidistributed listing grow like 2*eps*n, so no density-nonthin subsequence converges";
  Sequence s = fault ? squashedUd() : paperSequence("udSequence");
  RefuteOptions ro;
  ro.horizon = o.horizon;
  auto ref = refuteNonthinConvergence(s, Ideal::density(), RefuteMode::DensityBound, ro);
  int ok = 0;
  for (const auto& r : ref.rows) ok += r.ok;
  auto bis = raised([&] { bisectExtract(s, Ideal::density(), o.depth); });
  row.facts = {{"refutation", ref.verdict.summary()},
               {"rows_within_tolerance", std::to_string(ok) + "/" + std::to_string(ref.rows.size())},
               {"tolerance", ref.rows.empty() ? "" : toString(ref.rows[0].tolerance)},
               {"bisection", bis ? errorName(*bis) : "succeeded"}};
  row.pass = ref.verdict.isTrue() && ok == static_cast<int>(ref.rows.size()) && bis == ErrorKind::UnsupportedShrink;
}

void cubeDensityDiagonal(SuiteRow& row, const SuiteOptions& o, bool fault) {
  (void)o;
  row.claim = "nested majority cylinders of the diagonal cube sequence thin out, so density admits no extraction";
  Sequence s = fault ? flatDiagonal() : paperSequence("prodDiagDensity");
  auto ref = refuteNonthinConvergence(s, Ideal::density(), RefuteMode::CubeDensityDiag);
  auto prod = raised([&] { productExtract(s, Ideal::density(), 4); });
  row.facts = {{"refutation", ref.verdict.summary()}};
  for (const auto& r : ref.rows) row.facts.emplace_back(r.label, r.note);
  row.facts.emplace_back("product_extraction", prod ? errorName(*prod) : "succeeded");
  row.pass = ref.verdict.isTrue() && prod == ErrorKind::UnsupportedShrink;
}

void cubeBlocksExtraction(SuiteRow& row, const SuiteOptions&, bool fault) {
  row.claim = "diagonal selection under decB extracts B from the staircase cube sequence converging to all ones";
  Sequence s = fault ? constantSequence(Space::cantorCube(), Point::of(CubePoint::zeros()))
                     : paperSequence("prodDiagBlocks");
  auto w = productExtract(s, Ideal::decB(), 6);
  bool ones = w.xi.kind == Point::Cube && sameCubePoint(w.xi.cube, CubePoint::ones()).value_or(false);
  bool coords = !w.report.perBasis.empty();
  for (const auto& b : w.report.perBasis) coords = coords && b.verdict.isTrue();
  row.facts = {{"B", w.K.toString()}, {"xi", w.xi.toString()}, {"report", w.report.overall.summary()}};
  row.pass = w.kVerdict.isFalse() && ones && coords && w.report.overall.isTrue();
}

void cubeBlocksNoStar(SuiteRow& row, const SuiteOptions&, bool fault) {
  row.claim = "no nonthin subsequence of the staircase cube sequence converges classically";
  Sequence s = fault ? constantSequence(Space::cantorCube(), Point::of(CubePoint::ones()))
                     : paperSequence("prodDiagBlocks");
  auto ref = refuteNonthinConvergence(s, Ideal::decB(), RefuteMode::CubeBlockRecurrence);
  row.facts = {{"refutation", ref.verdict.summary()}, {"witness", ref.rows.empty() ? "" : ref.rows[0].note}};
  row.pass = ref.verdict.isTrue();
}

void shrinkSelectors(SuiteRow& row, const SuiteOptions&, bool fault) {
  row.claim = "condition (A) holds for decA only; condition (B) holds for decA and decB; density satisfies neither";
  std::vector<IndexSet> As{IndexSet::naturals(), IndexSet::ap(2, 2), IndexSet::ap(1, 3)};
  Ideal aOk = fault ? Ideal::decB() : Ideal::decA();
  auto wa = shrinkA(aOk, As);
  bool pass = wa.unionVerdict.isFalse();
  row.facts.emplace_back("shrinkA(" + aOk.toString() + ")", wa.unionVerdict.summary());
  for (const Ideal& id : {Ideal::density(), Ideal::fin(), Ideal::decB()}) {
    auto k = raised([&] { shrinkA(id, As); });
    row.facts.emplace_back("shrinkA(" + id.toString() + ")", k ? errorName(*k) : "succeeded");
    pass = pass && k == ErrorKind::UnsupportedShrink;
  }
  for (const Ideal& id : {Ideal::decA(), Ideal::decB()}) {
    auto wb = shrinkB(id, As);
    row.facts.emplace_back("shrinkB(" + id.toString() + ")", wb.unionVerdict.summary());
    pass = pass && wb.unionVerdict.isFalse();
  }
  for (const Ideal& id : {Ideal::density(), Ideal::fin()}) {
    auto k = raised([&] { shrinkB(id, As); });
    row.facts.emplace_back("shrinkB(" + id.toString() + ")", k ? errorName(*k) : "succeeded");
    pass = pass && k == ErrorKind::UnsupportedShrink;
  }
  row.pass = pass;
}

void closureProperties(SuiteRow& row, const SuiteOptions&, bool fault) {
  row.claim = "closure of the empty set is empty, closure is expansive and additive, and it equals the usual closure";
  auto st = closurePropertySuite(20241014, 50, 10, fault);
  row.facts = {{"instances", std::to_string(st.instances)},
               {"checks", std::to_string(st.checks)},
               {"failures", std::to_string(st.failures.size())}};
  if (!st.failures.empty()) row.facts.emplace_back("first_failure", st.failures.front());
  row.pass = st.failures.empty() && st.instances == 200;
}

void implicationChain(SuiteRow& row, const SuiteOptions& o, bool fault) {
  row.claim = "I* convergence implies I convergence, which yields a classically convergent extraction";
  auto st = implicationChainSuite(424242, 100, o.depth, fault);
  row.facts = {{"cases", std::to_string(st.cases)},       {"tested", std::to_string(st.tested)},
               {"istar_true", std::to_string(st.starTrue)}, {"i_true", std::to_string(st.iTrue)},
               {"extracted", std::to_string(st.extracted)}, {"counterexamples", std::to_string(st.counterexamples.size())}};
  if (!st.counterexamples.empty()) row.facts.emplace_back("first_counterexample", st.counterexamples.front());
  row.pass = st.counterexamples.empty() && st.tested >= 100;
}

void starUpgrade(SuiteRow& row, const SuiteOptions& o, bool fault) {
  row.claim = "under decA finite selections turn an extraction into a classically convergent nonthin subsequence";
  Sequence s = blockConstant(Space::unitInterval(),
                             std::make_shared<MonotoneValues>(Rational(1, 2), 1, Rational(1, 2), MonotoneValues::Geometric));
  auto w = bisectExtract(s, Ideal::decA(), o.depth);
  if (fault) w.xi = Point::rat(1);
  const std::uint64_t depth = 5;
  auto star = upgradeToStar(s, w, Ideal::decA(), depth);
  Verdict back = iStarToI(subsequence(subsequence(s, w.K), star.M), star, Ideal::decA(), w.xi, depth);
  std::string prefix;
  for (std::size_t i = 0; i < star.enumeratedPrefix.size(); ++i)
    prefix += (i ? " " : "") + std::to_string(star.enumeratedPrefix[i]);
  row.facts = {{"xi", w.xi.toString()}, {"prefix", prefix}, {"conversion", back.summary()}};
  row.pass = back.isTrue();
}

}  // namespace

std::vector<SuiteRow> verifySuite(const SuiteOptions& opts) {
  using Runner = void (*)(SuiteRow&, const SuiteOptions&, bool);
  const std::vector<Runner> runners{inverseBlocksExtraction, inverseBlocksNoStar, udDensity,         cubeDensityDiagonal,
                                    cubeBlocksExtraction,    cubeBlocksNoStar,    shrinkSelectors,   closureProperties,
                                    implicationChain,        starUpgrade};
  const auto& ids = suiteRowIds();
  if (!opts.fault.empty() && std::find(ids.begin(), ids.end(), opts.fault) == ids.end())
    fail(ErrorKind::UnknownName, "suite row '" + opts.fault + "'");
  std::vector<SuiteRow> rows;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    SuiteRow row;
    row.id = ids[i];
    try {
      runners[i](row, opts, opts.fault == ids[i]);
    } catch (const Error& e) {
      row.pass = false;
      row.facts.emplace_back("error", describeError(e));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace icomp
