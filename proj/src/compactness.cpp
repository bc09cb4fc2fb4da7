#include "icomp/compactness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "icomp/density.hpp"
#include "icomp/error.hpp"

namespace icomp {

const char* refuteModeName(RefuteMode m) {
  switch (m) {
    case RefuteMode::DensityBound: return "densityBound";
    case RefuteMode::BlockRecurrence: return "blockRecurrence";
    case RefuteMode::CubeBlockRecurrence: return "cubeBlockRecurrence";
    case RefuteMode::CubeDensityDiag: return "cubeDensityDiag";
  }
  return "?";
}

RefuteMode parseRefuteMode(std::string_view name) {
  for (RefuteMode m : {RefuteMode::DensityBound, RefuteMode::BlockRecurrence, RefuteMode::CubeBlockRecurrence,
                       RefuteMode::CubeDensityDiag})
    if (name == refuteModeName(m)) return m;
  fail(ErrorKind::UnknownName, "refutation mode '" + std::string(name) + "'");
}

namespace {

void requireShrinkB(const Ideal& I) {
  if (!I.supportsShrinkB())
    fail(ErrorKind::UnsupportedShrink, I.toString() + " does not satisfy shrinking condition (B)");
}

void requireNonthinDomain(const Sequence& s, const Ideal& I) {
  Verdict v = member(I, s.domain());
  if (!v.isFalse()) fail(ErrorKind::NotNonthin, "domain " + s.domain().toString() + " is not certified outside " +
                                                    I.toString() + ": " + v.summary());
}

// Index of the chosen candidate. A thin candidate forces its partner when the union is nonthin.
std::size_t chooseSplit(const std::vector<Verdict>& vs, const std::string& where) {
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (vs[i].isFalse()) return i;
  if (vs.size() == 2 && vs[0].isUnknown() != vs[1].isUnknown()) return vs[0].isUnknown() ? 0 : 1;
  std::string detail = where + ":";
  for (const auto& v : vs) detail += " " + v.summary();
  if (std::all_of(vs.begin(), vs.end(), [](const Verdict& v) { return v.isTrue(); }))
    fail(ErrorKind::SplitUndecided, "every candidate is thin although their union is not;" + detail);
  fail(ErrorKind::SplitUndecided, "no candidate certified nonthin;" + detail);
}

std::vector<Rational> coords(const Point& p) {
  if (p.kind == Point::Real) return {p.value};
  std::vector<Rational> out;
  for (const auto& q : p.parts) {
    if (q.kind != Point::Real) fail(ErrorKind::ShapeMismatch, "cells need real coordinates");
    out.push_back(q.value);
  }
  return out;
}

bool inCell(const Point& p, const std::vector<Interval>& cell) {
  if (p.kind == Point::Cube) return false;
  auto c = coords(p);
  if (c.size() != cell.size()) return false;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!cell[i].contains(c[i])) return false;
  return true;
}

Point cellMidpoint(const Space& sp, const std::vector<Interval>& cell) {
  if (sp.kind() == Space::UnitInterval) return Point::rat((cell[0].lo + cell[0].hi) / 2);
  std::vector<Point> ps;
  for (const auto& J : cell) ps.push_back(Point::rat((J.lo + J.hi) / 2));
  return Point::tuple(std::move(ps));
}

ValuePredicate cellPredicate(const Space& sp, const std::vector<Interval>& cell) {
  if (sp.kind() == Space::UnitInterval) return ValuePredicate::closedInterval(cell[0].lo, cell[0].hi);
  return ValuePredicate::closedBox(cell);
}

// K from the recorded chain, then the limit: exact when the structure names it inside
// the final cell and the subsequence converges to it.
void finishCells(ExtractionWitness& w, const Sequence& s, const Ideal& I, std::uint64_t depth, std::uint64_t horizon) {
  w.shrink = shrinkB(I, w.trace.indexSets);
  w.K = w.shrink.unionSet;
  w.kVerdict = w.shrink.unionVerdict;
  if (!w.kVerdict.isFalse())
    fail(ErrorKind::ExtractionStalled, "assembled K is not certified nonthin: " + w.kVerdict.summary());
  Sequence sub = subsequence(s, w.K);
  const auto& last = w.trace.cells.back();
  if (auto cand = structuralLimit(s); cand && inCell(*cand, last)) {
    ConvergenceReport r = iConverges(sub, I, *cand, depth, horizon);
    if (r.overall.isTrue()) {
      w.xi = *cand;
      w.xiExact = true;
      w.report = std::move(r);
      return;
    }
  }
  w.xi = cellMidpoint(s.space(), last);
  w.report = iConverges(sub, I, w.xi, depth, horizon);
}

}  // namespace

ExtractionWitness bisectExtract(const Sequence& s, const Ideal& I, std::uint64_t depth, std::uint64_t horizon) {
  if (s.space().kind() != Space::UnitInterval) fail(ErrorKind::ShapeMismatch, "bisection needs the unit interval");
  if (depth == 0) fail(ErrorKind::OutOfRange, "depth must be at least 1");
  requireShrinkB(I);
  requireNonthinDomain(s, I);
  ExtractionWitness w;
  w.method = "bisect";
  Rational a = 0, b = 1;
  for (std::uint64_t k = 1; k <= depth; ++k) {
    Rational mid = (a + b) / 2;
    // Closed halves: indices at the midpoint belong to both candidates.
    IndexSet lower = preimage(s, ValuePredicate::closedInterval(a, mid), false, horizon);
    IndexSet upper = preimage(s, ValuePredicate::closedInterval(mid, b), false, horizon);
    std::vector<Verdict> vs{member(I, lower), member(I, upper)};
    std::size_t c = chooseSplit(vs, "level " + std::to_string(k));
    if (c == 0) b = mid;
    else a = mid;
    w.trace.cells.push_back({Interval{a, b}});
    w.trace.indexSets.push_back(c == 0 ? lower : upper);
    w.trace.verdicts.push_back(vs[c]);
    w.trace.choices.push_back(c == 0 ? "Lower" : "Upper");
  }
  finishCells(w, s, I, depth, horizon);
  return w;
}

ExtractionWitness netExtract(const Sequence& s, const Ideal& I, std::uint64_t depth, std::uint64_t horizon) {
  if (depth == 0) fail(ErrorKind::OutOfRange, "depth must be at least 1");
  requireShrinkB(I);
  requireNonthinDomain(s, I);
  const Space& sp = s.space();
  if (!sp.metricAvailable()) fail(ErrorKind::NoMetric, sp.toString() + " has no metric in this release");
  std::size_t dim = sp.kind() == Space::UnitInterval ? 1 : sp.factors().size();
  ExtractionWitness w;
  w.method = "net";
  std::vector<Interval> cell(dim, Interval{0, 1});
  for (std::uint64_t n = 1; n <= depth; ++n) {
    Rational eps = Rational(1, n);
    std::vector<Verdict> vs;
    std::vector<IndexSet> sets;
    std::vector<std::vector<Interval>> cands;
    std::vector<std::string> names;
    std::optional<std::size_t> chosen;
    for (const Point& c : epsNet(sp, eps)) {
      auto cc = coords(c);
      std::vector<Interval> box;
      bool empty = false;
      for (std::size_t i = 0; i < dim; ++i) {
        Interval J{std::max(cell[i].lo, Rational(cc[i] - eps)), std::min(cell[i].hi, Rational(cc[i] + eps))};
        empty = empty || J.lo > J.hi;
        box.push_back(J);
      }
      if (empty) continue;
      IndexSet D = preimage(s, cellPredicate(sp, box), false, horizon);
      vs.push_back(member(I, D));
      sets.push_back(std::move(D));
      cands.push_back(std::move(box));
      names.push_back("center " + c.toString());
      if (vs.back().isFalse()) {
        chosen = vs.size() - 1;
        break;
      }
    }
    if (!chosen) {
      // The closed balls cover the cell, so some candidate is nonthin; none was certified.
      std::string detail;
      for (const auto& v : vs) detail += " " + v.summary();
      fail(ErrorKind::SplitUndecided, "level " + std::to_string(n) + ": no net cell certified nonthin;" + detail);
    }
    cell = cands[*chosen];
    w.trace.cells.push_back(cell);
    w.trace.indexSets.push_back(sets[*chosen]);
    w.trace.verdicts.push_back(vs[*chosen]);
    w.trace.choices.push_back(names[*chosen]);
  }
  finishCells(w, s, I, depth, horizon);
  return w;
}

ExtractionWitness productExtract(const Sequence& s, const Ideal& I, std::uint64_t coordCount, std::uint64_t horizon) {
  if (s.space().kind() != Space::CantorCube) fail(ErrorKind::ShapeMismatch, "product extraction needs the cube");
  if (coordCount == 0) fail(ErrorKind::OutOfRange, "coordinate count must be at least 1");
  requireShrinkB(I);
  requireNonthinDomain(s, I);
  ExtractionWitness w;
  w.method = "product";
  IndexSet A = s.domain();
  std::vector<bool> bits;
  for (std::uint64_t i = 1; i <= coordCount; ++i) {
    std::vector<IndexSet> sets;
    std::vector<Verdict> vs;
    for (bool b : {true, false}) {
      sets.push_back(intersect(A, preimage(s, ValuePredicate::in(Nbhd::cylinder({{i, b}})), false, horizon)));
      vs.push_back(member(I, sets.back()));
    }
    std::size_t c = chooseSplit(vs, "coordinate " + std::to_string(i));
    bits.push_back(c == 0);
    A = sets[c];
    w.trace.indexSets.push_back(A);
    w.trace.verdicts.push_back(vs[c]);
    w.trace.choices.push_back("coordinate " + std::to_string(i) + " = " + (c == 0 ? "1" : "0"));
  }
  w.shrink = shrinkB(I, w.trace.indexSets);
  w.K = w.shrink.unionSet;
  w.kVerdict = w.shrink.unionVerdict;
  if (!w.kVerdict.isFalse())
    fail(ErrorKind::ExtractionStalled, "assembled B is not certified nonthin: " + w.kVerdict.summary());
  w.xi = Point::of(CubePoint::eventually(bits, false));
  if (auto cand = structuralLimit(s); cand && cand->kind == Point::Cube) {
    bool agrees = true;
    for (std::uint64_t i = 1; i <= coordCount; ++i) agrees = agrees && cand->cube.bit(i) == bits[i - 1];
    if (agrees) {
      w.xi = *cand;
      w.xiExact = true;
    }
  }
  w.report = productVerdict(subsequence(s, w.K), I, w.xi, coordCount, horizon);
  if (!w.xiExact) w.report.overall.trace.push_back("limit past coordinate " + std::to_string(coordCount) +
                                                   " is not identified; filled with 0");
  return w;
}

IStarWitness upgradeToStar(const Sequence& s, const ExtractionWitness& w, const Ideal& I, std::uint64_t depth,
                           std::uint64_t horizon) {
  if (!I.supportsShrinkA())
    fail(ErrorKind::UnsupportedShrink, I.toString() + " does not satisfy shrinking condition (A)");
  if (depth == 0) fail(ErrorKind::OutOfRange, "depth must be at least 1");
  const Space& sp = s.space();
  if (!sp.firstCountable()) fail(ErrorKind::ShapeMismatch, "space is not first countable");
  Verdict kv = member(I, w.K);
  if (!kv.isFalse()) fail(ErrorKind::WitnessInvalid, "K is not certified nonthin: " + kv.summary());
  if (!w.trace.cells.empty() && !inCell(w.xi, w.trace.cells.back()))
    fail(ErrorKind::WitnessInvalid, "limit " + w.xi.toString() + " lies outside the final cell");
  Sequence sub = subsequence(s, w.K);
  ConvergenceReport r = iConverges(sub, I, w.xi, depth);
  if (r.overall.isFalse())
    fail(ErrorKind::WitnessInvalid, "subsequence on K does not converge to " + w.xi.toString() + ": " +
                                        r.overall.summary());

  std::vector<Nbhd> basis = basisFamily(sp, w.xi, depth);
  std::vector<IndexSet> Ds;
  for (const Nbhd& V : basis) Ds.push_back(preimage(sub, ValuePredicate::in(V), false, horizon));
  std::vector<std::uint64_t> sizes;
  for (std::uint64_t m = 1; m <= depth; ++m) sizes.push_back(m);
  ShrinkWitness sw = shrinkA(I, Ds, sizes);

  IStarWitness out;
  std::vector<std::uint64_t> picks, cutAt;
  std::uint64_t cut = 0;
  for (const auto& part : sw.parts) {
    for (std::uint64_t n : part.finitePart()) {
      picks.push_back(n);
      cut = std::max(cut, n);
    }
    cutAt.push_back(cut);
  }
  std::sort(picks.begin(), picks.end());
  // Replay the tail argument: past max(K_1..K_p) every pick lies in V_p.
  for (std::size_t p = 0; p < basis.size(); ++p) {
    for (std::uint64_t n : picks)
      if (n > cutAt[p] && !inNbhd(sp, sub.at(n), basis[p]))
        fail(ErrorKind::WitnessInvalid, "term " + std::to_string(n) + " lies outside " + basis[p].toString() +
                                            " past the cut " + std::to_string(cutAt[p]));
    out.cuts.emplace_back(basis[p].toString(), cutAt[p]);
  }
  std::vector<std::uint64_t> seen;
  for (std::uint64_t n : picks)
    if (n <= horizon) seen.push_back(n);
  out.M = IndexSet::sampled(std::move(seen), horizon,
                            "finite parts K_1..K_" + std::to_string(depth) + " of shrinking condition (A)");
  out.filterVerdict = Verdict::yes("M is the whole index set of the upgraded subsequence");
  out.tailLimitCertificate = "the parts lie in distinct fresh blocks, so M is nonthin; past max(K_1..K_p) every term "
                             "lies in the p-th basis neighborhood";
  out.symbolic = true;
  out.thin = false;
  out.enumeratedPrefix.assign(picks.begin(), picks.begin() + std::min<std::size_t>(16, picks.size()));
  return out;
}

namespace {

Verdict densityBoundRefute(const Sequence& s, const Ideal& I, const RefuteOptions& o, std::vector<RefutationRow>& rows) {
  if (s.structure() != Sequence::Explicit || !s.rule()->preimageDensity || s.space().kind() != Space::UnitInterval ||
      I.family() != IdealKind::Density)
    fail(ErrorKind::ModeMismatch, "densityBound needs an explicit real sequence with known hit densities under density");
  std::vector<Rational> xis = o.xis, eps = o.eps;
  if (xis.empty())
    for (int k = 0; k <= 12; ++k) xis.push_back(Rational(k, 12));
  if (eps.empty()) eps = {Rational(1, 10), Rational(1, 20), Rational(1, 40)};
  const std::uint64_t N = o.horizon;
  const Rational tol(2, static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(N)))));
  bool allOk = true;
  for (const Rational& xi : xis)
    for (const Rational& e : eps) {
      ValuePredicate pred = ValuePredicate::in(Nbhd::ball(xi, e));
      auto certified = s.rule()->preimageDensity(pred);
      if (!certified) fail(ErrorKind::ModeMismatch, "no hit density for " + pred.toString());
      std::vector<std::uint64_t> hits = enumerate(preimage(s, pred, false, N), N);
      Rational C = 0;
      for (std::size_t i = 0; i < hits.size(); ++i) {
        // Count at n = hits[i] is i + 1.
        Rational excess = Rational(static_cast<std::int64_t>(i + 1)) - 2 * e * Rational(hits[i]);
        C = std::max(C, excess);
      }
      RefutationRow row;
      row.label = "xi=" + toString(xi) + " eps=" + toString(e);
      row.measured = Rational(static_cast<std::int64_t>(hits.size()), static_cast<std::int64_t>(N));
      row.reference = *certified;
      row.tolerance = tol;
      row.ok = absolute(row.measured - row.reference) <= tol && *certified <= 2 * e;
      row.note = "|K_n| <= 2*eps*n + " + toDecimal(C, 3) + " for n <= " + std::to_string(N);
      allOk = allOk && row.ok;
      rows.push_back(std::move(row));
    }
  if (!allOk) return Verdict::unknown(N, "hit frequencies disagree with the certified lengths");
  return Verdict::yes("no density-nonthin subsequence converges: a subsequence converging to xi lives, up to a "
                      "density-zero set, in hit sets of density at most 2*eps for every eps, so d(K) = 0",
                      {"hit sets verified on " + std::to_string(rows.size()) + " (xi, eps) pairs up to N = " +
                       std::to_string(N)});
}

std::vector<std::uint64_t> firstInfiniteBlocks(const BlockView& v) {
  auto infB = infiniteBlocks(v.domain, v.delta);
  if (!infB) fail(ErrorKind::ModeMismatch, "block structure of the domain is not certified");
  return infB->members(2);
}

Verdict blockRecurrenceRefute(const Sequence& s, const Ideal& I, std::vector<RefutationRow>& rows) {
  auto v = blockView(s);
  const auto* mv = v ? dynamic_cast<const MonotoneValues*>(v->values) : nullptr;
  if (!mv || s.space().kind() != Space::UnitInterval || mv->sign() == 0 || !mv->overrides().empty() ||
      I.family() != IdealKind::DecB || !sameDecomposition(I.decomposition(), v->delta))
    fail(ErrorKind::ModeMismatch, "blockRecurrence needs strictly monotone block values under decB of the same blocks");
  auto js = firstInfiniteBlocks(*v);
  if (js.size() < 2) fail(ErrorKind::NotNonthin, "the domain meets fewer than two blocks infinitely");
  RefutationRow row;
  row.label = "blocks " + std::to_string(js[0]) + "," + std::to_string(js[1]);
  row.measured = mv->real(js[0]);
  row.reference = mv->real(js[1]);
  row.ok = row.measured != row.reference;
  row.note = "block " + std::to_string(js[0]) + " value " + toString(row.measured) + ", block " +
             std::to_string(js[1]) + " value " + toString(row.reference);
  rows.push_back(row);
  if (!row.ok) return Verdict::unknown(0, "witness blocks carry equal values");
  return Verdict::yes("no nonthin subsequence converges classically: a set outside decB meets two blocks infinitely "
                      "and the block values are pairwise distinct, so two values recur",
                      {row.note});
}

Verdict cubeBlockRecurrenceRefute(const Sequence& s, const Ideal& I, std::vector<RefutationRow>& rows) {
  auto v = blockView(s);
  const auto* st = v ? dynamic_cast<const StaircaseValues*>(v->values) : nullptr;
  if (!st || I.family() != IdealKind::DecB || !sameDecomposition(I.decomposition(), v->delta))
    fail(ErrorKind::ModeMismatch, "cubeBlockRecurrence needs staircase block values under decB of the same blocks");
  auto js = firstInfiniteBlocks(*v);
  if (js.size() < 2) fail(ErrorKind::NotNonthin, "the domain meets fewer than two blocks infinitely");
  std::uint64_t i = js[0];
  bool b0 = st->value(js[0]).cube.bit(i), b1 = st->value(js[1]).cube.bit(i);
  RefutationRow row;
  row.label = "coordinate " + std::to_string(i);
  row.measured = b0 ? 1 : 0;
  row.reference = b1 ? 1 : 0;
  row.ok = b0 != b1;
  row.note = "coordinate " + std::to_string(i) + " is " + (b0 ? "1" : "0") + " on block " + std::to_string(js[0]) +
             " and " + (b1 ? "1" : "0") + " on block " + std::to_string(js[1]);
  rows.push_back(row);
  if (!row.ok) return Verdict::unknown(0, "witness coordinate does not oscillate");
  return Verdict::yes("no nonthin subsequence converges classically: for the lowest block j met infinitely, "
                      "coordinate j is 0 on block j and 1 on every later block",
                      {row.note});
}

Verdict cubeDensityDiagRefute(const Sequence& s, const Ideal& I, const RefuteOptions& o,
                              std::vector<RefutationRow>& rows) {
  if (s.structure() != Sequence::Explicit || s.space().kind() != Space::CantorCube || !s.rule()->exactPreimage ||
      !s.rule()->preimageDensity || I.family() != IdealKind::Density)
    fail(ErrorKind::ModeMismatch, "cubeDensityDiag needs an explicit cube sequence with exact cylinder preimages");
  const ExplicitRule& rule = *s.rule();
  std::map<std::uint64_t, bool> constraints;
  std::vector<Rational> mu;
  bool boundHolds = true;
  for (std::uint64_t m = 1; m <= o.diagDepth; ++m) {
    // A_m: keep the larger half of A_{m-1} in coordinate m, ties to bit 1.
    std::optional<Rational> best;
    bool bestBit = true;
    for (bool b : {true, false}) {
      auto c = constraints;
      c[m] = b;
      auto d = rule.preimageDensity(ValuePredicate::in(Nbhd::cylinder(c)));
      if (!d) fail(ErrorKind::ModeMismatch, "no density for the cylinder at coordinate " + std::to_string(m));
      if (!best || *d > *best) {
        best = *d;
        bestBit = b;
      }
    }
    constraints[m] = bestBit;
    auto A = rule.exactPreimage(ValuePredicate::in(Nbhd::cylinder(constraints)));
    if (!A) fail(ErrorKind::ModeMismatch, "no exact preimage at coordinate " + std::to_string(m));

    // Largest density over all 2^m patterns of the first m coordinates.
    std::uint64_t L = 1;
    for (std::uint64_t k = 1; k <= m; ++k) L = std::lcm(L, 2 * k);
    std::map<std::vector<bool>, std::uint64_t> counts;
    for (std::uint64_t r = 1; r <= L; ++r) {
      Point x = rule.eval(r);
      std::vector<bool> key;
      for (std::uint64_t k = 1; k <= m; ++k) key.push_back(x.cube.bit(k));
      ++counts[key];
    }
    std::uint64_t top = 0;
    for (const auto& [_, c] : counts) top = std::max(top, c);
    mu.push_back(Rational(static_cast<std::int64_t>(top), static_cast<std::int64_t>(L)));

    RefutationRow row;
    row.label = "A_" + std::to_string(m);
    row.measured = prefixDensity(*A, o.diagHorizon);
    row.reference = pow2(-static_cast<int>(m));
    row.tolerance = pow2(-8);
    row.ok = absolute(row.measured - row.reference) <= row.tolerance;
    bool bound = *best <= pow2(1 - static_cast<int>(m));
    boundHolds = boundHolds && bound;
    row.note = "d(A_m) = " + toString(*best) + ", max over patterns " + toString(mu.back()) +
               (bound ? "; within 2^-(m-1)" : "; exceeds 2^-(m-1)");
    rows.push_back(std::move(row));
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < mu.size(); ++k) decreasing = decreasing && mu[k] < mu[k - 1];
  std::vector<std::string> tr;
  for (const auto& r : rows) tr.push_back(r.label + ": " + r.note);
  if (!boundHolds) tr.push_back("the bound d(A_m) <= 2^-(m-1) fails for some m; only the decay is certified");
  if (!decreasing) return Verdict::unknown(o.diagHorizon, "pattern densities do not decrease", tr);
  return Verdict::yes("the largest cylinder density on the first m coordinates strictly decreases through m = " +
                          std::to_string(o.diagDepth) + ", so nested nonthin choices thin out",
                      tr);
}

}  // namespace

Refutation refuteNonthinConvergence(const Sequence& s, const Ideal& I, RefuteMode mode, const RefuteOptions& opts) {
  Refutation r;
  r.mode = mode;
  switch (mode) {
    case RefuteMode::DensityBound: r.verdict = densityBoundRefute(s, I, opts, r.rows); break;
    case RefuteMode::BlockRecurrence: r.verdict = blockRecurrenceRefute(s, I, r.rows); break;
    case RefuteMode::CubeBlockRecurrence: r.verdict = cubeBlockRecurrenceRefute(s, I, r.rows); break;
    case RefuteMode::CubeDensityDiag: r.verdict = cubeDensityDiagRefute(s, I, opts, r.rows); break;
  }
  return r;
}

}  // namespace icomp
