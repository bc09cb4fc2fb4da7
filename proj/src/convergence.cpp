#include "icomp/convergence.hpp"

#include <algorithm>

#include "icomp/error.hpp"

namespace icomp {

const char* modeName(Mode m) { return m == Mode::I ? "I" : "IStar"; }

Ideal idealOn(const Ideal& I, const IndexSet& domain) {
  if (domain == IndexSet::naturals()) return I;
  return restrict(I, domain);
}

namespace {

std::string scheduleFor(const Space& sp, std::uint64_t depth) {
  std::string d = std::to_string(depth);
  switch (sp.kind()) {
    case Space::UnitInterval: return "balls of radius 2^-k, k=1.." + d;
    case Space::CantorCube: return "cylinders fixing coordinates 1..k, k=1.." + d;
    case Space::FiniteProduct: return "boxes of basis sets at level k, k=1.." + d;
  }
  return "";
}

bool decFamilyMatches(const Ideal& I, const DecompositionPtr& delta) {
  IdealKind f = I.family();
  return (f == IdealKind::DecA || f == IdealKind::DecB) && I.decomposition() &&
         sameDecomposition(I.decomposition(), delta);
}

// Fin and Density can be judged through block signatures: an infinite piece of a
// 2adic block inside a symbolic set contains a progression, so has positive density.
bool signatureFamily(const Ideal& I, const DecompositionPtr& delta) {
  IdealKind f = I.family();
  return f == IdealKind::Fin || (f == IdealKind::Density && sameDecomposition(delta, twoAdic()));
}

std::optional<Point> classicalLimit(const Sequence& s) {
  switch (s.structure()) {
    case Sequence::Explicit: return s.rule()->classicalLimit;
    case Sequence::Restricted: return classicalLimit(*s.base());
    case Sequence::ProductOf: {
      std::vector<Point> ps;
      for (const auto& c : s.components()) {
        auto p = classicalLimit(c);
        if (!p) return std::nullopt;
        ps.push_back(*p);
      }
      return Point::tuple(std::move(ps));
    }
    case Sequence::BlockConstant: return std::nullopt;
  }
  return std::nullopt;
}

// Components of a (possibly restricted) product, each restricted to the product's domain.
std::optional<std::vector<Sequence>> productParts(const Sequence& s) {
  const Sequence* p = &s;
  while (p->structure() == Sequence::Restricted) p = p->base();
  if (p->structure() != Sequence::ProductOf) return std::nullopt;
  std::vector<Sequence> out;
  for (const auto& c : p->components())
    out.push_back(c.domain() == s.domain() ? c : subsequence(c, s.domain()));
  return out;
}

struct Star {
  Verdict verdict;
  std::optional<IndexSet> M;
};

Star blockStar(const BlockView& v, const Space& sp, const Ideal& I, const Ideal& Ip, const Point& xi) {
  if (!decFamilyMatches(I, v.delta) && !signatureFamily(I, v.delta))
    return {Verdict::unknown(0, "ideal is not judged by the sequence's blocks"), std::nullopt};
  auto infB = infiniteBlocks(v.domain, v.delta);
  auto met = metBlocks(v.domain, v.delta);
  if (!infB || !met) return {Verdict::unknown(v.domain.horizon(), "block structure of the domain not certified"), std::nullopt};
  auto lim = v.values->limit();
  bool limitIsXi = lim && samePoint(*lim, xi).value_or(false);
  BlockSet bad = v.values->where(sp, ValuePredicate::equals(xi)).complement();
  BlockSet X = bad.intersect(*infB);
  if (!limitIsXi && !met->minus(*infB).isFinite())
    return {Verdict::unknown(0, "infinitely many sparse blocks with values not tending to the limit"), std::nullopt};
  IndexSet blocksX = IndexSet::blocks(X, v.delta);
  IndexSet D = intersect(v.domain, blocksX);
  Verdict m = member(Ip, D);
  if (m.isTrue()) {
    IndexSet M = subtract(v.domain, blocksX);
    return {Verdict::yes("I* witness: M = domain minus the blocks " + X.toString() + " carrying recurring values other than the limit",
                         {"discarded part " + D.toString() + ": " + m.summary(),
                          "on M every value outside a neighborhood of the limit occurs finitely often"}),
            M};
  }
  if (m.isFalse()) {
    std::vector<std::string> tr{"domain part on those blocks " + D.toString() + ": " + m.summary()};
    for (std::uint64_t j : X.members(2)) tr.push_back("block " + std::to_string(j) + " value " + v.values->value(j).toString());
    return {Verdict::no("every M in the dual filter is infinite on a block of " + X.toString() +
                            " whose value differs from the limit",
                        tr),
            std::nullopt};
  }
  return {Verdict::unknown(m.horizon, "membership of the discarded part undecided", {m.summary()}), std::nullopt};
}

Star star(const Sequence& s, const Ideal& I, const Ideal& Ip, const Point& xi);

Star productStar(const std::vector<Sequence>& parts, const Sequence& s, const Ideal& I, const Ideal& Ip,
                 const Point& xi) {
  if (xi.kind != Point::Tuple || xi.parts.size() != parts.size())
    fail(ErrorKind::ShapeMismatch, "limit " + xi.toString() + " does not match " + s.space().toString());
  IndexSet M = s.domain();
  std::vector<std::string> tr;
  bool allTrue = true;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    Star c = star(parts[i], I, Ip, xi.parts[i]);
    tr.push_back("coordinate " + std::to_string(i + 1) + ": " + c.verdict.summary());
    if (c.verdict.isFalse()) return {Verdict::no("coordinate " + std::to_string(i + 1) + " has no I* witness", tr), std::nullopt};
    if (!c.verdict.isTrue()) allTrue = false;
    else M = intersect(M, *c.M);
  }
  if (!allTrue) return {Verdict::unknown(0, "some coordinate undecided", tr), std::nullopt};
  Verdict f = filterMember(Ip, M, s.domain());
  tr.push_back("intersection in the dual filter: " + f.summary());
  if (!f.isTrue()) return {Verdict::unknown(f.horizon, "intersection of coordinate witnesses not certified", tr), std::nullopt};
  return {Verdict::yes("I* witness: intersection of coordinate witnesses", tr), M};
}

Star star(const Sequence& s, const Ideal& I, const Ideal& Ip, const Point& xi) {
  if (auto v = blockView(s)) return blockStar(*v, s.space(), I, Ip, xi);
  if (auto cl = classicalLimit(s)) {
    auto same = samePoint(*cl, xi);
    if (same && *same)
      return {Verdict::yes("I* witness: M = domain, the terms converge classically to " + cl->toString()), s.domain()};
    if (same && Ip.nontrivial().isTrue())
      return {Verdict::no("every M in the dual filter is infinite and the terms converge classically to " +
                          cl->toString() + ", not to the requested limit"),
              std::nullopt};
  }
  if (auto parts = productParts(s)) return productStar(*parts, s, I, Ip, xi);
  return {Verdict::unknown(0, "no structural argument for this sequence"), std::nullopt};
}

struct Symbolic {
  Verdict verdict;
  std::optional<Nbhd> witness;
};

std::optional<Symbolic> symbolicI(const Sequence& s, const Ideal& I, const Ideal& Ip, const Point& xi,
                                  std::uint64_t horizon) {
  Star st = star(s, I, Ip, xi);
  if (st.verdict.isTrue()) {
    Verdict v = Verdict::yes("I* witness implies I-convergence", {st.verdict.rule});
    v.trace.insert(v.trace.end(), st.verdict.trace.begin(), st.verdict.trace.end());
    return Symbolic{v, std::nullopt};
  }
  if (auto v = blockView(s)) {
    auto lim = v->values->limit();
    if (!lim || !samePoint(*lim, xi).value_or(false)) return std::nullopt;
    if (decFamilyMatches(I, v->delta))
      return Symbolic{Verdict::yes("block values tend to the limit: every exceptional set lies in finitely many blocks",
                                   {"finite block unions belong to " + I.toString()}),
                      std::nullopt};
    if (!signatureFamily(I, v->delta)) return std::nullopt;
    auto infB = infiniteBlocks(v->domain, v->delta);
    if (!infB) return std::nullopt;
    BlockSet X = v->values->where(s.space(), ValuePredicate::equals(xi)).complement().intersect(*infB);
    auto j0 = X.first();
    if (!j0) return std::nullopt;
    Point val = v->values->value(*j0);
    for (const Nbhd& U : basisFamily(s.space(), xi, 64)) {
      if (inNbhd(s.space(), val, U)) continue;
      Verdict m = member(Ip, exceptionalSet(s, U, horizon));
      if (!m.isFalse()) return std::nullopt;
      return Symbolic{Verdict::no("the domain is infinite on block " + std::to_string(*j0) + " with value " +
                                      val.toString() + ", outside " + U.toString(),
                                  {m.summary()}),
                      U};
    }
    return std::nullopt;
  }
  if (auto parts = productParts(s)) {
    if (xi.kind != Point::Tuple || xi.parts.size() != parts->size()) return std::nullopt;
    std::vector<std::string> tr;
    for (std::size_t i = 0; i < parts->size(); ++i) {
      auto c = symbolicI((*parts)[i], I, idealOn(I, (*parts)[i].domain()), xi.parts[i], horizon);
      if (!c || !c->verdict.isTrue()) return std::nullopt;
      tr.push_back("coordinate " + std::to_string(i + 1) + ": " + c->verdict.rule);
    }
    return Symbolic{Verdict::yes("every coordinate converges symbolically; box exceptional sets are finite unions",
                                 tr),
                    std::nullopt};
  }
  return std::nullopt;
}

std::vector<BasisCheck> basisChecks(const Sequence& s, const Ideal& Ip, const Point& xi, std::uint64_t depth,
                                    std::uint64_t horizon) {
  std::vector<BasisCheck> out;
  for (const Nbhd& U : basisFamily(s.space(), xi, depth)) {
    IndexSet E = exceptionalSet(s, U, horizon);
    out.push_back({U, E.toString(), member(Ip, E)});
  }
  return out;
}

ConvergenceReport header(const Sequence& s, const Ideal& Ip, const Point& xi, std::uint64_t depth, Mode mode) {
  ConvergenceReport r;
  r.mode = mode;
  r.sequence = s.name();
  r.ideal = Ip.toString();
  r.limit = xi.toString();
  r.schedule = scheduleFor(s.space(), depth);
  return r;
}

// Largest element of a set certified finite, scanning to the horizon for samples.
std::uint64_t lastElement(const IndexSet& A, std::uint64_t horizon) {
  if (!A.isSampled() && !A.hasGenerators()) {
    auto f = A.finitePart();
    return f.empty() ? 0 : f.back();
  }
  auto e = enumerate(A, horizon);
  return e.empty() ? 0 : e.back();
}

}  // namespace

std::optional<Point> structuralLimit(const Sequence& s) {
  if (auto v = blockView(s)) return v->values->limit();
  if (auto cl = classicalLimit(s)) return cl;
  if (auto parts = productParts(s)) {
    std::vector<Point> ps;
    for (const auto& c : *parts) {
      auto p = structuralLimit(c);
      if (!p) return std::nullopt;
      ps.push_back(*p);
    }
    return Point::tuple(std::move(ps));
  }
  return std::nullopt;
}

ConvergenceReport iConverges(const Sequence& s, const Ideal& I, const Point& xi, std::uint64_t depth,
                             std::uint64_t horizon) {
  if (depth == 0) fail(ErrorKind::OutOfRange, "depth must be at least 1");
  checkPoint(s.space(), xi);
  Ideal Ip = idealOn(I, s.domain());
  ConvergenceReport r = header(s, Ip, xi, depth, Mode::I);
  r.perBasis = basisChecks(s, Ip, xi, depth, horizon);
  std::vector<std::string> falses;
  std::uint64_t unknownAt = 0;
  bool anyUnknown = false;
  for (const auto& b : r.perBasis) {
    if (b.verdict.isFalse()) falses.push_back(b.nbhd.toString() + ": " + b.verdict.rule);
    if (b.verdict.isUnknown()) {
      anyUnknown = true;
      unknownAt = std::max(unknownAt, b.verdict.horizon);
    }
  }
  auto sym = symbolicI(s, I, Ip, xi, horizon);
  if (!falses.empty()) {
    r.overall = Verdict::no("exceptional set of a basis neighborhood is not in the ideal", falses);
    if (sym && sym->verdict.isTrue()) r.overall.trace.push_back("inconsistent symbolic claim: " + sym->verdict.rule);
    return r;
  }
  if (sym) {
    r.overall = sym->verdict;
    if (sym->witness) r.overall.trace.push_back("certified beyond the tested depth at " + sym->witness->toString());
    return r;
  }
  r.overall = Verdict::unknown(unknownAt ? unknownAt : horizon,
                               anyUnknown ? "some tested neighborhoods undecided"
                                          : "all tested neighborhoods pass; no argument covers every neighborhood");
  return r;
}

std::pair<ConvergenceReport, std::optional<IStarWitness>> iStarConverges(const Sequence& s, const Ideal& I,
                                                                         const Point& xi, std::uint64_t depth,
                                                                         std::uint64_t horizon) {
  if (depth == 0) fail(ErrorKind::OutOfRange, "depth must be at least 1");
  checkPoint(s.space(), xi);
  Ideal Ip = idealOn(I, s.domain());
  ConvergenceReport r = header(s, Ip, xi, depth, Mode::IStar);
  r.perBasis = basisChecks(s, Ip, xi, depth, horizon);
  Star st = star(s, I, Ip, xi);
  r.overall = st.verdict;
  if (!st.verdict.isTrue()) return {r, std::nullopt};

  IStarWitness w;
  w.M = *st.M;
  w.filterVerdict = filterMember(Ip, w.M, s.domain());
  w.tailLimitCertificate = st.verdict.rule;
  w.symbolic = true;
  w.thin = member(I, w.M).isTrue();
  w.enumeratedPrefix = firstElements(w.M, 16);
  for (const auto& b : r.perBasis) {
    IndexSet EM = intersect(exceptionalSet(s, b.nbhd, horizon), w.M);
    w.cuts.emplace_back(b.nbhd.toString(), lastElement(EM, horizon));
  }
  if (w.thin) r.overall.trace.push_back("witness is thin: M belongs to " + I.toString());
  return {r, w};
}

Verdict iStarToI(const Sequence& s, const IStarWitness& w, const Ideal& I, const Point& xi, std::uint64_t depth,
                 std::uint64_t horizon) {
  Ideal Ip = idealOn(I, s.domain());
  Verdict f = w.M == s.domain() ? Verdict::yes("M is the whole index set") : filterMember(Ip, w.M, s.domain());
  if (!f.isTrue()) fail(ErrorKind::WitnessInvalid, "M is not certified in the dual filter: " + f.summary());
  IndexSet K = subtract(s.domain(), w.M);
  std::vector<std::string> tr{"K = domain \\ M = " + K.toString()};
  bool exact = true;
  for (const Nbhd& U : basisFamily(s.space(), xi, depth)) {
    IndexSet E = exceptionalSet(s, U, horizon);
    IndexSet EM = intersect(E, w.M);
    Verdict fin = isFiniteSet(EM);
    if (fin.isFalse())
      fail(ErrorKind::WitnessInvalid, "infinitely many terms of M lie outside " + U.toString() + ": " + EM.toString());
    std::uint64_t cut = lastElement(EM, horizon);
    if (fin.isUnknown()) {
      auto recorded = std::find_if(w.cuts.begin(), w.cuts.end(), [&](const auto& c) { return c.first == U.toString(); });
      if (recorded != w.cuts.end() && cut > recorded->second)
        fail(ErrorKind::WitnessInvalid, std::to_string(cut) + " in M lies outside " + U.toString() + " past the cut " +
                                            std::to_string(recorded->second));
      // A symbolic witness fixes its cuts by construction; the scan only confirms them.
      if (recorded == w.cuts.end() || !w.symbolic) exact = false;
      else tr.push_back(U.toString() + ": cut " + std::to_string(recorded->second) + " fixed by the construction");
    }
    tr.push_back(U.toString() + ": E_U within {p_1..p_" + std::to_string(prefixCount(w.M, cut)) + "} and K");
  }
  if (!exact || !w.symbolic)
    return Verdict::unknown(horizon, "inclusions hold for the tested neighborhoods only", tr);
  Verdict v = Verdict::yes("I* witness: every exceptional set lies in a finite head of M together with K", tr);
  v.trace.push_back("tail certificate: " + w.tailLimitCertificate);
  return v;
}

std::vector<std::uint64_t> classicalExtract(const Sequence& s, const Ideal& I, const Point& xi, std::uint64_t k,
                                            std::uint64_t horizon) {
  if (!s.space().firstCountable()) fail(ErrorKind::ShapeMismatch, "space is not first countable");
  ConvergenceReport r = iConverges(s, I, xi, std::max<std::uint64_t>(k, 1));
  bool ok = r.overall.isTrue();
  if (r.overall.isUnknown()) {
    ok = std::all_of(r.perBasis.begin(), r.perBasis.end(), [](const BasisCheck& b) { return b.verdict.isTrue(); });
  }
  if (!ok) fail(ErrorKind::ExtractionStalled, "precondition failed: I-convergence is " + r.overall.summary());
  auto basis = basisFamily(s.space(), xi, k);
  std::vector<std::uint64_t> out;
  std::uint64_t last = 0;
  for (std::uint64_t j = 0; j < k; ++j) {
    std::optional<std::uint64_t> n = firstAbove(s.domain(), last);
    while (n && *n <= horizon && !inNbhd(s.space(), s.at(*n), basis[j])) n = firstAbove(s.domain(), *n);
    if (!n || *n > horizon)
      fail(ErrorKind::ExtractionStalled, "no index up to " + std::to_string(horizon) + " enters " + basis[j].toString());
    out.push_back(*n);
    last = *n;
  }
  return out;
}

ConvergenceReport productVerdict(const Sequence& s, const Ideal& I, const Point& xi, std::uint64_t coordDepth,
                                 std::uint64_t horizon) {
  if (coordDepth == 0) fail(ErrorKind::OutOfRange, "coordinate depth must be at least 1");
  const Space& sp = s.space();
  if (sp.kind() == Space::UnitInterval) fail(ErrorKind::ShapeMismatch, "coordinatewise verdicts need a product space");
  checkPoint(sp, xi);
  Ideal Ip = idealOn(I, s.domain());
  ConvergenceReport r = header(s, Ip, xi, coordDepth, Mode::I);
  bool anyFalse = false, allTrue = true;
  if (sp.kind() == Space::CantorCube) {
    r.schedule = "coordinates 1.." + std::to_string(coordDepth);
    for (std::uint64_t i = 1; i <= coordDepth; ++i) {
      // {0,1} is discrete, so one cylinder decides each coordinate.
      Nbhd U = Nbhd::cylinder({{i, xi.cube.bit(i)}});
      IndexSet E = exceptionalSet(s, U, horizon);
      Verdict v = member(Ip, E);
      anyFalse = anyFalse || v.isFalse();
      allTrue = allTrue && v.isTrue();
      r.perBasis.push_back({U, E.toString(), v});
    }
  } else {
    auto parts = productParts(s);
    if (!parts || xi.kind != Point::Tuple || xi.parts.size() != parts->size())
      fail(ErrorKind::ShapeMismatch, "limit does not match the product");
    r.schedule = "factors 1.." + std::to_string(parts->size()) + " at depth " + std::to_string(coordDepth);
    for (std::size_t i = 0; i < parts->size(); ++i) {
      ConvergenceReport c = iConverges((*parts)[i], I, xi.parts[i], coordDepth, horizon);
      anyFalse = anyFalse || c.overall.isFalse();
      allTrue = allTrue && c.overall.isTrue();
      Nbhd U = basisFamily((*parts)[i].space(), xi.parts[i], coordDepth).back();
      r.perBasis.push_back({U, "factor " + std::to_string(i + 1), c.overall});
    }
  }
  std::vector<std::string> tr;
  for (const auto& b : r.perBasis) tr.push_back(b.nbhd.toString() + ": " + b.verdict.summary());
  if (anyFalse) {
    r.overall = Verdict::no("some coordinate does not converge; projections are continuous", tr);
    return r;
  }
  auto sym = symbolicI(s, I, Ip, xi, horizon);
  if (allTrue && sym && sym->verdict.isTrue()) {
    tr.insert(tr.begin(), sym->verdict.rule);
    r.overall = Verdict::yes("all tested coordinates converge and the argument is uniform in the coordinate", tr);
    return r;
  }
  if (sym && sym->verdict.isFalse()) {
    r.overall = sym->verdict;
    return r;
  }
  r.overall = Verdict::unknown(horizon, "tested coordinates pass; no argument uniform in the coordinate", tr);
  return r;
}

}  // namespace icomp
