#include "icomp/ideals.hpp"

#include <algorithm>
#include <set>

#include "icomp/density.hpp"
#include "icomp/error.hpp"

namespace icomp {

namespace {

const DecompositionPtr kNone;

std::string familyName(IdealKind k) {
  switch (k) {
    case IdealKind::Fin: return "fin";
    case IdealKind::Density: return "density";
    case IdealKind::DecA: return "decA";
    case IdealKind::DecB: return "decB";
    case IdealKind::Restriction: return "restrict";
  }
  return "?";
}

std::string profileText(const IndexSet& a) {
  DensityResult d = densityOf(a);
  return "density profile: " + d.toString();
}

std::uint64_t profileHorizon(const IndexSet& a) {
  std::uint64_t h = 0;
  for (auto N : defaultProfileHorizons())
    if (N <= a.horizon()) h = N;
  if (h == 0 && a.horizon() != kNoBound) h = a.horizon();
  return h;
}

// Blocks a generator can meet, as an upper bound; nullopt if even that is unknown.
std::optional<BlockSet> spreadBound(const Generator& g, const DecompositionPtr& owner, const DecompositionPtr& delta,
                                    bool& exact) {
  if (g.labelled() && sameDecomposition(owner, delta)) {
    GeneratorForm f = generatorForm(g, *owner);
    if (f.state == GeneratorForm::Empty) return BlockSet();
    if (f.state == GeneratorForm::Opaque && g.kind == GeneratorKind::BlockProgression) exact = false;
    return BlockSet::single(g.block);
  }
  return generatorSpread(g, owner, delta);
}

Verdict decMember(const Ideal& I, const IndexSet& A, bool countFinite) {
  const DecompositionPtr& delta = I.decomposition();
  const std::string tag = familyName(I.kind()) + "(" + delta->name() + ")";
  if (const SampledData* s = A.sample()) {
    std::set<std::uint64_t> hit;
    for (auto n : s->members) hit.insert(delta->blockOf(n));
    return Verdict::unknown(s->horizon, tag + ": sampled set",
                            {"blocks hit below horizon: " + std::to_string(hit.size())});
  }
  BlockSet blocks;
  bool exact = true;
  for (const auto& g : A.generators()) {
    auto b = spreadBound(g, A.decomposition(), delta, exact);
    if (!b) {
      return Verdict::unknown(0, tag + ": block spread not computable",
                              {"generator " + toString(g, A.decomposition()) + " over an opaque decomposition"});
    }
    if (!b->isFinite()) {
      std::string which = countFinite ? "meets infinitely many blocks" : "is infinite in infinitely many blocks";
      return Verdict::no(tag + ": " + which,
                         {"generator " + toString(g, A.decomposition()) + " meets blocks " + b->toString(),
                          countFinite ? "every block it meets is met infinitely often"
                                      : "standard reading: finitely many blocks met infinitely"});
    }
    blocks = blocks.unite(*b);
  }
  std::vector<std::string> trace;
  if (countFinite) {
    std::vector<std::uint64_t> js;
    for (auto f : A.finitePart()) js.push_back(delta->blockOf(f));
    BlockSet all = blocks.unite(BlockSet::of(js));
    trace.push_back("blocks met: " + all.toString());
    return Verdict::yes(tag + ": meets " + std::string(exact ? "exactly " : "at most ") +
                            std::to_string(all.count()) + " block" + (all.count() == 1 ? "" : "s"),
                        trace);
  }
  trace.push_back("blocks met infinitely: " + blocks.toString());
  trace.push_back("standard reading: finitely many blocks met infinitely");
  return Verdict::yes(tag + ": infinite in " + std::string(exact ? "exactly " : "at most ") +
                          std::to_string(blocks.count()) + " block" + (blocks.count() == 1 ? "" : "s"),
                      trace);
}

Verdict finMember(const IndexSet& A) {
  if (const SampledData* s = A.sample()) {
    if (s->certifiedDensity && *s->certifiedDensity > 0)
      return Verdict::no("fin: structural density " + toString(*s->certifiedDensity) + " > 0 forces an infinite set",
                         {s->note});
    return Verdict::unknown(s->horizon, "fin: sampled set", {std::to_string(s->members.size()) + " members up to horizon"});
  }
  Verdict v = isFiniteSet(A);
  if (v.isTrue()) return Verdict::yes("fin: finite set", v.trace);
  if (v.isFalse()) return Verdict::no("fin: infinite set", v.trace);
  return v;
}

Verdict densityMember(const IndexSet& A) {
  if (const SampledData* s = A.sample()) {
    if (s->certifiedDensity) {
      const Rational& q = *s->certifiedDensity;
      std::vector<std::string> tr{s->note, profileText(A)};
      if (q == 0) return Verdict::yes("density: structural density 0", tr);
      return Verdict::no("density: structural density " + toString(q) + " > 0", tr);
    }
    return Verdict::unknown(profileHorizon(A), "density: sampled set", {profileText(A)});
  }
  auto q = exactDensity(A);
  if (!q) return Verdict::unknown(profileHorizon(A), "density: overlap without closed form", {profileText(A)});
  if (*q == 0) return Verdict::yes("density: exact density 0");
  return Verdict::no("density: exact density " + toString(*q) + " > 0");
}

void requireNonthin(const Ideal& I, const std::vector<IndexSet>& As) {
  for (std::size_t i = 0; i < As.size(); ++i) {
    Verdict v = member(I, As[i]);
    if (!v.isFalse())
      fail(ErrorKind::NotNonthin, "A_" + std::to_string(i + 1) + " = " + As[i].toString() + " is not certified outside " +
                                      I.toString() + " (" + v.summary() + ")");
  }
}

}  // namespace

Ideal Ideal::fin() {
  Ideal I;
  I.kind_ = IdealKind::Fin;
  return I;
}

Ideal Ideal::density() {
  Ideal I;
  I.kind_ = IdealKind::Density;
  return I;
}

Ideal Ideal::decA(DecompositionPtr delta) {
  Ideal I;
  I.kind_ = IdealKind::DecA;
  I.delta_ = delta ? std::move(delta) : twoAdic();
  return I;
}

Ideal Ideal::decB(DecompositionPtr delta) {
  Ideal I;
  I.kind_ = IdealKind::DecB;
  I.delta_ = delta ? std::move(delta) : twoAdic();
  return I;
}

IdealKind Ideal::family() const { return base_ ? base_->family() : kind_; }

const DecompositionPtr& Ideal::decomposition() const {
  if (base_) return base_->decomposition();
  return delta_ ? delta_ : kNone;
}

bool Ideal::supportsShrinkA() const {
  if (base_) return base_->supportsShrinkA();
  return kind_ == IdealKind::DecA;
}

bool Ideal::supportsShrinkB() const {
  if (base_) return base_->supportsShrinkB();
  return kind_ == IdealKind::DecA || kind_ == IdealKind::DecB;
}

std::string Ideal::toString() const {
  switch (kind_) {
    case IdealKind::Fin:
    case IdealKind::Density: return familyName(kind_);
    case IdealKind::DecA:
    case IdealKind::DecB: return familyName(kind_) + "(" + delta_->name() + ")";
    case IdealKind::Restriction: return "restrict(" + base_->toString() + ", " + support_->toString() + ")";
  }
  return "?";
}

Ideal restrict(const Ideal& I, const IndexSet& M) {
  Ideal R;
  R.kind_ = IdealKind::Restriction;
  R.base_ = std::make_shared<const Ideal>(I);
  R.support_ = std::make_shared<const IndexSet>(M);
  Verdict m = member(I, M);
  if (m.isFalse()) R.nontrivial_ = Verdict::yes("nontrivial restriction: support not in " + I.toString(), {m.rule});
  else if (m.isTrue())
    R.nontrivial_ = Verdict::no("trivial restriction: support belongs to " + I.toString(), {m.rule});
  else R.nontrivial_ = Verdict::unknown(m.horizon, "restriction nontriviality undecided", {m.rule});
  return R;
}

Verdict member(const Ideal& I, const IndexSet& A) {
  switch (I.kind()) {
    case IdealKind::Fin: return finMember(A);
    case IdealKind::Density: return densityMember(A);
    case IdealKind::DecA: return decMember(I, A, true);
    case IdealKind::DecB: return decMember(I, A, false);
    case IdealKind::Restriction: {
      Verdict sub = isSubset(A, *I.support());
      if (sub.isFalse()) {
        std::vector<std::string> tr = sub.trace;
        return Verdict::no("restriction: set not contained in support", tr);
      }
      Verdict inner = member(*I.base(), A);
      if (sub.isUnknown()) {
        if (inner.isFalse()) return Verdict::no("restriction: not in base ideal", {inner.rule});
        return Verdict::unknown(sub.horizon, "restriction: containment in support undecided", sub.trace);
      }
      inner.rule = "restriction: contained in support; " + inner.rule;
      return inner;
    }
  }
  return Verdict::unknown(0, "unreachable");
}

Verdict filterMember(const Ideal& I, const IndexSet& A, const IndexSet& domain, std::uint64_t checkDepth) {
  std::uint64_t depth = std::min({checkDepth, A.horizon(), domain.horizon()});
  for (std::uint64_t n = 1; n <= depth; ++n)
    if (contains(A, n) && !contains(domain, n))
      fail(ErrorKind::DomainViolation, std::to_string(n) + " lies in the set but not in the domain");
  IndexSet rest = subtract(domain, A);
  Verdict v = member(I, rest);
  v.trace.insert(v.trace.begin(), "domain \\ set = " + rest.toString());
  v.trace.push_back("containment checked up to " + std::to_string(depth));
  v.rule = "filter via complement: " + v.rule;
  return v;
}

ShrinkWitness shrinkA(const Ideal& I, const std::vector<IndexSet>& As, std::vector<std::uint64_t> sizes) {
  if (!I.supportsShrinkA())
    fail(ErrorKind::UnsupportedShrink, I.toString() + " does not support selection with finite parts");
  if (As.empty()) fail(ErrorKind::OutOfRange, "shrinkA needs at least one set");
  requireNonthin(I, As);
  if (sizes.empty())
    for (std::size_t i = 0; i < As.size(); ++i) sizes.push_back(i + 1);
  if (sizes.size() != As.size()) fail(ErrorKind::OutOfRange, "one size per set required");
  const DecompositionPtr& delta = I.decomposition();

  ShrinkWitness w;
  std::set<std::uint64_t> used;
  std::vector<std::uint64_t> picks;
  for (std::size_t i = 0; i < As.size(); ++i) {
    auto met = metBlocks(As[i], delta);
    if (!met) fail(ErrorKind::NoFreshBlock, "blocks of A_" + std::to_string(i + 1) + " not computable");
    std::vector<std::uint64_t> part, partBlocks;
    std::optional<std::uint64_t> j = met->first();
    while (part.size() < sizes[i]) {
      while (j && used.count(*j)) j = met->next(*j);
      if (!j) fail(ErrorKind::NoFreshBlock, "A_" + std::to_string(i + 1) + " has no fresh block left");
      auto first = firstAbove(intersect(As[i], IndexSet::block(*j, delta)), 0);
      if (!first) fail(ErrorKind::NoFreshBlock, "block " + std::to_string(*j) + " element beyond 64-bit range");
      part.push_back(*first);
      partBlocks.push_back(*j);
      used.insert(*j);
      j = met->next(*j);
    }
    picks.insert(picks.end(), part.begin(), part.end());
    IndexSet b = IndexSet::finite(part);
    w.perPartCertificates.push_back(member(I, b));
    w.parts.push_back(std::move(b));
    w.blocks.push_back(std::move(partBlocks));
  }
  std::uint64_t c = *std::max_element(picks.begin(), picks.end());
  IndexSet rest = intersect(As.back(), IndexSet::tail(c + 1));
  w.unionSet = unite(IndexSet::finite(picks), rest);
  w.continuation = "parts after #" + std::to_string(As.size()) + " are consecutive finite windows of A_" +
                   std::to_string(As.size()) + " above " + std::to_string(c);
  w.unionVerdict = member(I, w.unionSet);
  return w;
}

ShrinkWitness shrinkB(const Ideal& I, const std::vector<IndexSet>& As) {
  if (!I.supportsShrinkB())
    fail(ErrorKind::UnsupportedShrink, I.toString() + " does not support block selection");
  if (As.empty()) fail(ErrorKind::OutOfRange, "shrinkB needs at least one set");
  requireNonthin(I, As);
  const DecompositionPtr& delta = I.decomposition();
  constexpr std::uint64_t kSignatureScan = 4096;

  ShrinkWitness w;
  std::set<std::uint64_t> used;
  std::vector<std::uint64_t> chosen;
  for (std::size_t i = 0; i < As.size(); ++i) {
    std::optional<std::uint64_t> j;
    if (auto inf = infiniteBlocks(As[i], delta)) {
      for (j = inf->first(); j && used.count(*j); j = inf->next(*j)) {
      }
    } else {
      for (std::uint64_t k = 1; k <= kSignatureScan && !j; ++k)
        if (!used.count(k) && blockSignature(As[i], delta, k) == BlockSignature::Infinite) j = k;
    }
    if (!j) fail(ErrorKind::NoFreshBlock, "A_" + std::to_string(i + 1) + " certifies no fresh infinite block");
    used.insert(*j);
    chosen.push_back(*j);
    IndexSet b = intersect(As[i], IndexSet::block(*j, delta));
    w.perPartCertificates.push_back(member(I, b));
    w.parts.push_back(std::move(b));
    w.blocks.push_back({*j});
  }
  std::sort(chosen.begin(), chosen.end());
  IndexSet usedBlocks = IndexSet::blocks(BlockSet::of(chosen), delta);
  IndexSet rest = subtract(As.back(), usedBlocks);
  IndexSet u = rest;
  for (const auto& b : w.parts) u = unite(u, b);
  w.unionSet = u;
  w.continuation = "parts after #" + std::to_string(As.size()) + " are the blocks of A_" + std::to_string(As.size()) +
                   " outside the chosen ones";
  w.unionVerdict = member(I, w.unionSet);
  return w;
}

Ideal parseIdeal(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto decomp = [&](std::string_view rest) -> DecompositionPtr {
    rest = trim(rest);
    if (rest.empty()) return twoAdic();
    if (rest.front() != '(' || rest.back() != ')')
      fail(ErrorKind::ParseError, "bad decomposition in '" + std::string(text) + "'");
    std::string_view name = trim(rest.substr(1, rest.size() - 2));
    if (name != "2adic") fail(ErrorKind::UnknownName, "decomposition '" + std::string(name) + "'");
    return twoAdic();
  };
  if (text == "fin") return Ideal::fin();
  if (text == "density") return Ideal::density();
  if (text.starts_with("decA")) return Ideal::decA(decomp(text.substr(4)));
  if (text.starts_with("decB")) return Ideal::decB(decomp(text.substr(4)));
  if (text.starts_with("restrict(") && text.back() == ')') {
    std::string_view inner = text.substr(9, text.size() - 10);
    int depth = 0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      char c = inner[i];
      if (c == '(' || c == '{' || c == '[') ++depth;
      else if (c == ')' || c == '}' || c == ']') --depth;
      else if (c == ',' && depth == 0) return restrict(parseIdeal(inner.substr(0, i)), parseIndexSet(inner.substr(i + 1)));
    }
    fail(ErrorKind::ParseError, "restrict needs an ideal and a set: '" + std::string(text) + "'");
  }
  fail(ErrorKind::UnknownName, "ideal '" + std::string(text) + "'");
}

}  // namespace icomp
