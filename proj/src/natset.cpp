#include "icomp/natset.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "icomp/error.hpp"

namespace icomp {

namespace {

constexpr std::uint64_t kScanLimit = std::uint64_t{1} << 24;
constexpr std::size_t kGeneratorCap = 4096;
constexpr std::uint64_t kHeadCap = std::uint64_t{1} << 16;
constexpr std::uint64_t kInclusionExclusionNodes = std::uint64_t{1} << 21;

bool apHas(const Nat& a, const Nat& d, std::uint64_t n) {
  if (fitsU64(a) && fitsU64(d)) {
    auto a64 = static_cast<std::uint64_t>(a), d64 = static_cast<std::uint64_t>(d);
    return n >= a64 && (n - a64) % d64 == 0;
  }
  Nat nn(n);
  return nn >= a && (nn - a) % d == 0;
}

void sortUnique(std::vector<std::uint64_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool sortedHas(const std::vector<std::uint64_t>& v, std::uint64_t x) {
  return std::binary_search(v.begin(), v.end(), x);
}

bool generatorLess(const Generator& a, const Generator& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.block != b.block) return a.block < b.block;
  if (a.start != b.start) return a.start < b.start;
  return a.step < b.step;
}

// The arithmetic constraint of a generator, ignoring its block.
Progression constraintOf(const Generator& g) {
  switch (g.kind) {
    case GeneratorKind::Tail:
    case GeneratorKind::BlockTail: return Progression{g.start, 1};
    case GeneratorKind::Progression:
    case GeneratorKind::BlockProgression: return Progression{g.start, g.step};
    case GeneratorKind::Block: return Progression{1, 1};
  }
  return Progression{1, 1};
}

Generator fromProgression(const Progression& r, std::uint64_t label, const Decomposition& delta) {
  if (label != 0) {
    auto b = delta.blockProgression(label);
    if (b && r.step == b->step) {
      if (r.first == b->first) return Generator::block_(label);
      return Generator::blockTail(label, r.first);
    }
    return Generator::blockAp(label, r.first, r.step);
  }
  if (r.step == 1) return Generator::tail(r.first);
  return Generator::ap(r.first, r.step);
}

// nullopt: certainly empty.
std::optional<Generator> generatorIntersect(const Generator& g, const Generator& h, const Decomposition& delta) {
  if (g.labelled() && h.labelled() && g.block != h.block) return std::nullopt;
  if (g == h) return g;
  GeneratorForm fg = generatorForm(g, delta), fh = generatorForm(h, delta);
  if (fg.state == GeneratorForm::Empty || fh.state == GeneratorForm::Empty) return std::nullopt;
  std::uint64_t label = g.labelled() ? g.block : h.block;
  if (fg.state == GeneratorForm::Known && fh.state == GeneratorForm::Known) {
    auto r = intersect(fg.p, fh.p);
    if (!r) return std::nullopt;
    if (*r == fg.p) return g;
    if (*r == fh.p) return h;
    return fromProgression(*r, label, delta);
  }
  auto r = intersect(constraintOf(g), constraintOf(h));
  if (!r) return std::nullopt;
  if (r->step == 1) {
    if (r->first == 1) return Generator::block_(label);
    return Generator::blockTail(label, r->first);
  }
  return Generator::blockAp(label, r->first, r->step);
}

bool generatorSubset(const Generator& g, const Generator& h, const Decomposition& delta) {
  if (g == h) return true;
  if (g.labelled() && h.labelled() && g.block != h.block) return false;
  GeneratorForm fg = generatorForm(g, delta), fh = generatorForm(h, delta);
  if (fg.state == GeneratorForm::Empty) return true;
  if (fg.state == GeneratorForm::Known && fh.state == GeneratorForm::Known)
    return isSubprogression(fg.p, fh.p);
  if (h.kind == GeneratorKind::Block && g.labelled()) return g.block == h.block;
  if (h.kind == GeneratorKind::Tail && h.start == 1) return true;
  return false;
}

bool definitelyInfinite(const Generator& g, const Decomposition& delta) {
  if (g.kind != GeneratorKind::BlockProgression) return true;
  return generatorForm(g, delta).state == GeneratorForm::Known;
}

Generator advancePast(const Generator& g, const Progression& p) {
  Nat f = p.first;
  switch (g.kind) {
    case GeneratorKind::Tail: return Generator::tail(f + 1);
    case GeneratorKind::Progression: return Generator::ap(f + g.step, g.step);
    case GeneratorKind::Block:
    case GeneratorKind::BlockTail: return Generator::blockTail(g.block, f + 1);
    case GeneratorKind::BlockProgression: return Generator::blockAp(g.block, f + g.step, g.step);
  }
  return g;
}

std::uint64_t countGenerator(const Generator& g, const Decomposition& delta, std::uint64_t N) {
  GeneratorForm f = generatorForm(g, delta);
  if (f.state == GeneratorForm::Empty) return 0;
  if (f.state == GeneratorForm::Known) return toU64(f.p.countUpTo(Nat(N)));
  if (N > kScanLimit) fail(ErrorKind::HorizonExceeded, "block scan beyond " + std::to_string(kScanLimit));
  std::uint64_t c = 0;
  for (std::uint64_t n = 1; n <= N; ++n)
    if (generatorContains(g, delta, n)) ++c;
  return c;
}

std::optional<std::uint64_t> generatorNextAbove(const Generator& g, const Decomposition& delta, std::uint64_t n) {
  GeneratorForm f = generatorForm(g, delta);
  if (f.state == GeneratorForm::Empty) return std::nullopt;
  if (f.state == GeneratorForm::Known) {
    Nat m(n);
    Nat r = f.p.first > m ? f.p.first : Nat(f.p.first + ((m - f.p.first) / f.p.step + 1) * f.p.step);
    if (!fitsU64(r)) return std::nullopt;
    return static_cast<std::uint64_t>(r);
  }
  for (std::uint64_t k = n + 1; k <= n + kScanLimit; ++k)
    if (generatorContains(g, delta, k)) return k;
  fail(ErrorKind::HorizonExceeded, "no element found within scan limit");
}

std::string joinNumbers(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

std::vector<std::uint64_t> sortedUnion(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::uint64_t> sortedIntersection(const std::vector<std::uint64_t>& a,
                                                const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::uint64_t> sortedDifference(const std::vector<std::uint64_t>& a,
                                              const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string describeForFallback(const IndexSet& s) {
  std::string t = s.toString();
  if (t.size() > 60) t = t.substr(0, 57) + "...";
  return t;
}

bool hasLabelled(const IndexSet& s) {
  for (const auto& g : s.generators())
    if (g.labelled()) return true;
  return false;
}

}  // namespace

// ---------------------------------------------------------------- Generator

Generator Generator::tail(Nat n0) {
  if (n0 < 1) n0 = 1;
  return Generator{GeneratorKind::Tail, 0, std::move(n0), 1};
}

Generator Generator::ap(Nat a, Nat d) {
  if (d < 1) fail(ErrorKind::OutOfRange, "progression step must be >= 1");
  if (a < 1) {
    // Shift the start into the positive naturals.
    Nat k = (Nat(1) - a + d - 1) / d;
    a += k * d;
  }
  if (d == 1) return tail(a);
  return Generator{GeneratorKind::Progression, 0, std::move(a), std::move(d)};
}

Generator Generator::block_(std::uint64_t j) {
  if (j < 1) fail(ErrorKind::OutOfRange, "block index must be >= 1");
  return Generator{GeneratorKind::Block, j, 1, 1};
}

Generator Generator::blockTail(std::uint64_t j, Nat n0) {
  if (j < 1) fail(ErrorKind::OutOfRange, "block index must be >= 1");
  if (n0 <= 1) return block_(j);
  return Generator{GeneratorKind::BlockTail, j, std::move(n0), 1};
}

Generator Generator::blockAp(std::uint64_t j, Nat a, Nat d) {
  if (j < 1) fail(ErrorKind::OutOfRange, "block index must be >= 1");
  if (d < 1) fail(ErrorKind::OutOfRange, "progression step must be >= 1");
  if (a < 1) {
    Nat k = (Nat(1) - a + d - 1) / d;
    a += k * d;
  }
  if (d == 1) return blockTail(j, a);
  return Generator{GeneratorKind::BlockProgression, j, std::move(a), std::move(d)};
}

GeneratorForm generatorForm(const Generator& g, const Decomposition& delta) {
  switch (g.kind) {
    case GeneratorKind::Tail: return {GeneratorForm::Known, Progression{g.start, 1}};
    case GeneratorKind::Progression: return {GeneratorForm::Known, Progression{g.start, g.step}};
    default: break;
  }
  auto b = delta.blockProgression(g.block);
  if (!b) return {GeneratorForm::Opaque, {}};
  if (g.kind == GeneratorKind::Block) return {GeneratorForm::Known, *b};
  auto r = intersect(*b, constraintOf(g));
  if (!r) return {GeneratorForm::Empty, {}};
  return {GeneratorForm::Known, *r};
}

bool generatorContains(const Generator& g, const Decomposition& delta, std::uint64_t n) {
  switch (g.kind) {
    case GeneratorKind::Tail: return Nat(n) >= g.start;
    case GeneratorKind::Progression: return apHas(g.start, g.step, n);
    case GeneratorKind::Block: return delta.blockOf(n) == g.block;
    case GeneratorKind::BlockTail: return delta.blockOf(n) == g.block && Nat(n) >= g.start;
    case GeneratorKind::BlockProgression: return delta.blockOf(n) == g.block && apHas(g.start, g.step, n);
  }
  return false;
}

const char* signatureName(BlockSignature s) {
  switch (s) {
    case BlockSignature::Empty: return "Empty";
    case BlockSignature::FiniteNonempty: return "FiniteNonempty";
    case BlockSignature::Infinite: return "Infinite";
    case BlockSignature::Unknown: return "Unknown";
  }
  return "?";
}

// ---------------------------------------------------------------- IndexSet

IndexSet::IndexSet() : delta_(twoAdic()) {}

IndexSet IndexSet::finite(std::vector<std::uint64_t> elements) {
  for (auto e : elements)
    if (e == 0) fail(ErrorKind::OutOfRange, "naturals start at 1");
  IndexSet s;
  s.finite_ = std::move(elements);
  s.normalize();
  return s;
}

IndexSet IndexSet::naturals() { return tail(1); }

IndexSet IndexSet::tail(std::uint64_t n0) { return normalForm({}, {Generator::tail(n0)}, {}); }

IndexSet IndexSet::ap(std::uint64_t a, std::uint64_t d) { return apNat(Nat(a), Nat(d)); }

IndexSet IndexSet::apNat(Nat a, Nat d) { return normalForm({}, {Generator::ap(std::move(a), std::move(d))}, {}); }

IndexSet IndexSet::block(std::uint64_t j, DecompositionPtr delta) {
  return normalForm({}, {Generator::block_(j)}, {}, std::move(delta));
}

IndexSet IndexSet::blockTail(std::uint64_t j, std::uint64_t n0, DecompositionPtr delta) {
  return normalForm({}, {Generator::blockTail(j, n0)}, {}, std::move(delta));
}

IndexSet IndexSet::blockAp(std::uint64_t j, std::uint64_t a, std::uint64_t d, DecompositionPtr delta) {
  return normalForm({}, {Generator::blockAp(j, a, d)}, {}, std::move(delta));
}

IndexSet IndexSet::blocks(const BlockSet& b, DecompositionPtr delta, std::uint64_t fallbackHorizon) {
  std::vector<Generator> gens;
  for (const auto& [lo, hi] : b.ranges()) {
    if (hi == kNoBound) {
      auto p = delta->tailProgression(lo);
      if (!p) {
        auto d = delta;
        return sampleOf([d, b](std::uint64_t n) { return b.contains(d->blockOf(n)); }, fallbackHorizon,
                        "blocks " + b.toString() + " of " + delta->name());
      }
      gens.push_back(Generator::ap(p->first, p->step));
      break;
    }
    if (hi - lo + 1 > kGeneratorCap * 4) fail(ErrorKind::Overflow, "too many blocks: " + b.toString());
    for (std::uint64_t j = lo; j <= hi; ++j) gens.push_back(Generator::block_(j));
  }
  return normalForm({}, std::move(gens), {}, std::move(delta));
}

IndexSet IndexSet::normalForm(std::vector<std::uint64_t> finite, std::vector<Generator> gens,
                              std::vector<std::uint64_t> excluded, DecompositionPtr delta) {
  IndexSet s;
  s.finite_ = std::move(finite);
  s.gens_ = std::move(gens);
  s.excluded_ = std::move(excluded);
  s.delta_ = delta ? std::move(delta) : twoAdic();
  for (auto e : s.finite_)
    if (e == 0) fail(ErrorKind::OutOfRange, "naturals start at 1");
  s.normalize();
  return s;
}

IndexSet IndexSet::sampled(std::vector<std::uint64_t> members, std::uint64_t horizon, std::string note,
                           std::optional<Rational> certifiedDensity) {
  sortUnique(members);
  while (!members.empty() && members.back() > horizon) members.pop_back();
  if (!members.empty() && members.front() == 0) fail(ErrorKind::OutOfRange, "naturals start at 1");
  IndexSet s;
  auto data = std::make_shared<SampledData>();
  data->members = std::move(members);
  data->horizon = horizon;
  data->note = std::move(note);
  data->certifiedDensity = std::move(certifiedDensity);
  s.sampled_ = std::move(data);
  return s;
}

IndexSet IndexSet::sampleOf(const std::function<bool(std::uint64_t)>& pred, std::uint64_t horizon,
                            std::string note) {
  std::vector<std::uint64_t> m;
  for (std::uint64_t n = 1; n <= horizon; ++n)
    if (pred(n)) m.push_back(n);
  return sampled(std::move(m), horizon, std::move(note));
}

std::uint64_t IndexSet::horizon() const { return sampled_ ? sampled_->horizon : kNoBound; }

void IndexSet::normalize() {
  if (sampled_) return;
  const Decomposition& d = *delta_;
  sortUnique(finite_);
  sortUnique(excluded_);

  std::vector<Generator> kept;
  for (auto& g : gens_)
    if (generatorForm(g, d).state != GeneratorForm::Empty) kept.push_back(std::move(g));
  std::sort(kept.begin(), kept.end(), generatorLess);
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  if (kept.size() <= 64) {
    std::vector<Generator> absorbed;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      bool inside = false;
      for (std::size_t k = 0; k < kept.size() && !inside; ++k)
        if (k != i && generatorSubset(kept[i], kept[k], d)) {
          // Keep one of two mutually contained generators.
          inside = !(generatorSubset(kept[k], kept[i], d) && k > i);
        }
      if (!inside) absorbed.push_back(kept[i]);
    }
    kept = std::move(absorbed);
  }
  gens_ = std::move(kept);

  finite_ = sortedDifference(finite_, excluded_);

  if (!excluded_.empty()) {
    Nat maxE(excluded_.back());
    for (auto& g : gens_) {
      for (;;) {
        GeneratorForm f = generatorForm(g, d);
        if (f.state != GeneratorForm::Known || f.p.first > maxE) break;
        if (!sortedHas(excluded_, static_cast<std::uint64_t>(f.p.first))) break;
        g = advancePast(g, f.p);
      }
    }
    std::sort(gens_.begin(), gens_.end(), generatorLess);
    gens_.erase(std::unique(gens_.begin(), gens_.end()), gens_.end());
  }

  auto covered = [&](std::uint64_t n) {
    for (const auto& g : gens_)
      if (generatorContains(g, d, n)) return true;
    return false;
  };
  std::vector<std::uint64_t> f2, e2;
  for (auto f : finite_)
    if (!covered(f)) f2.push_back(f);
  for (auto e : excluded_)
    if (covered(e)) e2.push_back(e);
  finite_ = std::move(f2);
  excluded_ = std::move(e2);
  if (gens_.empty() || !hasLabelled(*this)) {
    // Without block generators the decomposition is irrelevant.
    delta_ = twoAdic();
  }
}

bool IndexSet::operator==(const IndexSet& o) const {
  if (isSampled() || o.isSampled()) {
    if (!isSampled() || !o.isSampled()) return false;
    return sampled_->members == o.sampled_->members && sampled_->horizon == o.sampled_->horizon;
  }
  return finite_ == o.finite_ && gens_ == o.gens_ && excluded_ == o.excluded_ &&
         sameDecomposition(delta_, o.delta_);
}

std::string toString(const Generator& g, const DecompositionPtr& delta) {
  std::string tag;
  if (g.labelled() && delta && delta->name() != "2adic") tag = "[" + delta->name() + "]";
  switch (g.kind) {
    case GeneratorKind::Tail: return "tail(" + toString(g.start) + ")";
    case GeneratorKind::Progression: return "ap(" + toString(g.start) + "," + toString(g.step) + ")";
    case GeneratorKind::Block: return "block" + tag + "(" + std::to_string(g.block) + ")";
    case GeneratorKind::BlockTail:
      return "blocktail" + tag + "(" + std::to_string(g.block) + "," + toString(g.start) + ")";
    case GeneratorKind::BlockProgression:
      return "blockap" + tag + "(" + std::to_string(g.block) + "," + toString(g.start) + "," +
             toString(g.step) + ")";
  }
  return "?";
}

std::string IndexSet::toString() const {
  if (sampled_) {
    return "sampled[" + sampled_->note + "; horizon=" + std::to_string(sampled_->horizon) +
           "; size=" + std::to_string(sampled_->members.size()) + "]";
  }
  std::vector<std::string> parts;
  if (!finite_.empty()) parts.push_back("fin{" + joinNumbers(finite_) + "}");
  for (const auto& g : gens_) parts.push_back(icomp::toString(g, delta_));
  if (parts.empty()) return "fin{}";
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += " + ";
    s += parts[i];
  }
  if (!excluded_.empty()) s += " - fin{" + joinNumbers(excluded_) + "}";
  return s;
}

// ---------------------------------------------------------------- queries

bool contains(const IndexSet& s, std::uint64_t n) {
  if (n == 0) fail(ErrorKind::OutOfRange, "naturals start at 1");
  if (const SampledData* d = s.sample()) {
    if (n > d->horizon)
      fail(ErrorKind::HorizonExceeded,
           "membership of " + std::to_string(n) + " past horizon " + std::to_string(d->horizon));
    return sortedHas(d->members, n);
  }
  if (sortedHas(s.finitePart(), n)) return true;
  if (sortedHas(s.excluded(), n)) return false;
  for (const auto& g : s.generators())
    if (generatorContains(g, *s.decomposition(), n)) return true;
  return false;
}

namespace {

std::uint64_t unionCount(const std::vector<Generator>& gens, const Decomposition& d, std::uint64_t N) {
  std::vector<Generator> live;
  for (const auto& g : gens)
    if (countGenerator(g, d, N) > 0) live.push_back(g);
  if (live.empty()) return 0;
  if (live.size() == 1) return countGenerator(live[0], d, N);

  std::uint64_t nodes = 0;
  bool exhausted = false;
  // Signed sum kept in a wide integer since partial sums can go negative.
  Nat total = 0;
  std::function<void(std::size_t, const Generator&, int)> dfs = [&](std::size_t from, const Generator& cur,
                                                                    int sign) {
    for (std::size_t i = from; i < live.size() && !exhausted; ++i) {
      auto next = generatorIntersect(cur, live[i], d);
      if (!next) continue;
      std::uint64_t c = countGenerator(*next, d, N);
      if (c == 0) continue;
      if (++nodes > kInclusionExclusionNodes) {
        exhausted = true;
        return;
      }
      total += sign > 0 ? Nat(c) : Nat(-Nat(c));
      dfs(i + 1, *next, -sign);
    }
  };
  for (std::size_t i = 0; i < live.size() && !exhausted; ++i) {
    std::uint64_t c = countGenerator(live[i], d, N);
    total += c;
    ++nodes;
    dfs(i + 1, live[i], -1);
  }
  if (!exhausted) return toU64(total);
  if (N > kScanLimit) fail(ErrorKind::HorizonExceeded, "inclusion-exclusion budget exhausted");
  std::uint64_t c = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    for (const auto& g : live)
      if (generatorContains(g, d, n)) {
        ++c;
        break;
      }
  }
  return c;
}

}  // namespace

std::uint64_t prefixCount(const IndexSet& s, std::uint64_t N) {
  if (N == 0) return 0;
  if (const SampledData* d = s.sample()) {
    if (N > d->horizon)
      fail(ErrorKind::HorizonExceeded,
           "prefix count to " + std::to_string(N) + " past horizon " + std::to_string(d->horizon));
    return static_cast<std::uint64_t>(std::upper_bound(d->members.begin(), d->members.end(), N) -
                                      d->members.begin());
  }
  const auto& f = s.finitePart();
  const auto& e = s.excluded();
  std::uint64_t cf = static_cast<std::uint64_t>(std::upper_bound(f.begin(), f.end(), N) - f.begin());
  std::uint64_t ce = static_cast<std::uint64_t>(std::upper_bound(e.begin(), e.end(), N) - e.begin());
  return cf + unionCount(s.generators(), *s.decomposition(), N) - ce;
}

std::uint64_t nth(const IndexSet& s, std::uint64_t k) {
  if (k == 0) fail(ErrorKind::OutOfRange, "nth is 1-based");
  if (const SampledData* d = s.sample()) {
    if (k > d->members.size())
      fail(ErrorKind::HorizonExceeded,
           "element " + std::to_string(k) + " not reached within horizon " + std::to_string(d->horizon));
    return d->members[k - 1];
  }
  if (!s.hasGenerators()) {
    if (k > s.finitePart().size())
      fail(ErrorKind::OutOfRange,
           "set has " + std::to_string(s.finitePart().size()) + " elements, asked for #" + std::to_string(k));
    return s.finitePart()[k - 1];
  }
  std::uint64_t hi = 1;
  while (prefixCount(s, hi) < k) {
    if (hi > (kNoBound >> 2)) fail(ErrorKind::OutOfRange, "element beyond 64-bit range");
    hi *= 2;
  }
  std::uint64_t lo = hi / 2 + 1;
  if (hi == 1) lo = 1;
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (prefixCount(s, mid) >= k) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

std::vector<std::uint64_t> enumerate(const IndexSet& s, std::uint64_t N) {
  if (const SampledData* d = s.sample()) {
    if (N > d->horizon)
      fail(ErrorKind::HorizonExceeded,
           "enumeration to " + std::to_string(N) + " past horizon " + std::to_string(d->horizon));
    return std::vector<std::uint64_t>(d->members.begin(),
                                      std::upper_bound(d->members.begin(), d->members.end(), N));
  }
  const Decomposition& dec = *s.decomposition();
  std::vector<std::uint64_t> out;
  for (auto f : s.finitePart())
    if (f <= N) out.push_back(f);
  for (const auto& g : s.generators()) {
    GeneratorForm f = generatorForm(g, dec);
    if (f.state == GeneratorForm::Empty) continue;
    if (f.state == GeneratorForm::Known) {
      if (f.p.first > Nat(N)) continue;
      std::uint64_t a = static_cast<std::uint64_t>(f.p.first);
      if (f.p.step > Nat(N)) {
        out.push_back(a);
        continue;
      }
      std::uint64_t st = static_cast<std::uint64_t>(f.p.step);
      for (std::uint64_t n = a; n <= N; n += st) {
        out.push_back(n);
        if (N - n < st) break;
      }
    } else {
      if (N > kScanLimit) fail(ErrorKind::HorizonExceeded, "block scan beyond limit");
      for (std::uint64_t n = 1; n <= N; ++n)
        if (generatorContains(g, dec, n)) out.push_back(n);
    }
  }
  sortUnique(out);
  return sortedDifference(out, s.excluded());
}

std::optional<std::uint64_t> firstAbove(const IndexSet& s, std::uint64_t n) {
  if (const SampledData* d = s.sample()) {
    auto it = std::upper_bound(d->members.begin(), d->members.end(), n);
    if (it == d->members.end()) return std::nullopt;
    return *it;
  }
  const Decomposition& dec = *s.decomposition();
  std::uint64_t cursor = n;
  for (;;) {
    std::optional<std::uint64_t> best;
    auto fit = std::upper_bound(s.finitePart().begin(), s.finitePart().end(), cursor);
    if (fit != s.finitePart().end()) best = *fit;
    for (const auto& g : s.generators()) {
      auto c = generatorNextAbove(g, dec, cursor);
      if (c && (!best || *c < *best)) best = c;
    }
    if (!best) return std::nullopt;
    if (!sortedHas(s.excluded(), *best) || sortedHas(s.finitePart(), *best)) return best;
    cursor = *best;
  }
}

std::vector<std::uint64_t> firstElements(const IndexSet& s, std::size_t count) {
  std::vector<std::uint64_t> out;
  std::uint64_t cursor = 0;
  while (out.size() < count) {
    auto nx = firstAbove(s, cursor);
    if (!nx) break;
    out.push_back(*nx);
    cursor = *nx;
  }
  return out;
}

// ---------------------------------------------------------------- algebra

namespace {

struct FallbackNeeded {
  std::string why;
};

IndexSet materialize(SetOp op, const IndexSet& s, const IndexSet& t, std::uint64_t horizon, const std::string& why) {
  std::uint64_t h = std::min({horizon, s.horizon(), t.horizon()});
  if (s.isSampled() || t.isSampled()) h = std::min(s.horizon(), t.horizon());
  auto a = enumerate(s, h), b = enumerate(t, h);
  std::vector<std::uint64_t> r;
  const char* name = "union";
  switch (op) {
    case SetOp::Union: r = sortedUnion(a, b); break;
    case SetOp::Intersect: r = sortedIntersection(a, b); name = "intersect"; break;
    case SetOp::Difference: r = sortedDifference(a, b); name = "difference"; break;
  }
  return IndexSet::sampled(std::move(r), h,
                           std::string(name) + "(" + describeForFallback(s) + ", " + describeForFallback(t) +
                               "); " + why);
}

// Rewrites block generators of s over target when s lives on another decomposition.
std::optional<IndexSet> relabel(const IndexSet& s, const DecompositionPtr& target) {
  if (sameDecomposition(s.decomposition(), target) || !hasLabelled(s)) return s;
  std::vector<Generator> gens;
  for (const auto& g : s.generators()) {
    if (!g.labelled()) {
      gens.push_back(g);
      continue;
    }
    GeneratorForm f = generatorForm(g, *s.decomposition());
    if (f.state == GeneratorForm::Opaque) return std::nullopt;
    if (f.state == GeneratorForm::Known) gens.push_back(Generator::ap(f.p.first, f.p.step));
  }
  return IndexSet::normalForm(s.finitePart(), std::move(gens), s.excluded(), target);
}

IndexSet complementPieces(const Generator& g, const DecompositionPtr& delta) {
  GeneratorForm f = generatorForm(g, *delta);
  if (f.state == GeneratorForm::Empty) return IndexSet::naturals();
  if (f.state == GeneratorForm::Opaque) throw FallbackNeeded{"complement of opaque block generator"};
  const Progression& p = f.p;
  Nat a0 = ((p.first - 1) % p.step) + 1;
  Nat headCount = (p.first - a0) / p.step;
  if (headCount > Nat(kHeadCap)) throw FallbackNeeded{"complement head too large"};
  std::vector<std::uint64_t> head;
  for (Nat x = a0; x < p.first; x += p.step) head.push_back(toU64(x));

  std::vector<Generator> pieces;
  unsigned s = valuation2(p.step);
  Nat o = p.step >> s;
  Nat c = a0 & (pow2Nat(s) - 1);
  for (unsigned t = 0; t < s; ++t) {
    Nat low = c & (pow2Nat(t) - 1);
    bool bit = boost::multiprecision::bit_test(c, t);
    Nat r = bit ? low : Nat(low + pow2Nat(t));
    Nat step = pow2Nat(t + 1);
    Progression piece{r == 0 ? step : r, step};
    auto bp = delta->blockProgression(t + 1);
    if (bp && *bp == piece) pieces.push_back(Generator::block_(t + 1));
    else pieces.push_back(Generator::ap(piece.first, piece.step));
  }
  if (o > 1) {
    if (o > Nat(kGeneratorCap)) throw FallbackNeeded{"odd part of modulus too large"};
    Nat twoS = pow2Nat(s);
    Nat skip = a0 % o;
    for (Nat u = 0; u < o; ++u) {
      if (u == skip) continue;
      auto x = intersect(Progression{twoS == 1 ? Nat(1) : Nat(c == 0 ? twoS : c), twoS},
                         Progression{u == 0 ? o : u, o});
      if (!x) continue;
      Nat first = ((x->first - 1) % p.step) + 1;
      pieces.push_back(Generator::ap(first, p.step));
    }
  }
  return IndexSet::normalForm(std::move(head), std::move(pieces), {}, delta);
}

IndexSet symbolicUnion(const IndexSet& s, const IndexSet& t, const DecompositionPtr& delta) {
  std::vector<std::uint64_t> fin = sortedUnion(s.finitePart(), t.finitePart());
  std::vector<Generator> gens = s.generators();
  gens.insert(gens.end(), t.generators().begin(), t.generators().end());
  std::vector<std::uint64_t> ex;
  for (auto e : sortedUnion(s.excluded(), t.excluded()))
    if (!contains(s, e) && !contains(t, e)) ex.push_back(e);
  if (gens.size() > kGeneratorCap * 4) throw FallbackNeeded{"generator cap"};
  return IndexSet::normalForm(std::move(fin), std::move(gens), std::move(ex), delta);
}

IndexSet symbolicIntersect(const IndexSet& s, const IndexSet& t, const DecompositionPtr& delta) {
  std::vector<std::uint64_t> fin;
  for (auto f : s.finitePart())
    if (contains(t, f)) fin.push_back(f);
  for (auto f : t.finitePart())
    if (contains(s, f)) fin.push_back(f);
  std::vector<Generator> gens;
  const Decomposition& d = *delta;
  for (const auto& g : s.generators())
    for (const auto& h : t.generators()) {
      auto r = generatorIntersect(g, h, d);
      if (r) gens.push_back(std::move(*r));
    }
  if (gens.size() > kGeneratorCap) {
    std::sort(gens.begin(), gens.end(), generatorLess);
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    if (gens.size() > kGeneratorCap) throw FallbackNeeded{"generator cap"};
  }
  return IndexSet::normalForm(std::move(fin), std::move(gens), sortedUnion(s.excluded(), t.excluded()), delta);
}

IndexSet symbolicDifference(const IndexSet& s, const IndexSet& t, const DecompositionPtr& delta) {
  if (!t.hasGenerators()) {
    return IndexSet::normalForm(sortedDifference(s.finitePart(), t.finitePart()), s.generators(),
                                sortedUnion(s.excluded(), t.finitePart()), delta);
  }
  // s \ t = ((s ∩ comp(g_1) ∩ ... ) \ F_t) ∪ (s ∩ E_t)
  IndexSet r = IndexSet::normalForm(s.finitePart(), s.generators(), s.excluded(), delta);
  for (const auto& g : t.generators()) {
    if (!r.hasGenerators() && r.finitePart().empty()) break;
    r = symbolicIntersect(r, complementPieces(g, delta), delta);
  }
  r = symbolicDifference(r, IndexSet::finite(t.finitePart()), delta);
  std::vector<std::uint64_t> back;
  for (auto e : t.excluded())
    if (contains(s, e)) back.push_back(e);
  if (!back.empty()) r = symbolicUnion(r, IndexSet::finite(back), delta);
  return r;
}

}  // namespace

IndexSet combine(SetOp op, const IndexSet& s, const IndexSet& t, std::uint64_t fallbackHorizon) {
  if (s.isSampled() || t.isSampled()) return materialize(op, s, t, fallbackHorizon, "sampled operand");
  DecompositionPtr target = hasLabelled(s) ? s.decomposition() : t.decomposition();
  auto a = relabel(s, target);
  auto b = relabel(t, target);
  if (!a || !b) return materialize(op, s, t, fallbackHorizon, "incompatible decompositions");
  try {
    switch (op) {
      case SetOp::Union: return symbolicUnion(*a, *b, target);
      case SetOp::Intersect: return symbolicIntersect(*a, *b, target);
      case SetOp::Difference: return symbolicDifference(*a, *b, target);
    }
  } catch (const FallbackNeeded& f) {
    return materialize(op, s, t, fallbackHorizon, f.why);
  }
  return s;
}

IndexSet unite(const IndexSet& s, const IndexSet& t) { return combine(SetOp::Union, s, t); }
IndexSet intersect(const IndexSet& s, const IndexSet& t) { return combine(SetOp::Intersect, s, t); }
IndexSet subtract(const IndexSet& s, const IndexSet& t) { return combine(SetOp::Difference, s, t); }

// ---------------------------------------------------------------- structure

BlockSignature blockSignature(const IndexSet& s, const DecompositionPtr& delta, std::uint64_t j) {
  if (s.isSampled()) return BlockSignature::Unknown;
  IndexSet t = intersect(s, IndexSet::block(j, delta));
  if (t.isSampled()) return BlockSignature::Unknown;
  if (t.hasGenerators()) {
    for (const auto& g : t.generators())
      if (definitelyInfinite(g, *t.decomposition())) return BlockSignature::Infinite;
    return BlockSignature::Unknown;
  }
  return t.finitePart().empty() ? BlockSignature::Empty : BlockSignature::FiniteNonempty;
}

Verdict isFiniteSet(const IndexSet& s) {
  if (const SampledData* d = s.sample()) {
    return Verdict::unknown(d->horizon, "sampled set: finiteness not certifiable",
                            {std::to_string(d->members.size()) + " members up to horizon"});
  }
  if (!s.hasGenerators())
    return Verdict::yes("no infinite generator",
                        {"normal form is the finite set of " + std::to_string(s.finitePart().size()) + " elements"});
  for (const auto& g : s.generators())
    if (definitelyInfinite(g, *s.decomposition()))
      return Verdict::no("infinite generator", {"generator " + toString(g, s.decomposition()) + " is infinite"});
  return Verdict::unknown(0, "opaque block progressions", {"block progression emptiness undecidable without closed form"});
}

Verdict isEmptySet(const IndexSet& s) {
  if (const SampledData* d = s.sample()) {
    if (!d->members.empty()) return Verdict::no("sampled witness", {"contains " + std::to_string(d->members.front())});
    return Verdict::unknown(d->horizon, "sampled set: no element up to horizon");
  }
  if (!s.finitePart().empty()) return Verdict::no("explicit element", {"contains " + std::to_string(s.finitePart().front())});
  if (!s.hasGenerators()) return Verdict::yes("empty normal form");
  for (const auto& g : s.generators())
    if (definitelyInfinite(g, *s.decomposition()))
      return Verdict::no("infinite generator", {"generator " + toString(g, s.decomposition())});
  return Verdict::unknown(0, "opaque block progressions");
}

Verdict isSubset(const IndexSet& a, const IndexSet& b) {
  IndexSet diff = subtract(a, b);
  Verdict e = isEmptySet(diff);
  if (e.isTrue()) return Verdict::yes("empty difference", {"A \\ B = fin{}"});
  if (e.isFalse()) {
    std::vector<std::string> tr = e.trace;
    tr.insert(tr.begin(), "A \\ B = " + diff.toString());
    return Verdict::no("nonempty difference", tr);
  }
  return Verdict::unknown(e.horizon, "difference not decidable", {"A \\ B = " + diff.toString()});
}

Verdict sameSet(const IndexSet& a, const IndexSet& b) {
  Verdict ab = isSubset(a, b);
  if (!ab.isTrue()) return ab;
  Verdict ba = isSubset(b, a);
  if (!ba.isTrue()) return ba;
  return Verdict::yes("mutual containment");
}

std::optional<BlockSet> generatorSpread(const Generator& g, const DecompositionPtr& owner, const DecompositionPtr& delta) {
  if (g.labelled() && sameDecomposition(owner, delta)) {
    GeneratorForm f = generatorForm(g, *owner);
    if (f.state == GeneratorForm::Empty) return BlockSet();
    if (f.state == GeneratorForm::Opaque && g.kind == GeneratorKind::BlockProgression) return std::nullopt;
    return BlockSet::single(g.block);
  }
  if (g.kind == GeneratorKind::Tail) return BlockSet::all();
  GeneratorForm f = generatorForm(g, *owner);
  if (f.state == GeneratorForm::Empty) return BlockSet();
  if (f.state == GeneratorForm::Opaque) return std::nullopt;
  return delta->spread(f.p);
}

std::optional<BlockSet> infiniteBlocks(const IndexSet& s, const DecompositionPtr& delta) {
  if (s.isSampled()) return std::nullopt;
  BlockSet out;
  for (const auto& g : s.generators()) {
    auto b = generatorSpread(g, s.decomposition(), delta);
    if (!b) return std::nullopt;
    out = out.unite(*b);
  }
  return out;
}

std::optional<BlockSet> metBlocks(const IndexSet& s, const DecompositionPtr& delta) {
  auto inf = infiniteBlocks(s, delta);
  if (!inf) return std::nullopt;
  std::vector<std::uint64_t> js;
  for (auto f : s.finitePart()) js.push_back(delta->blockOf(f));
  return inf->unite(BlockSet::of(js));
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, DecompositionPtr delta) : text_(text), delta_(std::move(delta)) {}

  IndexSet parseAll() {
    IndexSet r = expr();
    skip();
    if (pos_ != text_.size()) error("unexpected trailing input");
    return r;
  }

 private:
  [[noreturn]] void error(const std::string& what) {
    fail(ErrorKind::ParseError, what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) error(std::string("expected '") + c + "'");
  }
  std::string word() {
    skip();
    std::size_t b = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return std::string(text_.substr(b, pos_ - b));
  }
  Nat number() {
    skip();
    std::size_t b = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (b == pos_) error("expected number");
    return Nat(std::string(text_.substr(b, pos_ - b)));
  }
  std::uint64_t small() {
    Nat n = number();
    if (!fitsU64(n)) error("number too large");
    return static_cast<std::uint64_t>(n);
  }
  void decompositionTag() {
    if (!eat('[')) return;
    std::string n = word();
    expect(']');
    if (n != delta_->name()) error("unknown decomposition '" + n + "'");
  }

  IndexSet expr() {
    IndexSet r = term();
    for (;;) {
      if (eat('+')) r = unite(r, term());
      else if (eat('-')) r = subtract(r, term());
      else if (eat('&')) r = intersect(r, term());
      else return r;
    }
  }

  IndexSet term() {
    if (eat('(')) {
      IndexSet r = expr();
      expect(')');
      return r;
    }
    std::string w = word();
    if (w == "fin") {
      expect('{');
      std::vector<std::uint64_t> v;
      if (!eat('}')) {
        do {
          std::uint64_t x = small();
          if (x == 0) error("naturals start at 1");
          v.push_back(x);
        } while (eat(','));
        expect('}');
      }
      return IndexSet::finite(std::move(v));
    }
    if (w == "nat") return IndexSet::naturals();
    if (w == "tail") {
      expect('(');
      Nat n0 = number();
      expect(')');
      return IndexSet::normalForm({}, {Generator::tail(n0)}, {});
    }
    if (w == "ap") {
      expect('(');
      Nat a = number();
      expect(',');
      Nat d = number();
      expect(')');
      if (d == 0) error("step must be >= 1");
      return IndexSet::normalForm({}, {Generator::ap(a, d)}, {});
    }
    if (w == "block" || w == "blocktail" || w == "blockap") {
      decompositionTag();
      expect('(');
      std::uint64_t j = small();
      if (j == 0) error("block index must be >= 1");
      Generator g = Generator::block_(j);
      if (w == "blocktail") {
        expect(',');
        g = Generator::blockTail(j, number());
      } else if (w == "blockap") {
        expect(',');
        Nat a = number();
        expect(',');
        Nat d = number();
        if (d == 0) error("step must be >= 1");
        g = Generator::blockAp(j, a, d);
      }
      expect(')');
      return IndexSet::normalForm({}, {g}, {}, delta_);
    }
    if (w.empty()) error("expected set term");
    error("unknown set term '" + w + "'");
  }

  std::string_view text_;
  DecompositionPtr delta_;
  std::size_t pos_ = 0;
};

}  // namespace

IndexSet parseIndexSet(std::string_view text, DecompositionPtr delta) {
  return Parser(text, delta ? std::move(delta) : twoAdic()).parseAll();
}

}  // namespace icomp
