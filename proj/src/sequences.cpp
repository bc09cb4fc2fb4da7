#include "icomp/sequences.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>

#include "icomp/error.hpp"

namespace icomp {

// ---------------------------------------------------------------- Interval, ValuePredicate

bool Interval::contains(const Rational& x) const {
  bool aboveLo = loOpen ? x > lo : x >= lo;
  bool belowHi = hiOpen ? x < hi : x <= hi;
  return aboveLo && belowHi;
}

std::string Interval::toString() const {
  return std::string(loOpen ? "(" : "[") + icomp::toString(lo) + ", " + icomp::toString(hi) + (hiOpen ? ")" : "]");
}

ValuePredicate ValuePredicate::in(Nbhd U) {
  ValuePredicate p;
  p.kind = InNbhd;
  p.nbhd = std::move(U);
  return p;
}

ValuePredicate ValuePredicate::closedInterval(Rational lo, Rational hi) {
  return closedBox({Interval{std::move(lo), std::move(hi), false, false}});
}

ValuePredicate ValuePredicate::closedBox(std::vector<Interval> box) {
  ValuePredicate p;
  p.kind = InClosed;
  p.closed = std::move(box);
  return p;
}

ValuePredicate ValuePredicate::equals(Point x) {
  ValuePredicate p;
  p.kind = Equals;
  p.point = std::move(x);
  return p;
}

bool ValuePredicate::holds(const Space& sp, const Point& x) const {
  switch (kind) {
    case InNbhd: return inNbhd(sp, x, nbhd);
    case InClosed:
      if (sp.kind() == Space::UnitInterval) {
        if (closed.size() != 1 || x.kind != Point::Real) fail(ErrorKind::ShapeMismatch, "closed interval needs a real point");
        return closed[0].contains(x.value);
      }
      if (sp.kind() == Space::FiniteProduct && x.kind == Point::Tuple && closed.size() == sp.factors().size() &&
          x.parts.size() == closed.size()) {
        for (std::size_t i = 0; i < closed.size(); ++i) {
          if (sp.factors()[i].kind() != Space::UnitInterval)
            fail(ErrorKind::ShapeMismatch, "closed boxes need interval factors");
          if (!closed[i].contains(x.parts[i].value)) return false;
        }
        return true;
      }
      fail(ErrorKind::ShapeMismatch, "closed box does not match " + sp.toString());
    case Equals: {
      auto same = samePoint(x, point);
      if (!same) fail(ErrorKind::ShapeMismatch, "point equality undecidable for " + x.toString());
      return *same;
    }
  }
  return false;
}

ValuePredicate ValuePredicate::factor(std::size_t i) const {
  switch (kind) {
    case InNbhd:
      if (nbhd.kind != Nbhd::Box || i >= nbhd.parts.size()) fail(ErrorKind::ShapeMismatch, "not a box neighborhood");
      return in(nbhd.parts[i]);
    case InClosed:
      if (i >= closed.size()) fail(ErrorKind::ShapeMismatch, "closed box has too few factors");
      return closedBox({closed[i]});
    case Equals:
      if (point.kind != Point::Tuple || i >= point.parts.size()) fail(ErrorKind::ShapeMismatch, "not a tuple point");
      return equals(point.parts[i]);
  }
  return *this;
}

std::string ValuePredicate::toString() const {
  switch (kind) {
    case InNbhd: return "in " + nbhd.toString();
    case InClosed: {
      std::string s = "in ";
      for (std::size_t i = 0; i < closed.size(); ++i) s += (i ? " x " : "") + closed[i].toString();
      return s;
    }
    case Equals: return "= " + point.toString();
  }
  return "?";
}

namespace {

// The real interval a predicate describes on [0,1].
Interval realInterval(const ValuePredicate& pred) {
  switch (pred.kind) {
    case ValuePredicate::InNbhd:
      if (pred.nbhd.kind != Nbhd::Ball) fail(ErrorKind::ShapeMismatch, "expected a ball, got " + pred.nbhd.toString());
      return {pred.nbhd.center - pred.nbhd.radius, pred.nbhd.center + pred.nbhd.radius, true, true};
    case ValuePredicate::InClosed:
      if (pred.closed.size() != 1) fail(ErrorKind::ShapeMismatch, "expected one closed interval");
      return pred.closed[0];
    case ValuePredicate::Equals:
      if (pred.point.kind != Point::Real) fail(ErrorKind::ShapeMismatch, "expected a real point");
      return {pred.point.value, pred.point.value, false, false};
  }
  return {};
}

Rational lengthInUnit(const Interval& I) {
  Rational lo = std::max(I.lo, Rational(0)), hi = std::min(I.hi, Rational(1));
  return hi > lo ? hi - lo : Rational(0);
}

// Set of j >= 1 where a monotone condition holds, given that it equals `eventual` from jmax on.
BlockSet thresholdSet(const std::function<bool(std::uint64_t)>& cond, bool eventual, std::uint64_t jmax) {
  std::uint64_t lo = 1, hi = std::max<std::uint64_t>(jmax, 1);
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (cond(mid) == eventual) hi = mid;
    else lo = mid + 1;
  }
  if (eventual) return BlockSet::from(lo);
  return lo > 1 ? BlockSet::range(1, lo - 1) : BlockSet();
}

}  // namespace

// ---------------------------------------------------------------- MonotoneValues

MonotoneValues::MonotoneValues(Rational limit, int sign, Rational scale, Shape shape, std::int64_t shift,
                               std::map<std::uint64_t, Rational> overrides)
    : limit_(std::move(limit)), sign_(sign), scale_(std::move(scale)), shape_(shape), shift_(shift),
      overrides_(std::move(overrides)) {
  if (sign_ != 1 && sign_ != -1 && sign_ != 0) fail(ErrorKind::OutOfRange, "sign must be -1, 0 or 1");
  if (scale_ < 0) fail(ErrorKind::OutOfRange, "scale must be nonnegative");
  if (shape_ == Harmonic && shift_ < 0) fail(ErrorKind::OutOfRange, "harmonic shift must be nonnegative");
  if (scale_ == 0) sign_ = 0;
}

Rational MonotoneValues::tailValue(std::uint64_t j) const {
  if (sign_ == 0) return limit_;
  Rational w;
  std::int64_t k = static_cast<std::int64_t>(j) + shift_;
  if (shape_ == Harmonic) w = Rational(1) / Rational(Nat(k));
  else w = k >= 0 ? Rational(1) / Rational(pow2Nat(static_cast<unsigned>(k))) : Rational(pow2Nat(static_cast<unsigned>(-k)));
  return limit_ + Rational(sign_) * scale_ * w;
}

Rational MonotoneValues::real(std::uint64_t j) const {
  if (j == 0) fail(ErrorKind::OutOfRange, "block indices start at 1");
  auto it = overrides_.find(j);
  return it != overrides_.end() ? it->second : tailValue(j);
}

std::uint64_t MonotoneValues::settleIndex(const Rational& delta) const {
  if (sign_ == 0) return 1;
  Rational m = scale_ / delta;
  Nat need;
  if (shape_ == Harmonic) {
    // scale/(j+shift) < delta  <=>  j > m - shift
    need = floorOf(m) + 1 - Nat(shift_);
  } else {
    // 2^(j+shift) > m
    Nat e = 0;
    Nat f = floorOf(m);
    while (f > 0) {
      f >>= 1;
      ++e;
    }
    need = e - Nat(shift_);
  }
  if (need < 1) return 1;
  if (!fitsU64(need) || need > Nat(std::uint64_t{1} << 62)) fail(ErrorKind::Overflow, "settle index too large");
  return toU64(need);
}

BlockSet MonotoneValues::tailWhere(const Interval& I) const {
  if (sign_ == 0) return I.contains(limit_) ? BlockSet::all() : BlockSet();
  auto side = [&](const Rational& e, bool open, bool isLower) {
    auto cond = [&, isLower, open](std::uint64_t j) {
      Rational v = tailValue(j);
      if (isLower) return open ? v > e : v >= e;
      return open ? v < e : v <= e;
    };
    bool eventual;
    std::uint64_t jmax = 1;
    if (e == limit_) {
      // v_j sits strictly on one side of the limit.
      eventual = isLower ? sign_ > 0 : sign_ < 0;
    } else {
      eventual = isLower ? limit_ > e : limit_ < e;
      jmax = settleIndex(absolute(e - limit_));
    }
    return thresholdSet(cond, eventual, jmax);
  };
  return side(I.lo, I.loOpen, true).intersect(side(I.hi, I.hiOpen, false));
}

BlockSet MonotoneValues::whereInterval(const Interval& I) const {
  BlockSet r = tailWhere(I);
  std::vector<std::uint64_t> keys, hits;
  for (const auto& [j, v] : overrides_) {
    keys.push_back(j);
    if (I.contains(v)) hits.push_back(j);
  }
  return r.minus(BlockSet::of(keys)).unite(BlockSet::of(hits));
}

BlockSet MonotoneValues::where(const Space& sp, const ValuePredicate& pred) const {
  if (sp.kind() != Space::UnitInterval) fail(ErrorKind::ShapeMismatch, "monotone values live in [0,1]");
  return whereInterval(realInterval(pred));
}

std::string MonotoneValues::describe() const {
  std::string w = shape_ == Harmonic ? "1/(j" : "2^-(j";
  if (shift_ != 0) w += (shift_ > 0 ? "+" : "") + std::to_string(shift_);
  w += ")";
  std::string s = icomp::toString(limit_);
  if (sign_ != 0) s += std::string(sign_ > 0 ? " + " : " - ") + (scale_ == 1 ? "" : icomp::toString(scale_) + "*") + w;
  std::string out = "v_j = " + s;
  if (!overrides_.empty()) {
    out += " except";
    for (const auto& [j, v] : overrides_) out += " v_" + std::to_string(j) + "=" + icomp::toString(v);
  }
  return out;
}

// ---------------------------------------------------------------- ConstantValues, StaircaseValues

BlockSet ConstantValues::where(const Space& sp, const ValuePredicate& pred) const {
  return pred.holds(sp, p_) ? BlockSet::all() : BlockSet();
}

Point StaircaseValues::value(std::uint64_t j) const {
  if (j == 0) fail(ErrorKind::OutOfRange, "block indices start at 1");
  return Point::of(CubePoint::eventually(std::vector<bool>(j - 1, true), false));
}

BlockSet StaircaseValues::where(const Space& sp, const ValuePredicate& pred) const {
  if (sp.kind() != Space::CantorCube) fail(ErrorKind::ShapeMismatch, "staircase values live in the cube");
  if (pred.kind == ValuePredicate::InNbhd) {
    checkNbhd(sp, pred.nbhd);
    BlockSet r = BlockSet::all();
    // Coordinate i of v_j is 1 exactly when j > i.
    for (const auto& [i, b] : pred.nbhd.constraints) r = r.intersect(b ? BlockSet::from(i + 1) : BlockSet::range(1, i));
    return r;
  }
  if (pred.kind == ValuePredicate::Equals && pred.point.kind == Point::Cube && pred.point.cube.symbolic()) {
    const CubePoint& c = pred.point.cube;
    if (c.tailBit()) return BlockSet();
    for (bool b : c.prefix())
      if (!b) return BlockSet();
    return BlockSet::single(c.prefix().size() + 1);
  }
  fail(ErrorKind::ShapeMismatch, "unsupported predicate on cube values: " + pred.toString());
}

// ---------------------------------------------------------------- Sequence

struct Sequence::Node {
  Structure structure = Explicit;
  IndexSet domain;
  Space space;
  std::string name;
  std::shared_ptr<const BlockValues> values;
  DecompositionPtr delta;
  std::shared_ptr<const ExplicitRule> rule;
  std::vector<Sequence> parts;
  std::shared_ptr<const Sequence> base;
};

Sequence::Structure Sequence::structure() const { return node_->structure; }
const IndexSet& Sequence::domain() const { return node_->domain; }
const Space& Sequence::space() const { return node_->space; }
const std::string& Sequence::name() const { return node_->name; }
const BlockValues* Sequence::blockValues() const { return node_->values.get(); }
const DecompositionPtr& Sequence::decomposition() const { return node_->delta; }
const ExplicitRule* Sequence::rule() const { return node_->rule.get(); }
const std::vector<Sequence>& Sequence::components() const { return node_->parts; }
const Sequence* Sequence::base() const { return node_->base.get(); }

Point Sequence::at(std::uint64_t n) const {
  if (!icomp::contains(node_->domain, n))
    fail(ErrorKind::NotInDomain, std::to_string(n) + " is not in the domain of " + node_->name);
  switch (node_->structure) {
    case BlockConstant: return node_->values->value(node_->delta->blockOf(n));
    case Explicit: return node_->rule->eval(n);
    case ProductOf: {
      std::vector<Point> ps;
      for (const auto& p : node_->parts) ps.push_back(p.at(n));
      return Point::tuple(std::move(ps));
    }
    case Restricted: return node_->base->at(n);
  }
  return {};
}

Point evalAt(const Sequence& s, std::uint64_t n) { return s.at(n); }

Sequence blockConstant(const Space& sp, std::shared_ptr<const BlockValues> values, DecompositionPtr delta,
                       IndexSet domain, std::string name) {
  auto n = std::make_shared<Sequence::Node>();
  n->structure = Sequence::BlockConstant;
  n->domain = std::move(domain);
  n->space = sp;
  n->name = name.empty() ? "blocks[" + values->describe() + "]" : std::move(name);
  n->values = std::move(values);
  n->delta = std::move(delta);
  return Sequence(std::move(n));
}

Sequence constantSequence(const Space& sp, const Point& p, IndexSet domain) {
  checkPoint(sp, p);
  return blockConstant(sp, std::make_shared<ConstantValues>(p), twoAdic(), std::move(domain), "const " + p.toString());
}

Sequence explicitSequence(const Space& sp, ExplicitRule rule, IndexSet domain) {
  auto n = std::make_shared<Sequence::Node>();
  n->structure = Sequence::Explicit;
  n->domain = std::move(domain);
  n->space = sp;
  n->name = rule.name;
  n->rule = std::make_shared<const ExplicitRule>(std::move(rule));
  return Sequence(std::move(n));
}

namespace {

constexpr std::uint64_t kFiniteRangeCap = std::uint64_t{1} << 20;

// Index ranges (as a BlockSet over n) turned into an IndexSet.
std::optional<IndexSet> rangesToSet(const BlockSet& b) {
  IndexSet r = IndexSet::empty();
  std::vector<std::uint64_t> fin;
  for (const auto& [lo, hi] : b.ranges()) {
    if (hi == kNoBound) {
      r = unite(r, IndexSet::tail(lo));
      continue;
    }
    if (hi - lo + 1 > kFiniteRangeCap || fin.size() > kFiniteRangeCap) return std::nullopt;
    for (std::uint64_t n = lo; n <= hi; ++n) fin.push_back(n);
  }
  return unite(r, IndexSet::finite(std::move(fin)));
}

}  // namespace

Sequence approachSequence(const Rational& target, const Rational& offset) {
  int sign = offset > 0 ? 1 : offset < 0 ? -1 : 0;
  auto values = std::make_shared<MonotoneValues>(target, sign, absolute(offset), MonotoneValues::Harmonic);
  for (const Rational& end : std::array<Rational, 2>{target, target + offset})
    if (end < 0 || end > 1) fail(ErrorKind::OutOfRange, "approach sequence leaves [0,1]");
  ExplicitRule rule;
  rule.name = "approach(" + toString(target) + ", " + toString(offset) + ")";
  rule.eval = [values](std::uint64_t n) { return values->value(n); };
  rule.exactPreimage = [values](const ValuePredicate& pred) -> std::optional<IndexSet> {
    return rangesToSet(values->whereInterval(realInterval(pred)));
  };
  rule.classicalLimit = Point::rat(target);
  return explicitSequence(Space::unitInterval(), std::move(rule));
}

Sequence productOf(std::vector<Sequence> parts) {
  if (parts.empty()) fail(ErrorKind::ShapeMismatch, "empty product");
  auto n = std::make_shared<Sequence::Node>();
  n->structure = Sequence::ProductOf;
  std::vector<Space> spaces;
  n->domain = parts[0].domain();
  n->name = "pair(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    spaces.push_back(parts[i].space());
    if (i) n->domain = intersect(n->domain, parts[i].domain());
    n->name += (i ? ", " : "") + parts[i].name();
  }
  n->name += ")";
  n->space = Space::product(std::move(spaces));
  n->parts = std::move(parts);
  return Sequence(std::move(n));
}

Sequence subsequence(const Sequence& s, const IndexSet& K, std::uint64_t checkHorizon) {
  Verdict inside = isSubset(K, s.domain());
  if (inside.value == Truth::False) {
    std::string detail = "subsequence index set leaves the domain";
    if (!inside.trace.empty()) detail += ": " + inside.trace.front();
    fail(ErrorKind::DomainViolation, detail);
  }
  if (inside.value == Truth::Unknown) {
    for (std::uint64_t n : enumerate(K, checkHorizon))
      if (!contains(s.domain(), n))
        fail(ErrorKind::DomainViolation, std::to_string(n) + " is in K but not in the domain");
  }
  auto n = std::make_shared<Sequence::Node>();
  n->structure = Sequence::Restricted;
  n->domain = K;
  n->space = s.space();
  n->name = s.name() + " | restrict " + K.toString();
  n->base = std::make_shared<const Sequence>(s);
  return Sequence(std::move(n));
}

// ---------------------------------------------------------------- named sequences

namespace {

// Block m of the listing: block 1 is {0}, block m >= 2 lists k/(m-1) for k = 0..m-1.
Rational udValue(std::uint64_t n) {
  std::uint64_t m = 1;
  // Smallest m with m(m+1)/2 >= n.
  {
    long double guess = (std::sqrt(8.0L * static_cast<long double>(n) + 1.0L) - 1.0L) / 2.0L;
    m = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(guess));
    while (m * (m + 1) / 2 < n) ++m;
    while (m > 1 && (m - 1) * m / 2 >= n) --m;
  }
  if (m == 1) return 0;
  std::uint64_t k = n - (m - 1) * m / 2 - 1;
  return ratio(static_cast<std::int64_t>(k), static_cast<std::int64_t>(m - 1));
}

Sequence udSequence() {
  ExplicitRule rule;
  rule.name = "paper:udSequence";
  rule.eval = [](std::uint64_t n) { return Point::rat(udValue(n)); };
  rule.preimageDensity = [](const ValuePredicate& pred) -> std::optional<Rational> {
    // Each block is an equally spaced grid, so hits in an interval grow like its length.
    return lengthInUnit(realInterval(pred));
  };
  return explicitSequence(Space::unitInterval(), std::move(rule));
}

Sequence inverseBlocks() {
  return blockConstant(Space::unitInterval(),
                       std::make_shared<MonotoneValues>(Rational(0), 1, Rational(1), MonotoneValues::Harmonic),
                       twoAdic(), IndexSet::naturals(), "paper:inverseBlocks");
}

bool diagBit(std::uint64_t n, std::uint64_t m) { return (n - 1) % (2 * m) < m; }

std::uint64_t lcm64(std::uint64_t a, std::uint64_t b) { return a / std::gcd(a, b) * b; }

constexpr std::uint64_t kResidueModulusCap = std::uint64_t{1} << 20;

Sequence prodDiagDensity() {
  ExplicitRule rule;
  rule.name = "paper:prodDiagDensity";
  rule.eval = [](std::uint64_t n) {
    return Point::of(CubePoint::lazy([n](std::uint64_t m) { return diagBit(n, m); },
                                     "diag(" + std::to_string(n) + ")"));
  };
  // Coordinate m is 1 exactly on the residues 1..m mod 2m.
  rule.exactPreimage = [](const ValuePredicate& pred) -> std::optional<IndexSet> {
    if (pred.kind != ValuePredicate::InNbhd || pred.nbhd.kind != Nbhd::Cylinder) return std::nullopt;
    std::uint64_t L = 1;
    for (const auto& [m, b] : pred.nbhd.constraints) {
      L = lcm64(L, 2 * m);
      if (L > kResidueModulusCap) return std::nullopt;
    }
    std::vector<Generator> gens;
    for (std::uint64_t r = 1; r <= L; ++r) {
      bool ok = true;
      for (const auto& [m, b] : pred.nbhd.constraints)
        if (diagBit(r, m) != b) {
          ok = false;
          break;
        }
      if (ok) gens.push_back(Generator::ap(Nat(r), Nat(L)));
    }
    return IndexSet::normalForm({}, std::move(gens), {});
  };
  rule.preimageDensity = [](const ValuePredicate& pred) -> std::optional<Rational> {
    if (pred.kind != ValuePredicate::InNbhd || pred.nbhd.kind != Nbhd::Cylinder) return std::nullopt;
    std::uint64_t L = 1;
    for (const auto& [m, b] : pred.nbhd.constraints) {
      L = lcm64(L, 2 * m);
      if (L > kResidueModulusCap) return std::nullopt;
    }
    std::uint64_t hits = 0;
    for (std::uint64_t r = 1; r <= L; ++r) {
      bool ok = true;
      for (const auto& [m, b] : pred.nbhd.constraints) ok = ok && diagBit(r, m) == b;
      hits += ok;
    }
    return ratio(static_cast<std::int64_t>(hits), static_cast<std::int64_t>(L));
  };
  return explicitSequence(Space::cantorCube(), std::move(rule));
}

Sequence prodDiagBlocks() {
  return blockConstant(Space::cantorCube(), std::make_shared<StaircaseValues>(), twoAdic(), IndexSet::naturals(),
                       "paper:prodDiagBlocks");
}

}  // namespace

Sequence paperSequence(std::string_view name) {
  if (name == "udSequence") return udSequence();
  if (name == "inverseBlocks") return inverseBlocks();
  if (name == "prodDiagDensity") return prodDiagDensity();
  if (name == "prodDiagBlocks") return prodDiagBlocks();
  fail(ErrorKind::UnknownName, "unknown sequence: " + std::string(name));
}

// ---------------------------------------------------------------- preimages

std::optional<BlockView> blockView(const Sequence& s) {
  if (s.structure() == Sequence::BlockConstant) return BlockView{s.blockValues(), s.decomposition(), s.domain()};
  if (s.structure() == Sequence::Restricted) {
    auto v = blockView(*s.base());
    if (!v) return std::nullopt;
    v->domain = s.domain();
    return v;
  }
  return std::nullopt;
}

IndexSet preimage(const Sequence& s, const ValuePredicate& pred, bool negate, std::uint64_t horizon) {
  if (pred.kind == ValuePredicate::InNbhd) checkNbhd(s.space(), pred.nbhd);
  switch (s.structure()) {
    case Sequence::BlockConstant: {
      BlockSet b = s.blockValues()->where(s.space(), pred);
      if (negate) b = b.complement();
      return intersect(s.domain(), IndexSet::blocks(b, s.decomposition(), horizon));
    }
    case Sequence::Explicit: {
      const ExplicitRule& r = *s.rule();
      if (r.exactPreimage) {
        if (auto p = r.exactPreimage(pred)) return negate ? subtract(s.domain(), *p) : intersect(s.domain(), *p);
      }
      std::optional<Rational> density;
      if (r.preimageDensity && s.domain() == IndexSet::naturals()) {
        if (auto q = r.preimageDensity(pred)) density = negate ? Rational(1) - *q : *q;
      }
      std::vector<std::uint64_t> members;
      for (std::uint64_t n : enumerate(s.domain(), horizon))
        if (pred.holds(s.space(), r.eval(n)) != negate) members.push_back(n);
      std::string note = s.name() + (negate ? " not " : " ") + pred.toString();
      return IndexSet::sampled(std::move(members), horizon, std::move(note), density);
    }
    case Sequence::ProductOf: {
      const auto& parts = s.components();
      if (pred.kind == ValuePredicate::InNbhd && pred.nbhd.parts.size() != parts.size())
        fail(ErrorKind::ShapeMismatch, "box arity does not match the product");
      IndexSet acc = negate ? IndexSet::empty() : s.domain();
      for (std::size_t i = 0; i < parts.size(); ++i) {
        IndexSet p = preimage(parts[i], pred.factor(i), negate, horizon);
        acc = negate ? unite(acc, p) : intersect(acc, p);
      }
      return intersect(acc, s.domain());
    }
    case Sequence::Restricted: return intersect(preimage(*s.base(), pred, negate, horizon), s.domain());
  }
  return IndexSet::empty();
}

IndexSet exceptionalSet(const Sequence& s, const Nbhd& U, std::uint64_t horizon) {
  return preimage(s, ValuePredicate::in(U), true, horizon);
}

// ---------------------------------------------------------------- parsing

namespace {

std::string trimmed(std::string_view t) {
  std::size_t a = 0, b = t.size();
  while (a < b && std::isspace(static_cast<unsigned char>(t[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(t[b - 1]))) --b;
  return std::string(t.substr(a, b - a));
}

// Split at top-level occurrences of sep.
std::vector<std::string> splitTop(std::string_view t, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    char c = t[i];
    if (c == '(' || c == '{' || c == '[') ++depth;
    else if (c == ')' || c == '}' || c == ']') --depth;
    else if (c == sep && depth == 0) {
      out.push_back(trimmed(t.substr(start, i - start)));
      start = i + 1;
    }
    if (depth < 0) fail(ErrorKind::ParseError, "unbalanced brackets in " + std::string(t));
  }
  if (depth != 0) fail(ErrorKind::ParseError, "unbalanced brackets in " + std::string(t));
  out.push_back(trimmed(t.substr(start)));
  return out;
}

Space spaceOf(const Point& p) {
  switch (p.kind) {
    case Point::Real: return Space::unitInterval();
    case Point::Cube: return Space::cantorCube();
    case Point::Tuple: {
      std::vector<Space> f;
      for (const auto& q : p.parts) f.push_back(spaceOf(q));
      return Space::product(std::move(f));
    }
  }
  return Space::unitInterval();
}

// Arguments of name(...), or nullopt when t is not of that form.
std::optional<std::vector<std::string>> callArgs(const std::string& t, std::string_view name) {
  if (t.size() < name.size() + 2 || t.compare(0, name.size(), name) != 0) return std::nullopt;
  std::string rest = trimmed(std::string_view(t).substr(name.size()));
  if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')') return std::nullopt;
  return splitTop(std::string_view(rest).substr(1, rest.size() - 2), ',');
}

Sequence parsePrimary(const std::string& t) {
  if (t.rfind("paper:", 0) == 0) return paperSequence(trimmed(std::string_view(t).substr(6)));
  if (t.rfind("const", 0) == 0 && t.size() > 5 && std::isspace(static_cast<unsigned char>(t[5]))) {
    Point p = parsePoint(trimmed(std::string_view(t).substr(5)));
    return constantSequence(spaceOf(p), p);
  }
  if (auto a = callArgs(t, "approach")) {
    if (a->size() != 2) fail(ErrorKind::ParseError, "approach takes two arguments");
    return approachSequence(parseRational((*a)[0]), parseRational((*a)[1]));
  }
  if (auto a = callArgs(t, "pair")) {
    std::vector<Sequence> parts;
    for (const auto& x : *a) parts.push_back(parseSequence(x));
    return productOf(std::move(parts));
  }
  if (auto a = callArgs(t, "blocks")) {
    if (a->size() < 4 || a->size() > 5) fail(ErrorKind::ParseError, "blocks takes 4 or 5 arguments");
    MonotoneValues::Shape shape;
    if ((*a)[0] == "harmonic") shape = MonotoneValues::Harmonic;
    else if ((*a)[0] == "geometric") shape = MonotoneValues::Geometric;
    else fail(ErrorKind::ParseError, "unknown block shape: " + (*a)[0]);
    Rational sign = parseRational((*a)[2]);
    std::int64_t shift = a->size() == 5 ? static_cast<std::int64_t>(std::stoll((*a)[4])) : 0;
    return blockConstant(Space::unitInterval(),
                         std::make_shared<MonotoneValues>(parseRational((*a)[1]), static_cast<int>(numer(sign)),
                                                          parseRational((*a)[3]), shape, shift),
                         twoAdic(), IndexSet::naturals(), t);
  }
  fail(ErrorKind::ParseError, "unrecognized sequence: " + t);
}

}  // namespace

Sequence parseSequence(std::string_view text) {
  auto pieces = splitTop(text, '|');
  if (pieces.empty() || pieces[0].empty()) fail(ErrorKind::ParseError, "empty sequence spec");
  Sequence s = parsePrimary(pieces[0]);
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    const std::string& p = pieces[i];
    if (p.rfind("restrict", 0) != 0) fail(ErrorKind::ParseError, "expected 'restrict', got: " + p);
    s = subsequence(s, parseIndexSet(trimmed(std::string_view(p).substr(8)), s.decomposition() ? s.decomposition() : twoAdic()));
  }
  return s;
}

}  // namespace icomp
