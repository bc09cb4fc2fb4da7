#include "icomp/closure.hpp"

#include <algorithm>
#include <memory>

#include "icomp/error.hpp"

namespace icomp {

namespace {

bool intervalEmpty(const Interval& J) { return J.lo > J.hi || (J.lo == J.hi && (J.loOpen || J.hiOpen)); }

void checkUnit(const Rational& q, const std::string& what) {
  if (q < 0 || q > 1) fail(ErrorKind::OutOfRange, what + " " + toString(q) + " lies outside [0,1]");
}

void validate(const SetDescription& A) {
  for (const auto& p : A.points) checkUnit(p, "point");
  for (const auto& J : A.intervals) {
    checkUnit(J.lo, "endpoint");
    checkUnit(J.hi, "endpoint");
  }
}

std::string trim(std::string_view t) {
  std::size_t a = 0, b = t.size();
  while (a < b && t[a] == ' ') ++a;
  while (b > a && t[b - 1] == ' ') --b;
  return std::string(t.substr(a, b - a));
}

bool decFamily(const Ideal& I) {
  IdealKind f = I.family();
  return (f == IdealKind::DecA || f == IdealKind::DecB) && I.decomposition();
}

Verdict certify(const Sequence& w, const Ideal& I, const Point& x, std::uint64_t budget, Mode mode) {
  Verdict nonthin = member(I, w.domain());
  if (!nonthin.isFalse()) return Verdict::unknown(0, "witness domain not certified nonthin", {nonthin.summary()});
  if (mode == Mode::I) return iConverges(w, I, x, budget).overall;
  return iStarConverges(w, I, x, budget).first.overall;
}

}  // namespace

SetDescription SetDescription::pointSet(std::vector<Rational> ps) {
  SetDescription d;
  d.kind = FinitePointSet;
  d.points = std::move(ps);
  return d;
}

SetDescription SetDescription::intervalUnion(std::vector<Interval> is) {
  SetDescription d;
  d.kind = IntervalUnion;
  d.intervals = std::move(is);
  return d;
}

bool SetDescription::contains(const Rational& x) const {
  if (std::find(points.begin(), points.end(), x) != points.end()) return true;
  return std::any_of(intervals.begin(), intervals.end(), [&](const Interval& J) { return J.contains(x); });
}

bool SetDescription::empty() const {
  return points.empty() && std::all_of(intervals.begin(), intervals.end(), intervalEmpty);
}

std::string SetDescription::toString() const {
  if (kind == FinitePointSet) {
    std::string out = "{";
    for (std::size_t i = 0; i < points.size(); ++i) out += (i ? ", " : "") + icomp::toString(points[i]);
    return out + "}";
  }
  if (intervals.empty()) return "empty";
  std::string out;
  for (std::size_t i = 0; i < intervals.size(); ++i) out += (i ? " u " : "") + intervals[i].toString();
  return out;
}

SetDescription uniteSets(const SetDescription& a, const SetDescription& b) {
  if (a.kind == SetDescription::FinitePointSet && b.kind == SetDescription::FinitePointSet) {
    auto ps = a.points;
    ps.insert(ps.end(), b.points.begin(), b.points.end());
    return SetDescription::pointSet(std::move(ps));
  }
  std::vector<Interval> is;
  for (const auto* d : {&a, &b}) {
    for (const auto& p : d->points) is.push_back(Interval{p, p});
    is.insert(is.end(), d->intervals.begin(), d->intervals.end());
  }
  return SetDescription::intervalUnion(std::move(is));
}

ClosureResult iClosureMember(const SetDescription& A, const Point& x, const Ideal& I, std::uint64_t budget, Mode mode) {
  if (x.kind != Point::Real) fail(ErrorKind::ShapeMismatch, "closure membership is implemented on the unit interval");
  if (budget == 0) fail(ErrorKind::OutOfRange, "budget must be at least 1");
  const Space sp = Space::unitInterval();
  checkPoint(sp, x);
  validate(A);
  ClosureResult r;

  if (A.contains(x.value)) {
    r.schema = "constant";
    r.witness = constantSequence(sp, x);
    Verdict v = certify(*r.witness, I, x, budget, mode);
    r.verdict = v.isTrue() ? Verdict::yes("x lies in A: the constant sequence at x converges to it", {v.rule})
                           : Verdict::unknown(v.horizon, "constant witness not certified", {v.summary()});
    return r;
  }

  // Distance from x to the nearest component, and an interval having x as an endpoint.
  std::optional<Rational> dist;
  const Interval* touching = nullptr;
  auto consider = [&](const Rational& d) {
    if (!dist || d < *dist) dist = d;
  };
  for (const auto& p : A.points) consider(absolute(x.value - p));
  for (const auto& J : A.intervals) {
    if (intervalEmpty(J)) continue;
    if (x.value < J.lo) consider(J.lo - x.value);
    else if (x.value > J.hi) consider(x.value - J.hi);
    else {
      consider(0);
      if (!touching) touching = &J;
    }
  }
  if (!dist) {
    r.schema = "separating ball";
    r.verdict = Verdict::no("A is empty, so no sequence in A exists");
    return r;
  }
  if (*dist > 0) {
    r.schema = "separating ball";
    r.separatingRadius = *dist / 2;
    r.verdict = Verdict::no("ball(" + toString(x.value) + ", " + toString(*r.separatingRadius) +
                            ") misses A: its exceptional set is the whole domain of any sequence in A, which is not in " +
                            I.toString());
    return r;
  }

  // x is an open endpoint of a nondegenerate interval of A.
  const Interval& J = *touching;
  int dir = x.value == J.lo ? 1 : -1;
  Rational width = J.hi - J.lo;
  if (mode == Mode::I && decFamily(I)) {
    // v_j = x +- width/(j+1), constant on the blocks of the ideal's decomposition.
    r.schema = "block-constant";
    r.witness = blockConstant(sp, std::make_shared<MonotoneValues>(x.value, dir, width, MonotoneValues::Harmonic, 1),
                              I.decomposition(), IndexSet::naturals(),
                              "blocks(harmonic, " + toString(x.value) + ", " + std::to_string(dir) + ", " +
                                  toString(width) + ", 1)");
  } else {
    // Finite block unions are not small for fin and density, so the witness converges classically.
    r.schema = "approach";
    r.witness = approachSequence(x.value, Rational(dir) * width / 2);
  }
  for (std::uint64_t n = 1; n <= 1024; ++n)
    if (!A.contains(r.witness->at(n).value))
      fail(ErrorKind::WitnessInvalid, "witness term " + std::to_string(n) + " leaves A");
  Verdict v = certify(*r.witness, I, x, budget, mode);
  r.verdict = v.isTrue() ? Verdict::yes("x is a limit of points of A: " + r.schema + " witness " + r.witness->name() +
                                            " converges to it",
                                        {v.rule})
                         : Verdict::unknown(v.horizon, "limit witness not certified", {v.summary()});
  return r;
}

std::vector<Rational> closureEscapes(const SetDescription& A, const Ideal& I, std::uint64_t q, std::uint64_t budget,
                                     Mode mode) {
  if (q == 0) fail(ErrorKind::OutOfRange, "grid denominator must be positive");
  std::vector<Rational> out;
  for (std::uint64_t k = 0; k <= q; ++k) {
    Rational x(k, q);
    if (A.contains(x)) continue;
    if (iClosureMember(A, Point::rat(x), I, budget, mode).verdict.isTrue()) out.push_back(x);
  }
  return out;
}

SetDescription parseSetDescription(std::string_view text) {
  std::string t = trim(text);
  if (t == "empty") return SetDescription::intervalUnion({});
  if (t.size() >= 2 && t.front() == '{' && t.back() == '}') {
    std::vector<Rational> ps;
    std::string inner = trim(std::string_view(t).substr(1, t.size() - 2));
    std::size_t start = 0;
    while (!inner.empty() && start <= inner.size()) {
      std::size_t comma = inner.find(',', start);
      std::string item = trim(std::string_view(inner).substr(start, comma == std::string::npos ? std::string::npos
                                                                                                  : comma - start));
      if (item.empty()) fail(ErrorKind::ParseError, "empty point in '" + t + "'");
      ps.push_back(parseRational(item));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    SetDescription d = SetDescription::pointSet(std::move(ps));
    validate(d);
    return d;
  }
  std::vector<Interval> is;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = t.find_first_of(")]", pos);
    if (end == std::string::npos) fail(ErrorKind::ParseError, "unterminated interval in '" + t + "'");
    std::string item = trim(std::string_view(t).substr(pos, end + 1 - pos));
    if (item.size() < 5 || (item.front() != '(' && item.front() != '['))
      fail(ErrorKind::ParseError, "bad interval '" + item + "'");
    std::size_t comma = item.find(',');
    if (comma == std::string::npos) fail(ErrorKind::ParseError, "interval needs two endpoints: '" + item + "'");
    Interval J;
    J.loOpen = item.front() == '(';
    J.hiOpen = item.back() == ')';
    J.lo = parseRational(trim(std::string_view(item).substr(1, comma - 1)));
    J.hi = parseRational(trim(std::string_view(item).substr(comma + 1, item.size() - comma - 2)));
    if (J.lo > J.hi) fail(ErrorKind::ParseError, "interval endpoints out of order: '" + item + "'");
    is.push_back(J);
    std::string rest = trim(std::string_view(t).substr(end + 1));
    if (rest.empty()) break;
    if (rest.front() != 'u') fail(ErrorKind::ParseError, "expected 'u' between intervals in '" + t + "'");
    pos = t.size() - rest.size() + 1;
  }
  SetDescription d = SetDescription::intervalUnion(std::move(is));
  validate(d);
  return d;
}

}  // namespace icomp
