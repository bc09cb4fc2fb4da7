#include "icomp/spaces.hpp"

#include <cctype>

#include "icomp/error.hpp"

namespace icomp {

// ---------------------------------------------------------------- Space

Space Space::unitInterval() { return Space(); }

Space Space::cantorCube() {
  Space s;
  s.kind_ = CantorCube;
  return s;
}

Space Space::product(std::vector<Space> factors) {
  if (factors.empty()) fail(ErrorKind::ShapeMismatch, "a product needs at least one factor");
  Space s;
  s.kind_ = FiniteProduct;
  s.factors_ = std::move(factors);
  return s;
}

bool Space::metricAvailable() const {
  switch (kind_) {
    case UnitInterval: return true;
    case CantorCube: return false;
    case FiniteProduct:
      for (const auto& f : factors_)
        if (!f.metricAvailable()) return false;
      return true;
  }
  return false;
}

std::string Space::toString() const {
  switch (kind_) {
    case UnitInterval: return "[0,1]";
    case CantorCube: return "{0,1}^N";
    case FiniteProduct: {
      std::string s;
      for (std::size_t i = 0; i < factors_.size(); ++i) s += (i ? " x " : "") + factors_[i].toString();
      return s;
    }
  }
  return "?";
}

// ---------------------------------------------------------------- CubePoint

CubePoint CubePoint::ones() { return eventually({}, true); }
CubePoint CubePoint::zeros() { return eventually({}, false); }

CubePoint CubePoint::eventually(std::vector<bool> prefix, bool tail) {
  CubePoint c;
  c.prefix_ = std::move(prefix);
  c.tail_ = tail;
  c.trim();
  return c;
}

CubePoint CubePoint::lazy(std::function<bool(std::uint64_t)> bit, std::string label) {
  CubePoint c;
  c.lazy_ = std::move(bit);
  c.label_ = std::move(label);
  return c;
}

void CubePoint::trim() {
  while (!prefix_.empty() && prefix_.back() == tail_) prefix_.pop_back();
}

bool CubePoint::bit(std::uint64_t coord) const {
  if (coord == 0) fail(ErrorKind::OutOfRange, "cube coordinates start at 1");
  if (lazy_) return lazy_(coord);
  return coord <= prefix_.size() ? prefix_[coord - 1] : tail_;
}

std::string CubePoint::toString() const {
  if (lazy_) return label_;
  if (prefix_.empty()) return tail_ ? "ones" : "zeros";
  std::string s = "bits(";
  for (std::size_t i = 0; i < prefix_.size(); ++i) s += (i ? "," : "") + std::string(prefix_[i] ? "1" : "0");
  return s + ";" + (tail_ ? "1" : "0") + ")";
}

std::optional<bool> sameCubePoint(const CubePoint& a, const CubePoint& b) {
  if (!a.symbolic() || !b.symbolic()) return std::nullopt;
  return a.prefix() == b.prefix() && a.tailBit() == b.tailBit();
}

// ---------------------------------------------------------------- Point

Point Point::rat(Rational q) {
  Point p;
  p.kind = Real;
  p.value = std::move(q);
  return p;
}

Point Point::of(CubePoint c) {
  Point p;
  p.kind = Cube;
  p.cube = std::move(c);
  return p;
}

Point Point::tuple(std::vector<Point> ps) {
  Point p;
  p.kind = Tuple;
  p.parts = std::move(ps);
  return p;
}

std::string Point::toString() const {
  switch (kind) {
    case Real: return "rat(" + icomp::toString(value) + ")";
    case Cube: return cube.toString();
    case Tuple: {
      std::string s = "(";
      for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i].toString();
      return s + ")";
    }
  }
  return "?";
}

std::optional<bool> samePoint(const Point& a, const Point& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Point::Real: return a.value == b.value;
    case Point::Cube: return sameCubePoint(a.cube, b.cube);
    case Point::Tuple: {
      if (a.parts.size() != b.parts.size()) return false;
      bool unknown = false;
      for (std::size_t i = 0; i < a.parts.size(); ++i) {
        auto s = samePoint(a.parts[i], b.parts[i]);
        if (s && !*s) return false;
        if (!s) unknown = true;
      }
      if (unknown) return std::nullopt;
      return true;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- Nbhd

Nbhd Nbhd::ball(Rational center, Rational radius) {
  if (radius <= 0) fail(ErrorKind::OutOfRange, "ball radius must be positive");
  Nbhd u;
  u.kind = Ball;
  u.center = std::move(center);
  u.radius = std::move(radius);
  return u;
}

Nbhd Nbhd::cylinder(std::map<std::uint64_t, bool> constraints) {
  for (const auto& [k, v] : constraints)
    if (k == 0) fail(ErrorKind::OutOfRange, "cube coordinates start at 1");
  Nbhd u;
  u.kind = Cylinder;
  u.constraints = std::move(constraints);
  return u;
}

Nbhd Nbhd::box(std::vector<Nbhd> parts) {
  Nbhd u;
  u.kind = Box;
  u.parts = std::move(parts);
  return u;
}

std::string Nbhd::toString() const {
  switch (kind) {
    case Ball: return "ball(" + icomp::toString(center) + ", " + icomp::toString(radius) + ")";
    case Cylinder: {
      std::string s = "cyl{";
      bool first = true;
      for (const auto& [k, v] : constraints) {
        s += (first ? "" : ",") + std::to_string(k) + ":" + (v ? "1" : "0");
        first = false;
      }
      return s + "}";
    }
    case Box: {
      std::string s = "box[";
      for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i].toString();
      return s + "]";
    }
  }
  return "?";
}

// ---------------------------------------------------------------- operations

void checkPoint(const Space& sp, const Point& p) {
  switch (sp.kind()) {
    case Space::UnitInterval:
      if (p.kind != Point::Real) fail(ErrorKind::ShapeMismatch, p.toString() + " is not a point of [0,1]");
      if (p.value < 0 || p.value > 1) fail(ErrorKind::OutOfRange, p.toString() + " lies outside [0,1]");
      return;
    case Space::CantorCube:
      if (p.kind != Point::Cube) fail(ErrorKind::ShapeMismatch, p.toString() + " is not a cube point");
      return;
    case Space::FiniteProduct:
      if (p.kind != Point::Tuple || p.parts.size() != sp.factors().size())
        fail(ErrorKind::ShapeMismatch, p.toString() + " does not match " + sp.toString());
      for (std::size_t i = 0; i < p.parts.size(); ++i) checkPoint(sp.factors()[i], p.parts[i]);
      return;
  }
}

void checkNbhd(const Space& sp, const Nbhd& U) {
  switch (sp.kind()) {
    case Space::UnitInterval:
      if (U.kind != Nbhd::Ball) fail(ErrorKind::ShapeMismatch, U.toString() + " is not a ball");
      return;
    case Space::CantorCube:
      if (U.kind != Nbhd::Cylinder) fail(ErrorKind::ShapeMismatch, U.toString() + " is not a cylinder");
      return;
    case Space::FiniteProduct:
      if (U.kind != Nbhd::Box || U.parts.size() != sp.factors().size())
        fail(ErrorKind::ShapeMismatch, U.toString() + " does not match " + sp.toString());
      for (std::size_t i = 0; i < U.parts.size(); ++i) checkNbhd(sp.factors()[i], U.parts[i]);
      return;
  }
}

bool inNbhd(const Space& sp, const Point& p, const Nbhd& U) {
  checkNbhd(sp, U);
  switch (sp.kind()) {
    case Space::UnitInterval:
      if (p.kind != Point::Real) fail(ErrorKind::ShapeMismatch, "point/space mismatch");
      return absolute(p.value - U.center) < U.radius;
    case Space::CantorCube:
      if (p.kind != Point::Cube) fail(ErrorKind::ShapeMismatch, "point/space mismatch");
      for (const auto& [k, v] : U.constraints)
        if (p.cube.bit(k) != v) return false;
      return true;
    case Space::FiniteProduct:
      if (p.kind != Point::Tuple || p.parts.size() != U.parts.size())
        fail(ErrorKind::ShapeMismatch, "point/space mismatch");
      for (std::size_t i = 0; i < U.parts.size(); ++i)
        if (!inNbhd(sp.factors()[i], p.parts[i], U.parts[i])) return false;
      return true;
  }
  return false;
}

namespace {

Nbhd basisAt(const Space& sp, const Point& p, std::uint64_t k) {
  switch (sp.kind()) {
    case Space::UnitInterval: return Nbhd::ball(p.value, pow2(-static_cast<int>(k)));
    case Space::CantorCube: {
      std::map<std::uint64_t, bool> c;
      for (std::uint64_t i = 1; i <= k; ++i) c[i] = p.cube.bit(i);
      return Nbhd::cylinder(std::move(c));
    }
    case Space::FiniteProduct: {
      std::vector<Nbhd> parts;
      for (std::size_t i = 0; i < sp.factors().size(); ++i) parts.push_back(basisAt(sp.factors()[i], p.parts[i], k));
      return Nbhd::box(std::move(parts));
    }
  }
  return Nbhd();
}

}  // namespace

std::vector<Nbhd> basisFamily(const Space& sp, const Point& p, std::uint64_t depth) {
  if (depth == 0) fail(ErrorKind::OutOfRange, "basis depth must be >= 1");
  checkPoint(sp, p);
  std::vector<Nbhd> out;
  for (std::uint64_t k = 1; k <= depth; ++k) out.push_back(basisAt(sp, p, k));
  return out;
}

std::vector<Point> epsNet(const Space& sp, const Rational& eps) {
  if (eps <= 0) fail(ErrorKind::OutOfRange, "net radius must be positive");
  if (!sp.metricAvailable()) fail(ErrorKind::NoMetric, sp.toString() + " has no metric in this release");
  if (sp.kind() == Space::UnitInterval) {
    std::vector<Point> out;
    for (Rational x = 0; x <= 1; x += eps) out.push_back(Point::rat(x));
    return out;
  }
  std::vector<std::vector<Point>> nets;
  for (const auto& f : sp.factors()) nets.push_back(epsNet(f, eps));
  std::vector<Point> out{Point::tuple({})};
  for (const auto& net : nets) {
    std::vector<Point> next;
    for (const auto& partial : out)
      for (const auto& c : net) {
        Point q = partial;
        q.parts.push_back(c);
        next.push_back(std::move(q));
      }
    out = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------- parsing

namespace {

class Reader {
 public:
  explicit Reader(std::string_view t) : text_(t) {}

  [[noreturn]] void error(const std::string& what) const {
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
  bool peekDigit() {
    skip();
    return pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-');
  }
  std::string word() {
    skip();
    std::size_t b = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(b, pos_ - b));
  }
  Rational rational() {
    skip();
    std::size_t b = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/' || text_[pos_] == '-' ||
            text_[pos_] == '.'))
      ++pos_;
    if (b == pos_) error("expected rational");
    return parseRational(text_.substr(b, pos_ - b));
  }
  std::uint64_t natural() {
    Rational q = rational();
    if (denom(q) != 1 || q < 0) error("expected natural number");
    return toU64(numer(q));
  }
  bool bitValue() {
    std::uint64_t b = natural();
    if (b > 1) error("expected bit");
    return b == 1;
  }
  // Rational, possibly wrapped as rat(...).
  Rational realValue() {
    skip();
    if (text_.substr(pos_).starts_with("rat")) {
      word();
      expect('(');
      Rational q = rational();
      expect(')');
      return q;
    }
    return rational();
  }
  void end() {
    skip();
    if (pos_ != text_.size()) error("unexpected trailing input");
  }

  Point point() {
    if (eat('(')) {
      std::vector<Point> ps{point()};
      while (eat(',')) ps.push_back(point());
      expect(')');
      return Point::tuple(std::move(ps));
    }
    if (peekDigit()) return Point::rat(rational());
    std::size_t save = pos_;
    std::string w = word();
    if (w == "rat") {
      pos_ = save;
      return Point::rat(realValue());
    }
    if (w == "ones") return Point::of(CubePoint::ones());
    if (w == "zeros") return Point::of(CubePoint::zeros());
    if (w == "bits") {
      expect('(');
      std::vector<bool> prefix;
      if (!eat(';')) {
        do prefix.push_back(bitValue());
        while (eat(','));
        expect(';');
      }
      bool tail = bitValue();
      expect(')');
      return Point::of(CubePoint::eventually(std::move(prefix), tail));
    }
    error("unknown point form '" + w + "'");
  }

  Nbhd nbhd() {
    std::string w = word();
    if (w == "ball") {
      expect('(');
      Rational c = realValue();
      expect(',');
      Rational r = rational();
      expect(')');
      if (r <= 0) error("radius must be positive");
      return Nbhd::ball(c, r);
    }
    if (w == "cyl") {
      expect('{');
      std::map<std::uint64_t, bool> m;
      if (!eat('}')) {
        do {
          std::uint64_t k = natural();
          if (k == 0) error("coordinates start at 1");
          expect(':');
          if (!m.emplace(k, bitValue()).second) error("repeated coordinate");
        } while (eat(','));
        expect('}');
      }
      return Nbhd::cylinder(std::move(m));
    }
    if (w == "box") {
      expect('[');
      std::vector<Nbhd> parts{nbhd()};
      while (eat(',')) parts.push_back(nbhd());
      expect(']');
      return Nbhd::box(std::move(parts));
    }
    error("unknown neighborhood form '" + w + "'");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Point parsePoint(std::string_view text) {
  Reader r(text);
  Point p = r.point();
  r.end();
  return p;
}

Nbhd parseNbhd(std::string_view text) {
  Reader r(text);
  Nbhd u = r.nbhd();
  r.end();
  return u;
}

}  // namespace icomp
