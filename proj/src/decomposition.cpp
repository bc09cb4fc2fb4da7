#include "icomp/decomposition.hpp"

#include "icomp/error.hpp"

namespace icomp {

namespace {

// Returns g and x with a*x ≡ g (mod m).
Nat inverseish(const Nat& a, const Nat& m, Nat& g) {
  Nat old_r = a, r = m, old_s = 1, s = 0;
  while (r != 0) {
    Nat q = old_r / r;
    Nat t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  g = old_r;
  return old_s;
}

Nat modPositive(const Nat& a, const Nat& m) {
  Nat r = a % m;
  return r < 0 ? Nat(r + m) : r;
}

class TwoAdic final : public Decomposition {
 public:
  const std::string& name() const override { return name_; }
  std::uint64_t blockOf(std::uint64_t n) const override {
    if (n == 0) fail(ErrorKind::OutOfRange, "block of 0");
    return valuation2(n) + 1;
  }
  std::optional<Progression> blockProgression(std::uint64_t j) const override {
    if (j == 0) return std::nullopt;
    Nat h = pow2Nat(static_cast<unsigned>(j - 1));
    return Progression{h, Nat(h * 2)};
  }
  std::optional<Progression> tailProgression(std::uint64_t j) const override {
    if (j == 0) return std::nullopt;
    Nat h = pow2Nat(static_cast<unsigned>(j - 1));
    return Progression{h, h};
  }
  std::optional<BlockSet> spread(const Progression& p) const override {
    unsigned s = valuation2(p.step);
    unsigned va = valuation2(p.first);
    if (va < s) return BlockSet::single(va + 1);
    return BlockSet::from(s + 1);
  }
  std::optional<Rational> blockDensity(std::uint64_t j) const override {
    return pow2(-static_cast<int>(j));
  }

 private:
  std::string name_ = "2adic";
};

class FunctionDecomposition final : public Decomposition {
 public:
  FunctionDecomposition(std::string name, std::function<std::uint64_t(std::uint64_t)> f)
      : name_(std::move(name)), f_(std::move(f)) {}
  const std::string& name() const override { return name_; }
  std::uint64_t blockOf(std::uint64_t n) const override { return f_(n); }

 private:
  std::string name_;
  std::function<std::uint64_t(std::uint64_t)> f_;
};

}  // namespace

std::optional<Progression> intersect(const Progression& p, const Progression& q) {
  Nat g;
  Nat x = inverseish(p.step, q.step, g);
  Nat diff = q.first - p.first;
  if (diff % g != 0) return std::nullopt;
  Nat l = p.step / g * q.step;
  // p.first + p.step * t ≡ q.first (mod q.step)  with  t = x * diff / g
  Nat t = modPositive(x * (diff / g), q.step / g);
  Nat base = p.first + p.step * t;
  Nat lo = p.first > q.first ? p.first : q.first;
  Nat r = modPositive(base - lo, l);
  Nat first = lo + r;
  return Progression{first, l};
}

bool isSubprogression(const Progression& p, const Progression& q) {
  return p.step % q.step == 0 && q.contains(p.first);
}

DecompositionPtr twoAdic() {
  static const DecompositionPtr instance = std::make_shared<TwoAdic>();
  return instance;
}

DecompositionPtr functionDecomposition(std::string name, std::function<std::uint64_t(std::uint64_t)> f) {
  return std::make_shared<FunctionDecomposition>(std::move(name), std::move(f));
}

bool sameDecomposition(const DecompositionPtr& a, const DecompositionPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->name() == b->name();
}

}  // namespace icomp
