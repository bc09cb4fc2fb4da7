#include "icomp/density.hpp"

#include <functional>

#include "icomp/error.hpp"

namespace icomp {

namespace {

constexpr std::uint64_t kNodeBudget = std::uint64_t{1} << 20;

std::optional<Rational> generatorDensity(const Generator& g, const Decomposition& d) {
  GeneratorForm f = generatorForm(g, d);
  if (f.state == GeneratorForm::Empty) return Rational(0);
  if (f.state == GeneratorForm::Known) return Rational(Nat(1), f.p.step);
  if (g.kind == GeneratorKind::Block || g.kind == GeneratorKind::BlockTail) return d.blockDensity(g.block);
  return std::nullopt;
}

// Intersection of two generators as a one-generator set, read back from the algebra.
std::optional<std::vector<Generator>> meet(const Generator& a, const Generator& b, const DecompositionPtr& d) {
  IndexSet x = intersect(IndexSet::normalForm({}, {a}, {}, d), IndexSet::normalForm({}, {b}, {}, d));
  if (x.isSampled()) return std::nullopt;
  return x.generators();
}

}  // namespace

Rational prefixDensity(const IndexSet& a, std::uint64_t N) {
  if (N == 0) fail(ErrorKind::OutOfRange, "prefix density needs N >= 1");
  return Rational(Nat(prefixCount(a, N)), Nat(N));
}

std::optional<Rational> exactDensity(const IndexSet& a) {
  if (a.isSampled()) return std::nullopt;
  const auto& gens = a.generators();
  const DecompositionPtr& d = a.decomposition();
  Rational total = 0;
  std::uint64_t nodes = 0;
  bool ok = true;
  std::function<void(std::size_t, const Generator&, int)> dfs = [&](std::size_t from, const Generator& cur, int sign) {
    for (std::size_t i = from; i < gens.size() && ok; ++i) {
      if (cur.labelled() && gens[i].labelled() && cur.block != gens[i].block) continue;
      auto m = meet(cur, gens[i], d);
      if (!m) {
        ok = false;
        return;
      }
      if (m->empty()) continue;
      if (m->size() != 1 || ++nodes > kNodeBudget) {
        ok = false;
        return;
      }
      auto q = generatorDensity((*m)[0], *d);
      if (!q) {
        ok = false;
        return;
      }
      total += sign > 0 ? *q : Rational(-*q);
      dfs(i + 1, (*m)[0], -sign);
    }
  };
  for (std::size_t i = 0; i < gens.size() && ok; ++i) {
    auto q = generatorDensity(gens[i], *d);
    if (!q) return std::nullopt;
    total += *q;
    dfs(i + 1, gens[i], -1);
  }
  if (!ok) return std::nullopt;
  return total;
}

DensityResult densityOf(const IndexSet& a, const std::vector<std::uint64_t>& horizons) {
  DensityResult r;
  if (auto q = exactDensity(a)) {
    r.kind = DensityResult::Exact;
    r.exact = *q;
    r.note = "inclusion-exclusion over generator densities";
    return r;
  }
  r.kind = DensityResult::Profile;
  std::uint64_t cap = a.horizon();
  for (auto N : horizons) {
    if (N > cap) continue;
    r.profile.push_back({N, prefixDensity(a, N)});
  }
  if (r.profile.empty() && cap != kNoBound && cap >= 1) r.profile.push_back({cap, prefixDensity(a, cap)});
  r.note = a.isSampled() ? "empirical profile of sampled set" : "no closed form for an overlap";
  if (const SampledData* s = a.sample(); s && s->certifiedDensity)
    r.note += "; structural density " + toString(*s->certifiedDensity);
  return r;
}

std::string DensityResult::toString() const {
  if (kind == Exact) return "Exact " + icomp::toString(exact);
  std::string s = "Profile";
  for (const auto& [N, q] : profile) s += " N=" + std::to_string(N) + ":" + toDecimal(q, 6);
  return s;
}

}  // namespace icomp
