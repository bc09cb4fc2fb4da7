#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "icomp/natset.hpp"

namespace icomp {

struct DensityResult {
  enum Kind { Exact, Profile } kind = Profile;
  Rational exact;
  std::vector<std::pair<std::uint64_t, Rational>> profile;
  std::string note;

  std::string toString() const;
};

inline const std::vector<std::uint64_t>& defaultProfileHorizons() {
  static const std::vector<std::uint64_t> h{std::uint64_t{1} << 12, std::uint64_t{1} << 14,
                                            std::uint64_t{1} << 16};
  return h;
}

Rational prefixDensity(const IndexSet& a, std::uint64_t N);
// Exact natural density of a symbolic normal form, when every needed overlap has a closed form.
std::optional<Rational> exactDensity(const IndexSet& a);
DensityResult densityOf(const IndexSet& a, const std::vector<std::uint64_t>& horizons = defaultProfileHorizons());

}  // namespace icomp
