#include "vortexflow/index.hpp"

#include <numeric>
#include <string>

#include "vortexflow/error.hpp"

namespace vortexflow {

long long chern_pairing(const CircleSpace& space, long long B) {
  const long long c = std::accumulate(space.weights().begin(), space.weights().end(), 0LL);
  return c * B;
}

Rational virtual_dimension(const IndexQuery& q) {
  if (q.genus < 0) throw Error("genus must be non-negative", "index.genus");
  if (q.B < 1) throw Error("class must pair positively with [omega - mu] (B >= 1)", "index.B");
  if (q.sectors.empty()) throw Error("at least one cylindrical end is required", "index.sectors");
  Rational shifts(0);
  for (const SectorLabel& s : q.sectors) {
    const SectorLabel checked = make_sector(q.space, s.m, s.k);
    if (checked.m != s.m || checked.k != s.k) {
      throw Error("sector (" + std::to_string(s.m) + "," + std::to_string(s.k) + ") is not in lowest terms",
                  "index.sectors");
    }
    shifts += degree_shift_CR(q.space, checked);
  }
  constexpr long long dim_g = 1;
  const long long n = q.space.dim();
  return Rational(2 * chern_pairing(q.space, q.B) + 2 * (n - dim_g) * (1 - q.genus)) - Rational(2) * shifts;
}

}  // namespace vortexflow
