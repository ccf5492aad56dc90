#pragma once

#include <vector>

#include "vortexflow/circle_space.hpp"
#include "vortexflow/critical.hpp"

namespace vortexflow {

// H_2^G(C^n) is identified with Z, B counting multiples of the generator.
struct IndexQuery {
  CircleSpace space;
  int genus = 0;
  long long B = 1;
  std::vector<SectorLabel> sectors;  // one per cylindrical end
};

// <c_1^G(TX), B> = (sum_j w_j) B.
long long chern_pairing(const CircleSpace& space, long long B);

// 2 <c_1^G(TX), B> + 2 (n - dim G)(1 - g) - 2 sum_i iota_CR(g_i), with dim G = 1.
Rational virtual_dimension(const IndexQuery& q);

}  // namespace vortexflow
