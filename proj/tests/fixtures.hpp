#pragma once
// Hand-built maps and forests shared by the unit tests.

#include <vector>

#include "polydisk/blossom.hpp"
#include "polydisk/map.hpp"

namespace fixtures {

using namespace polydisk;

// rho_1 = 0, rho_2 = 1, rho_3 = 2; dart 5 is rho_1 -> rho_3.
inline CombMap triangle() {
  return CombMap::from_rotations({{5, 0}, {1, 2}, {3, 4}}, {1, 0, 3, 2, 5, 4}, 5);
}

// Triangle plus a center vertex 3 joined to the three corners.
inline CombMap triangle_center() {
  return CombMap::from_rotations({{5, 7, 0}, {1, 9, 2}, {3, 11, 4}, {6, 10, 8}},
                                 {1, 0, 3, 2, 5, 4, 7, 6, 9, 8, 11, 10}, 5);
}

inline BlossomForest bare_forest(std::int32_t p) {
  std::vector<std::vector<std::int32_t>> children(p), stems(p);
  for (std::int32_t k = 0; k < p - 3; ++k) stems[0].push_back(0);
  return BlossomForest::make(CyclicForest(p, children), stems);
}

// p = 3, one inner vertex v under rho_1 carrying its two stems.
inline BlossomForest one_vertex_forest() {
  return BlossomForest::make(CyclicForest(3, {{3}, {}, {}, {}}), {{}, {}, {}, {0, 0}});
}

}  // namespace fixtures
