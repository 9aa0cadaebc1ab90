#pragma once
// Deterministic structural checks on closures. Each returns an empty string
// on success and a description of the first counterexample otherwise.

#include <cstdint>
#include <cstdlib>
#include <string>

#include "polydisk/blossom.hpp"
#include "polydisk/map.hpp"
#include "polydisk/orient.hpp"

namespace polydisk {

inline std::string check_counts(const CombMap& m, std::int32_t p) {
  const std::int32_t n = m.num_vertices();
  if (m.perimeter() != p) return "perimeter " + std::to_string(m.perimeter());
  if (m.num_edges() != 3 * n - p - 3) return "edge count " + std::to_string(m.num_edges());
  if (m.num_faces() != 2 * n - p - 1) return "face count " + std::to_string(m.num_faces());
  if (classify(m, p) != tri_type::III) return std::string("classified as ") + to_string(classify(m, p));
  if (!m.marked_face()) return "no marked face";
  return {};
}

// exhaustive selects the full directed-cycle search; otherwise facial cycles only.
inline std::string check_orientation(const CombMap& m, const Orientation& o, bool exhaustive) {
  const auto chk = is_3_orientation(m, o);
  if (!chk.ok) return chk.message;
  if (chk.boundary_sum != 2 * m.perimeter() - 3) return "boundary out-degree sum " + std::to_string(chk.boundary_sum);
  if (!boundary_is_clockwise(m, o)) return "boundary is not a clockwise cycle";
  if (exhaustive ? !is_minimal(m, o) : has_ccw_facial_cycle(m, o)) return "counterclockwise cycle found";
  return {};
}

inline std::string check_label_claims(const Closure& c) {
  const CombMap& m = c.map;
  const LabeledForest& L = c.forest;
  for (dart_t d = 0; d < m.num_darts(); ++d) {
    if (!c.orientation.out[d] || c.cls[d] == edge_class::boundary) continue;
    const dart_t r = m.twin(d);
    const std::int32_t a = c.lam_left[d], b = c.lam_right(r), x = c.lam_left[r], y = c.lam_right(d);
    bool ok = false;
    switch (c.cls[d]) {
      case edge_class::tree: ok = b == a - 1 && x == a - 1 && y == a - 2; break;
      case edge_class::closure_first: ok = b == a - 1 && x == a - 1 && y == a + 1; break;
      case edge_class::closure_second: ok = b == a + 2 && x == a + 2 && y == a + 1; break;
      case edge_class::boundary: break;
    }
    if (!ok) return "edge quadruple at dart " + std::to_string(d);
    const vertex_t u = m.origin(d), v = m.target(d);
    if (u < L.p || v < L.p) continue;
    const std::int32_t gap = std::abs(c.X(u) - c.X(v));
    if (c.cls[d] != edge_class::tree && gap > 3) return "closure edge label gap at dart " + std::to_string(d);
    if (c.cls[d] == edge_class::tree && gap > 1) return "tree edge label gap at dart " + std::to_string(d);
  }
  std::vector<std::int32_t> passed(L.n_proper, 0);
  for (std::int32_t k = 0; k < L.n_corners; ++k) {
    if (L.is_blossom_corner(k)) {
      ++passed[L.stem_vertex[L.corner_stem[k]]];
      continue;
    }
    const vertex_t v = L.corner_vertex[k];
    if (v < L.p) continue;
    if (L.label[k] != L.X(v) + passed[v]) return "corner label structure at vertex " + std::to_string(v);
  }
  return {};
}

inline std::string check_closure(const Closure& c, bool exhaustive) {
  const std::int32_t p = c.forest.p;
  if (auto e = check_counts(c.map, p); !e.empty()) return e;
  if (auto e = check_orientation(c.map, c.orientation, exhaustive); !e.empty()) return e;
  const face_t mf = *c.map.marked_face();
  for (std::int32_t k : {c.vstar.k_min, c.vstar.k_min1, c.vstar.k_min2})
    if (c.map.face(c.forest.corner_dart[k]) != mf) return "marked face misses corner " + std::to_string(k);
  return check_label_claims(c);
}

}  // namespace polydisk
