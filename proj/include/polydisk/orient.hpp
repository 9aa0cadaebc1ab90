#pragma once
// Edge orientations of triangulations of the p-gon.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polydisk/map.hpp"

namespace polydisk {

// out[d] == 1 iff the edge of d is oriented from origin(d) to target(d).
struct Orientation {
  std::vector<std::uint8_t> out;

  bool contains(dart_t d) const { return out[d] != 0; }
};

inline bool is_consistent(const CombMap& m, const Orientation& o) {
  if (static_cast<dart_t>(o.out.size()) != m.num_darts()) return false;
  for (dart_t d = 0; d < m.num_darts(); ++d)
    if (o.out[d] + o.out[m.twin(d)] != 1) return false;
  return true;
}

inline std::vector<std::int32_t> out_degrees(const CombMap& m, const Orientation& o) {
  std::vector<std::int32_t> deg(m.num_vertices(), 0);
  for (dart_t d = 0; d < m.num_darts(); ++d)
    if (o.out[d]) ++deg[m.origin(d)];
  return deg;
}

struct OrientationCheck {
  bool ok = false;
  std::int64_t boundary_sum = 0;
  std::vector<vertex_t> bad_vertices;
  std::string message;
};

inline OrientationCheck is_3_orientation(const CombMap& m, const Orientation& o) {
  OrientationCheck r;
  if (!is_consistent(m, o)) {
    r.message = "orientation does not orient every edge exactly once";
    return r;
  }
  const auto deg = out_degrees(m, o);
  const auto boundary = m.boundary_mask();
  for (vertex_t v = 0; v < m.num_vertices(); ++v) {
    if (boundary[v])
      r.boundary_sum += deg[v];
    else if (deg[v] != 3)
      r.bad_vertices.push_back(v);
  }
  r.ok = r.bad_vertices.empty();
  if (!r.ok) r.message = "inner vertex " + std::to_string(r.bad_vertices.front()) + " has out-degree " +
                         std::to_string(deg[r.bad_vertices.front()]);
  return r;
}

// Faces reachable from `seed` in the dual without crossing an edge in `cut`.
inline std::vector<char> faces_on_side(const CombMap& m, face_t seed, const std::vector<char>& cut) {
  std::vector<char> in(m.num_faces(), 0);
  std::vector<face_t> stack{seed};
  in[seed] = 1;
  while (!stack.empty()) {
    const face_t f = stack.back();
    stack.pop_back();
    const dart_t start = m.face_dart(f);
    dart_t d = start;
    do {
      if (!cut[d]) {
        const face_t g = m.face(m.twin(d));
        if (!in[g]) {
          in[g] = 1;
          stack.push_back(g);
        }
      }
      d = m.phi(d);
    } while (d != start);
  }
  return in;
}

// A directed cycle is clockwise when the marked face lies on its left.
inline bool cycle_is_clockwise(const CombMap& m, const std::vector<dart_t>& cycle) {
  if (!m.marked_face()) throw map_error(map_errc::bad_index, "cycle sense needs a marked face");
  std::vector<char> cut(m.num_darts(), 0);
  for (dart_t d : cycle) cut[d] = cut[m.twin(d)] = 1;
  const auto left = faces_on_side(m, m.face(cycle.front()), cut);
  return left[*m.marked_face()] != 0;
}

inline bool boundary_is_clockwise(const CombMap& m, const Orientation& o) {
  for (dart_t d : m.face_darts(m.root_face()))
    if (!o.out[m.twin(d)]) return false;
  return true;
}

// Calls visit(cycle) for each simple directed cycle of o; stops when visit returns false.
inline void for_each_directed_cycle(const CombMap& m, const Orientation& o,
                                    const std::function<bool(const std::vector<dart_t>&)>& visit) {
  const vertex_t nv = m.num_vertices();
  std::vector<char> on_path(nv, 0);
  std::vector<dart_t> path;
  bool stop = false;
  std::function<void(vertex_t, vertex_t)> dfs = [&](vertex_t s, vertex_t v) {
    dart_t d = m.vertex_dart(v);
    do {
      if (stop) return;
      if (o.out[d]) {
        const vertex_t w = m.target(d);
        if (w == s) {
          path.push_back(d);
          if (!visit(path)) stop = true;
          path.pop_back();
        } else if (w > s && !on_path[w]) {
          on_path[w] = 1;
          path.push_back(d);
          dfs(s, w);
          path.pop_back();
          on_path[w] = 0;
        }
      }
      d = m.sigma(d);
    } while (d != m.vertex_dart(v));
  };
  for (vertex_t s = 0; s < nv && !stop; ++s) {
    on_path[s] = 1;
    dfs(s, s);
    on_path[s] = 0;
  }
}

// Exhaustive check: clockwise boundary and no counterclockwise directed cycle.
inline bool is_minimal(const CombMap& m, const Orientation& o) {
  if (!is_consistent(m, o) || !boundary_is_clockwise(m, o)) return false;
  bool ok = true;
  for_each_directed_cycle(m, o, [&](const std::vector<dart_t>& c) {
    if (!cycle_is_clockwise(m, c)) ok = false;
    return ok;
  });
  return ok;
}

// Facial cycles only; cheap spot check on large maps.
inline bool has_ccw_facial_cycle(const CombMap& m, const Orientation& o) {
  const face_t marked = m.marked_face().value_or(-1);
  for (face_t f = 0; f < m.num_faces(); ++f) {
    if (f == m.root_face()) continue;
    const auto darts = m.face_darts(f);
    bool all_along = true, all_against = true;
    for (dart_t d : darts) {
      all_along = all_along && o.out[d];
      all_against = all_against && o.out[m.twin(d)];
    }
    if (all_along && f != marked) return true;
    if (all_against && f == marked) return true;
  }
  return false;
}

// All orientations with out-degree 3 at inner vertices and a clockwise boundary.
inline std::vector<Orientation> enumerate_3_orientations(const CombMap& m, std::size_t limit = 1u << 20) {
  const auto boundary = m.boundary_mask();
  Orientation o;
  o.out.assign(m.num_darts(), 0);
  std::vector<char> fixed(m.num_darts(), 0);
  std::vector<std::int32_t> deg(m.num_vertices(), 0), open(m.num_vertices(), 0);
  for (dart_t d : m.face_darts(m.root_face())) {
    const dart_t t = m.twin(d);
    o.out[t] = 1;
    fixed[d] = fixed[t] = 1;
    ++deg[m.origin(t)];
  }
  std::vector<dart_t> edges;
  for (dart_t d = 0; d < m.num_darts(); ++d)
    if (d < m.twin(d) && !fixed[d]) {
      edges.push_back(d);
      ++open[m.origin(d)];
      ++open[m.target(d)];
    }
  std::vector<Orientation> found;
  auto feasible = [&](vertex_t v) {
    if (boundary[v]) return true;
    return deg[v] <= 3 && deg[v] + open[v] >= 3;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (found.size() >= limit) return;
    if (k == edges.size()) {
      for (vertex_t v = 0; v < m.num_vertices(); ++v)
        if (!boundary[v] && deg[v] != 3) return;
      found.push_back(o);
      return;
    }
    const dart_t d = edges[k];
    const vertex_t a = m.origin(d), b = m.target(d);
    --open[a];
    --open[b];
    for (int dir = 0; dir < 2; ++dir) {
      const dart_t x = dir == 0 ? d : m.twin(d);
      o.out[x] = 1;
      ++deg[m.origin(x)];
      if (feasible(a) && feasible(b)) rec(k + 1);
      --deg[m.origin(x)];
      o.out[x] = 0;
    }
    ++open[a];
    ++open[b];
  };
  rec(0);
  return found;
}

}  // namespace polydisk
