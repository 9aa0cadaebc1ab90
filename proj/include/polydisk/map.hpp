#pragma once
// Rooted combinatorial maps stored as rotation systems on darts.
//
// sigma(d) is the next dart clockwise around origin(d), twin(d) the other half
// of the same edge, and phi(d) = sigma(twin(d)) walks the face on the left of d.
// A corner is identified with the dart that follows it clockwise. The root dart
// has the root face on its left; for a p-gon it is rho_1 -> rho_p.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polydisk {

using dart_t = std::int32_t;
using vertex_t = std::int32_t;
using face_t = std::int32_t;

enum class map_errc { malformed_rotation, disconnected, non_planar, not_inner_vertex, bad_index };

class map_error : public std::runtime_error {
 public:
  map_error(map_errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  map_errc code() const noexcept { return code_; }

 private:
  map_errc code_;
};

enum class tri_type { I, II, III, invalid };

inline const char* to_string(tri_type t) {
  switch (t) {
    case tri_type::I: return "I";
    case tri_type::II: return "II";
    case tri_type::III: return "III";
    default: return "invalid";
  }
}

class CombMap {
 public:
  CombMap() = default;

  // Per-vertex clockwise dart lists; vertex ids are list positions.
  static CombMap from_rotations(const std::vector<std::vector<dart_t>>& rotations,
                                const std::vector<dart_t>& twins, dart_t root,
                                std::optional<face_t> marked_face = std::nullopt) {
    const auto n = static_cast<dart_t>(twins.size());
    std::vector<dart_t> sigma(n, -1);
    std::vector<vertex_t> origin(n, -1);
    std::vector<dart_t> first;
    first.reserve(rotations.size());
    for (std::size_t v = 0; v < rotations.size(); ++v) {
      const auto& rot = rotations[v];
      if (rot.empty()) throw map_error(map_errc::malformed_rotation, "vertex with empty rotation");
      for (std::size_t k = 0; k < rot.size(); ++k) {
        const dart_t d = rot[k];
        if (d < 0 || d >= n) throw map_error(map_errc::malformed_rotation, "dart id out of range");
        if (origin[d] != -1) throw map_error(map_errc::malformed_rotation, "dart listed twice");
        origin[d] = static_cast<vertex_t>(v);
        sigma[d] = rot[(k + 1) % rot.size()];
      }
      first.push_back(rot.front());
    }
    for (dart_t d = 0; d < n; ++d)
      if (origin[d] == -1) throw map_error(map_errc::malformed_rotation, "dart missing from rotations");
    CombMap m;
    m.init(twins, std::move(sigma), std::move(origin), std::move(first), root);
    if (marked_face) m.set_marked_face(*marked_face);
    return m;
  }

  // Vertices are numbered by increasing smallest dart of their sigma-orbit.
  static CombMap from_permutations(std::vector<dart_t> twins, std::vector<dart_t> sigma, dart_t root) {
    const auto n = static_cast<dart_t>(twins.size());
    if (static_cast<dart_t>(sigma.size()) != n)
      throw map_error(map_errc::malformed_rotation, "sigma and twin sizes differ");
    std::vector<vertex_t> origin(n, -1);
    std::vector<dart_t> first;
    for (dart_t d = 0; d < n; ++d) {
      if (origin[d] != -1) continue;
      const auto v = static_cast<vertex_t>(first.size());
      first.push_back(d);
      dart_t x = d;
      do {
        if (x < 0 || x >= n || origin[x] != -1)
          throw map_error(map_errc::malformed_rotation, "sigma is not a permutation");
        origin[x] = v;
        x = sigma[x];
      } while (x != d);
    }
    CombMap m;
    m.init(std::move(twins), std::move(sigma), std::move(origin), std::move(first), root);
    return m;
  }

  // Same as from_permutations but keeps caller-given vertex ids.
  static CombMap from_permutations(std::vector<dart_t> twins, std::vector<dart_t> sigma,
                                   std::vector<vertex_t> origin, std::vector<dart_t> first, dart_t root) {
    CombMap m;
    m.init(std::move(twins), std::move(sigma), std::move(origin), std::move(first), root);
    return m;
  }

  dart_t num_darts() const { return static_cast<dart_t>(twin_.size()); }
  vertex_t num_vertices() const { return static_cast<vertex_t>(vertex_dart_.size()); }
  std::int32_t num_edges() const { return num_darts() / 2; }
  face_t num_faces() const { return static_cast<face_t>(face_dart_.size()); }

  dart_t twin(dart_t d) const { return twin_[d]; }
  dart_t sigma(dart_t d) const { return sigma_[d]; }
  dart_t sigma_inv(dart_t d) const { return sigma_inv_[d]; }
  dart_t phi(dart_t d) const { return sigma_[twin_[d]]; }
  vertex_t origin(dart_t d) const { return origin_[d]; }
  vertex_t target(dart_t d) const { return origin_[twin_[d]]; }
  face_t face(dart_t d) const { return face_[d]; }
  dart_t vertex_dart(vertex_t v) const { return vertex_dart_[v]; }
  dart_t face_dart(face_t f) const { return face_dart_[f]; }
  std::int32_t degree(vertex_t v) const { return degree_[v]; }
  std::int32_t face_degree(face_t f) const { return face_degree_[f]; }

  dart_t root() const { return root_; }
  vertex_t root_vertex() const { return origin_[root_]; }
  face_t root_face() const { return face_[root_]; }
  std::int32_t perimeter() const { return face_degree_[root_face()]; }

  const std::optional<face_t>& marked_face() const { return marked_; }
  void set_marked_face(std::optional<face_t> f) {
    if (f && (*f < 0 || *f >= num_faces())) throw map_error(map_errc::bad_index, "marked face out of range");
    if (f && *f == root_face()) throw map_error(map_errc::bad_index, "marked face equals root face");
    marked_ = f;
  }

  const std::vector<dart_t>& twins() const { return twin_; }
  const std::vector<dart_t>& sigmas() const { return sigma_; }

  // Clockwise dart list at v starting from vertex_dart(v).
  std::vector<dart_t> rotation(vertex_t v) const {
    std::vector<dart_t> out;
    dart_t d = vertex_dart_[v];
    do {
      out.push_back(d);
      d = sigma_[d];
    } while (d != vertex_dart_[v]);
    return out;
  }

  std::vector<dart_t> face_darts(face_t f) const {
    std::vector<dart_t> out;
    dart_t d = face_dart_[f];
    do {
      out.push_back(d);
      d = phi(d);
    } while (d != face_dart_[f]);
    return out;
  }

  // Vertices on the root face.
  std::vector<char> boundary_mask() const {
    std::vector<char> mask(num_vertices(), 0);
    for (dart_t d : face_darts(root_face())) mask[origin_[d]] = 1;
    return mask;
  }

 private:
  void init(std::vector<dart_t> twins, std::vector<dart_t> sigma, std::vector<vertex_t> origin,
            std::vector<dart_t> first, dart_t root) {
    const auto n = static_cast<dart_t>(twins.size());
    if (n == 0) throw map_error(map_errc::malformed_rotation, "map without edges");
    if (n % 2 != 0) throw map_error(map_errc::malformed_rotation, "odd number of darts");
    for (dart_t d = 0; d < n; ++d) {
      const dart_t t = twins[d];
      if (t < 0 || t >= n || t == d || twins[t] != d)
        throw map_error(map_errc::malformed_rotation, "twin is not a fixed-point-free involution");
    }
    if (root < 0 || root >= n) throw map_error(map_errc::bad_index, "root dart out of range");
    twin_ = std::move(twins);
    sigma_ = std::move(sigma);
    origin_ = std::move(origin);
    vertex_dart_ = std::move(first);
    root_ = root;
    sigma_inv_.assign(n, -1);
    for (dart_t d = 0; d < n; ++d) sigma_inv_[sigma_[d]] = d;
    degree_.assign(vertex_dart_.size(), 0);
    for (dart_t d = 0; d < n; ++d) ++degree_[origin_[d]];

    face_.assign(n, -1);
    for (dart_t d = 0; d < n; ++d) {
      if (face_[d] != -1) continue;
      const auto f = static_cast<face_t>(face_dart_.size());
      face_dart_.push_back(d);
      std::int32_t len = 0;
      dart_t x = d;
      do {
        face_[x] = f;
        ++len;
        x = phi(x);
      } while (x != d);
      face_degree_.push_back(len);
    }

    std::vector<char> seen(vertex_dart_.size(), 0);
    std::vector<vertex_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const vertex_t v = stack.back();
      stack.pop_back();
      dart_t d = vertex_dart_[v];
      do {
        const vertex_t w = origin_[twin_[d]];
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
        d = sigma_[d];
      } while (d != vertex_dart_[v]);
    }
    if (reached != vertex_dart_.size()) throw map_error(map_errc::disconnected, "map is not connected");
    const long euler = static_cast<long>(num_vertices()) - num_edges() + num_faces();
    if (euler != 2) throw map_error(map_errc::non_planar, "Euler characteristic " + std::to_string(euler));
  }

  std::vector<dart_t> twin_, sigma_, sigma_inv_;
  std::vector<vertex_t> origin_;
  std::vector<face_t> face_;
  std::vector<dart_t> vertex_dart_, face_dart_;
  std::vector<std::int32_t> degree_, face_degree_;
  dart_t root_ = 0;
  std::optional<face_t> marked_;
};

inline bool has_self_loop(const CombMap& m) {
  for (dart_t d = 0; d < m.num_darts(); ++d)
    if (m.origin(d) == m.target(d)) return true;
  return false;
}

inline bool has_multi_edge(const CombMap& m) {
  std::vector<vertex_t> stamp(m.num_vertices(), -1);
  for (vertex_t v = 0; v < m.num_vertices(); ++v) {
    dart_t d = m.vertex_dart(v);
    do {
      const vertex_t w = m.target(d);
      if (w != v) {
        if (stamp[w] == v) return true;
        stamp[w] = v;
      }
      d = m.sigma(d);
    } while (d != m.vertex_dart(v));
  }
  return false;
}

struct BoundaryWalk {
  std::vector<vertex_t> path;  // rho_1, rho_2, ..., rho_p, rho_1
  bool simple = true;
};

inline BoundaryWalk boundary_walk(const CombMap& m) {
  const auto orbit = m.face_darts(m.root_face());
  std::vector<dart_t> from_root;
  const auto it = std::find(orbit.begin(), orbit.end(), m.root());
  from_root.insert(from_root.end(), it, orbit.end());
  from_root.insert(from_root.end(), orbit.begin(), it);
  BoundaryWalk w;
  const std::size_t p = from_root.size();
  w.path.push_back(m.origin(from_root[0]));
  for (std::size_t k = 1; k < p; ++k) w.path.push_back(m.origin(from_root[p - k]));
  w.path.push_back(m.origin(from_root[0]));
  std::vector<vertex_t> sorted(w.path.begin(), w.path.end() - 1);
  std::sort(sorted.begin(), sorted.end());
  w.simple = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  return w;
}

inline tri_type classify(const CombMap& m, std::int32_t p) {
  const face_t rf = m.root_face();
  if (m.face_degree(rf) != p) return tri_type::invalid;
  if (!boundary_walk(m).simple) return tri_type::invalid;
  if (p == 2 && m.num_vertices() == 2 && m.num_edges() == 2) return tri_type::II;
  for (face_t f = 0; f < m.num_faces(); ++f)
    if (f != rf && m.face_degree(f) != 3) return tri_type::invalid;
  if (has_self_loop(m)) return tri_type::I;
  if (has_multi_edge(m)) return tri_type::II;
  return tri_type::III;
}

// Breadth-first distances from src; -1 marks unreachable vertices.
// Vertices with blocked[v] != 0 are reached but not expanded.
inline std::vector<std::int32_t> bfs_distances(const CombMap& m, vertex_t src,
                                               const std::vector<char>* blocked = nullptr) {
  std::vector<std::int32_t> dist(m.num_vertices(), -1);
  std::vector<vertex_t> frontier{src}, next;
  dist[src] = 0;
  std::int32_t level = 0;
  while (!frontier.empty()) {
    ++level;
    next.clear();
    for (vertex_t v : frontier) {
      if (blocked && (*blocked)[v] && v != src) continue;
      dart_t d = m.vertex_dart(v);
      do {
        const vertex_t w = m.target(d);
        if (dist[w] == -1) {
          dist[w] = level;
          next.push_back(w);
        }
        d = m.sigma(d);
      } while (d != m.vertex_dart(v));
    }
    frontier.swap(next);
  }
  return dist;
}

inline std::int32_t graph_distance(const CombMap& m, vertex_t u, vertex_t v) {
  if (u < 0 || u >= m.num_vertices() || v < 0 || v >= m.num_vertices())
    throw map_error(map_errc::bad_index, "vertex out of range");
  return bfs_distances(m, u)[v];
}

// Shortest path from an inner vertex u that touches the root face at most at v.
inline std::optional<std::int32_t> inner_distance(const CombMap& m, vertex_t u, vertex_t v) {
  const auto boundary = m.boundary_mask();
  if (boundary[u]) throw map_error(map_errc::not_inner_vertex, "inner_distance from a boundary vertex");
  const auto dist = bfs_distances(m, u, &boundary);
  if (dist[v] < 0) return std::nullopt;
  return dist[v];
}

// Rooted-map invariant: darts renumbered by a traversal from the root.
inline std::vector<std::int32_t> canonical_key(const CombMap& m) {
  const dart_t n = m.num_darts();
  std::vector<dart_t> id(n, -1), order;
  order.reserve(n);
  auto claim_vertex = [&](dart_t start) {
    dart_t d = start;
    do {
      id[d] = static_cast<dart_t>(order.size());
      order.push_back(d);
      d = m.sigma(d);
    } while (d != start);
  };
  claim_vertex(m.root());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const dart_t t = m.twin(order[k]);
    if (id[t] == -1) claim_vertex(t);
  }
  std::vector<std::int32_t> key;
  key.reserve(2 * n + 2);
  key.push_back(n);
  std::int32_t marked = -1;
  if (m.marked_face()) {
    marked = n;
    for (dart_t d : m.face_darts(*m.marked_face())) marked = std::min(marked, id[d]);
  }
  key.push_back(marked);
  for (dart_t d : order) {
    key.push_back(id[m.sigma(d)]);
    key.push_back(id[m.twin(d)]);
  }
  return key;
}

}  // namespace polydisk
