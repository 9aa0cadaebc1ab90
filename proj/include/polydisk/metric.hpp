#pragma once
// Modified leftmost paths, label bounds on distances and the excursion audit.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polydisk/blossom.hpp"
#include "polydisk/map.hpp"
#include "polydisk/orient.hpp"

namespace polydisk {

enum class metric_errc { no_such_edge, not_self_avoiding, not_inner_path, path_too_long };

class metric_error : public std::runtime_error {
 public:
  metric_error(metric_errc c, const std::string& what) : std::runtime_error(what), code_(c) {}
  metric_errc code() const noexcept { return code_; }

 private:
  metric_errc code_;
};

// F-corner on the left of a dart that is a tree edge or lies in the orientation.
inline std::int32_t left_corner(const Closure& c, dart_t d) { return c.forest.dart_corner[d]; }

inline bool lmp_usable(const Closure& c, dart_t d) { return c.cls[d] == edge_class::tree || c.orientation.out[d]; }

// Next dart after arriving through `in`: the first usable dart clockwise after twin(in).
inline dart_t lmp_next(const Closure& c, dart_t in) {
  const dart_t back = c.map.twin(in);
  dart_t d = back;
  do {
    d = c.map.sigma(d);
    if (lmp_usable(c, d)) return d;
  } while (d != back);
  throw metric_error(metric_errc::no_such_edge, "no usable dart around a vertex");
}

struct LmpPath {
  std::vector<vertex_t> vertices;  // v_0 .. v_l, v_l = v*
  std::vector<dart_t> darts;       // v_i v_{i+1} for i < l
  std::int32_t delta = 0;
  std::int32_t formula = 0;        // lambda(v_0 v_1) - lambda(k_min) + 3 delta
  std::int32_t first_visit = -1;   // first i with v_i = v*
  std::int32_t second_type_steps = 0;
  bool successor_identity = true;  // s(corner of step i-1) = corner of step i, xi° read as xi
  std::int32_t length() const { return static_cast<std::int32_t>(darts.size()); }
};

// The walk stops once the corner sequence reaches k_min: on the left of the
// start dart, or as the successor of the last corner (k_min may be xi°).
inline LmpPath modified_lmp(const Closure& c, dart_t e) {
  const CombMap& m = c.map;
  if (e < 0 || e >= m.num_darts() || !c.orientation.out[e])
    throw metric_error(metric_errc::no_such_edge, "start dart is not in the orientation");
  const auto& L = c.forest;
  const std::int32_t k_min = c.vstar.k_min;
  LmpPath P;
  P.delta = left_corner(c, e) <= k_min ? 0 : 1;
  P.formula = c.lam_left[e] - c.vstar.l_min + 3 * P.delta;
  P.vertices.push_back(m.origin(e));
  if (P.vertices.back() == c.vstar.v_star) P.first_visit = 0;
  const std::int64_t cap = 2 * static_cast<std::int64_t>(L.n_corners) + 8;
  std::int32_t corner = left_corner(c, e);
  dart_t d = e;
  while (corner != k_min) {
    if (static_cast<std::int64_t>(P.darts.size()) > cap)
      throw metric_error(metric_errc::path_too_long, "modified leftmost path does not reach v*");
    P.darts.push_back(d);
    P.vertices.push_back(m.target(d));
    if (P.first_visit < 0 && P.vertices.back() == c.vstar.v_star) P.first_visit = P.length();
    const Successor& s = c.succ[corner];
    if (s.type == successor_type::second) ++P.second_type_steps;
    if (s.corner == k_min) break;
    d = lmp_next(c, d);
    corner = left_corner(c, d);
    if ((s.corner == L.n_corners ? 0 : s.corner) != corner) P.successor_identity = false;
  }
  return P;
}

// X(u) - l_min + 3, with l_min the label of the first minimal corner (xi° included).
inline std::int32_t bound_dist_to_vstar(const Closure& c, vertex_t u) { return c.X(u) - c.vstar.l_min + 3; }

// Range minima of corner labels 0..N-1 and, per vertex, an outgoing dart whose
// left label equals X (the one with the smallest corner index).
class TwoPointBound {
 public:
  explicit TwoPointBound(const Closure& c) : c_(c) {
    const auto& L = c.forest;
    const std::int32_t n = L.n_corners;
    std::int32_t levels = 1;
    while ((1 << levels) <= n) ++levels;
    table_.assign(levels, std::vector<std::int32_t>(n));
    for (std::int32_t k = 0; k < n; ++k) table_[0][k] = L.label[k];
    for (std::int32_t j = 1; j < levels; ++j)
      for (std::int32_t k = 0; k + (1 << j) <= n; ++k)
        table_[j][k] = std::min(table_[j - 1][k], table_[j - 1][k + (1 << (j - 1))]);
    const CombMap& m = c.map;
    start_.assign(m.num_vertices(), -1);
    for (dart_t d = 0; d < m.num_darts(); ++d) {
      if (!c.orientation.out[d]) continue;
      const vertex_t u = m.origin(d);
      if (c.lam_left[d] != c.X(u)) continue;
      if (start_[u] < 0 || left_corner(c, d) < left_corner(c, start_[u])) start_[u] = d;
    }
  }

  // uu' used for u, or -1 when no outgoing dart carries X(u).
  dart_t start_dart(vertex_t u) const { return start_[u]; }

  std::int32_t range_min(std::int32_t a, std::int32_t b) const {
    const std::int32_t n = c_.forest.n_corners;
    if (a <= b) return rmq(a, b);
    return std::min(rmq(a, n - 1), rmq(0, b));
  }

  std::optional<std::int32_t> operator()(vertex_t u, vertex_t v) const {
    const dart_t du = start_[u], dv = start_[v];
    if (du < 0 || dv < 0) return std::nullopt;
    const std::int32_t a = left_corner(c_, du), b = left_corner(c_, dv);
    const std::int32_t x = std::max(range_min(a, b), range_min(b, a));
    return c_.X(u) + c_.X(v) - 2 * x + 6;
  }

 private:
  std::int32_t rmq(std::int32_t a, std::int32_t b) const {
    std::int32_t j = 0;
    while ((2 << j) <= b - a + 1) ++j;
    return std::min(table_[j][a], table_[j][b - (1 << j) + 1]);
  }
  const Closure& c_;
  std::vector<std::vector<std::int32_t>> table_;
  std::vector<dart_t> start_;
};

inline std::optional<std::int32_t> bound_two_point(const Closure& c, vertex_t u, vertex_t v) {
  return TwoPointBound(c)(u, v);
}

// ---- excursions of a path away from a modified leftmost path ---------------

struct Excursion {
  std::int32_t i = 0, j = 0;  // P indices of the extremities, i < j
  std::int32_t length = 0;
  std::int32_t type = 0;      // 1..8
  bool left_at_i = false, left_at_j = false, separating = false;
  std::int32_t lower_bound() const {
    static constexpr std::array<std::int32_t, 9> shift{0, 0, 0, 3, -3, 6, -6, -3, 3};
    return j - i + shift[type];
  }
  bool holds() const { return length >= lower_bound(); }
};

struct ExcursionAudit {
  std::array<std::int32_t, 9> n{};  // n[1..8]
  std::vector<Excursion> excursions;
  std::int32_t p_length = 0, q_length = 0;
  bool lengths_ok = true;  // every excursion obeys its lower bound
  std::int32_t sigma() const { return n[4] + n[7]; }
  bool shortcut_claim() const { return q_length >= p_length - 15 * sigma() - 12; }
};

inline dart_t dart_between(const CombMap& m, vertex_t u, vertex_t v) {
  const dart_t start = m.vertex_dart(u);
  dart_t d = start;
  do {
    if (m.target(d) == v) return d;
    d = m.sigma(d);
  } while (d != start);
  return -1;
}

// Q: inner self-avoiding path u = v_0, v_1, ..., v* starting with e = v_0 v_1.
inline ExcursionAudit excursion_audit(const Closure& c, dart_t e, const std::vector<vertex_t>& Q) {
  const CombMap& m = c.map;
  const LmpPath P = modified_lmp(c, e);
  const auto boundary = m.boundary_mask();
  for (vertex_t v : P.vertices)
    if (boundary[v]) throw metric_error(metric_errc::not_inner_path, "modified leftmost path meets the boundary");
  if (Q.size() < 2 || Q[0] != m.origin(e) || Q[1] != m.target(e) || Q.back() != c.vstar.v_star)
    throw metric_error(metric_errc::not_inner_path, "Q must start with e and end at v*");
  std::vector<char> used(m.num_vertices(), 0);
  std::vector<dart_t> qd;
  for (std::size_t k = 0; k < Q.size(); ++k) {
    if (boundary[Q[k]]) throw metric_error(metric_errc::not_inner_path, "Q meets the boundary");
    if (used[Q[k]]) throw metric_error(metric_errc::not_self_avoiding, "Q repeats a vertex");
    used[Q[k]] = 1;
    if (k + 1 < Q.size()) {
      const dart_t d = dart_between(m, Q[k], Q[k + 1]);
      if (d < 0) throw metric_error(metric_errc::not_inner_path, "Q uses a non-edge");
      qd.push_back(d);
    }
  }
  std::vector<std::int32_t> pos(m.num_vertices(), -1);
  for (std::size_t k = 0; k < P.vertices.size(); ++k) {
    if (pos[P.vertices[k]] >= 0) throw metric_error(metric_errc::not_self_avoiding, "P repeats a vertex");
    pos[P.vertices[k]] = static_cast<std::int32_t>(k);
  }
  // Outgoing path dart at every P vertex, one extra step past v*.
  std::vector<dart_t> out = P.darts;
  out.push_back(P.darts.empty() ? e : lmp_next(c, P.darts.back()));

  // r leaves v_k strictly between twin(incoming) and the outgoing path dart, clockwise.
  auto on_left = [&](std::int32_t k, dart_t r) {
    if (k == 0) return false;
    const dart_t back = m.twin(P.darts[k - 1]);
    for (dart_t d = m.sigma(back); d != out[k]; d = m.sigma(d))
      if (d == r) return true;
    return false;
  };
  auto separating = [&](std::int32_t i, std::int32_t j, std::size_t s, std::size_t t) {
    std::vector<char> cut(m.num_darts(), 0);
    for (std::int32_t k = i; k < j; ++k) cut[P.darts[k]] = cut[m.twin(P.darts[k])] = 1;
    for (std::size_t k = s; k < t; ++k) cut[qd[k]] = cut[m.twin(qd[k])] = 1;
    const auto side = faces_on_side(m, m.root_face(), cut);
    return !m.marked_face() || !side[*m.marked_face()];
  };

  ExcursionAudit A;
  A.p_length = P.length();
  A.q_length = static_cast<std::int32_t>(qd.size());
  std::size_t s = 0;
  while (s < qd.size()) {
    const std::int32_t a = pos[Q[s]];
    const std::int32_t b = pos[Q[s + 1]];
    if (b >= 0 && std::abs(a - b) == 1 && (P.darts[std::min(a, b)] == qd[s] || P.darts[std::min(a, b)] == m.twin(qd[s]))) {
      ++s;
      continue;
    }
    std::size_t t = s + 1;
    while (pos[Q[t]] < 0) ++t;
    const std::int32_t bb = pos[Q[t]];
    Excursion x;
    x.i = std::min(a, bb);
    x.j = std::max(a, bb);
    x.length = static_cast<std::int32_t>(t - s);
    const dart_t first = qd[s], last = m.twin(qd[t - 1]);
    const dart_t ri = a < bb ? first : last, rj = a < bb ? last : first;
    x.left_at_i = on_left(x.i, ri);
    x.left_at_j = on_left(x.j, rj);
    x.separating = separating(x.i, x.j, s, t);
    const std::int32_t side = x.left_at_i ? (x.left_at_j ? 1 : 3) : (x.left_at_j ? 4 : 2);
    x.type = side + (x.separating ? 4 : 0);
    ++A.n[x.type];
    if (!x.holds()) A.lengths_ok = false;
    A.excursions.push_back(x);
    s = t;
  }
  return A;
}

// u, v, then a shortest path from v to v* among inner vertices other than u.
inline std::optional<std::vector<vertex_t>> inner_geodesic_after(const Closure& c, dart_t e) {
  const CombMap& m = c.map;
  const auto boundary = m.boundary_mask();
  const vertex_t u = m.origin(e), v = m.target(e), t = c.vstar.v_star;
  if (boundary[u] || boundary[v] || boundary[t]) return std::nullopt;
  std::vector<vertex_t> parent(m.num_vertices(), -1);
  std::vector<char> seen(m.num_vertices(), 0);
  seen[u] = seen[v] = 1;
  std::vector<vertex_t> queue{v};
  for (std::size_t k = 0; k < queue.size() && !seen[t]; ++k) {
    const vertex_t x = queue[k];
    std::vector<vertex_t> nb;
    const dart_t start = m.vertex_dart(x);
    dart_t d = start;
    do {
      nb.push_back(m.target(d));
      d = m.sigma(d);
    } while (d != start);
    std::sort(nb.begin(), nb.end());
    for (vertex_t y : nb) {
      if (seen[y] || boundary[y]) continue;
      seen[y] = 1;
      parent[y] = x;
      queue.push_back(y);
    }
  }
  if (t == v) return std::vector<vertex_t>{u, v};
  if (!seen[t] || t == u) return std::nullopt;
  std::vector<vertex_t> path;
  for (vertex_t x = t; x != v; x = parent[x]) path.push_back(x);
  path.push_back(v);
  path.push_back(u);
  std::reverse(path.begin(), path.end());
  return path;
}

// d~(u, v*): shortest path from the inner vertex u avoiding the root face except at v*.
inline std::optional<std::int32_t> inner_distance_to_vstar(const Closure& c, vertex_t u) {
  return inner_distance(c.map, u, c.vstar.v_star);
}

}  // namespace polydisk
