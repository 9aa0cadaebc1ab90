#pragma once
// Simple-core construction and decomposition: type-II maps as type-III cores
// with 2-gon attachments, the recursive 2-gon sampler and the 2-connected core.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polydisk/map.hpp"
#include "polydisk/rng.hpp"
#include "polydisk/sampler.hpp"

namespace polydisk {

enum class core_errc { not_type_two, not_two_gon, bad_attachments };

class core_error : public std::runtime_error {
 public:
  core_error(core_errc c, const std::string& what) : std::runtime_error(what), code_(c) {}
  core_errc code() const noexcept { return code_; }

 private:
  core_errc code_;
};

// rho_1 = 0, rho_2 = 1, root dart 0; dart 2 is the other boundary edge.
inline CombMap trivial_2gon() { return CombMap::from_rotations({{0, 2}, {3, 1}}, {1, 0, 3, 2}, 0); }

inline bool is_trivial_2gon(const CombMap& a) { return a.num_vertices() == 2 && a.num_edges() == 2; }

// Darts of the traversal from the root, each edge oriented away from the
// endpoint discovered first. Vertices are scanned in discovery order, each
// from the dart that discovered it (the root dart for the root vertex).
inline std::vector<dart_t> bfs_edge_order(const CombMap& s) {
  std::vector<std::int32_t> index(s.num_vertices(), -1);
  std::vector<dart_t> entry;
  std::vector<dart_t> out;
  out.reserve(s.num_edges());
  index[s.root_vertex()] = 0;
  entry.push_back(s.root());
  for (std::size_t k = 0; k < entry.size(); ++k) {
    const dart_t start = entry[k];
    const vertex_t u = s.origin(start);
    dart_t d = start;
    do {
      const vertex_t v = s.target(d);
      if (index[v] == -1) {
        index[v] = static_cast<std::int32_t>(entry.size());
        entry.push_back(s.twin(d));
      }
      if (index[v] > index[u]) out.push_back(d);
      d = s.sigma(d);
    } while (d != start);
  }
  return out;
}

// Replace the edge of every edges[k] by attachments[k]: at the origin t of
// d = edges[k] the 2-gon rotation at rho_1 from its root y clockwise to
// x = sigma^-1(y), at the target the rotation at rho_2 from twin(x) to twin(y).
// Vertex ids of s are kept; root darts of nontrivial attachments follow the root face.
inline CombMap glue_attachments(const CombMap& s, const std::vector<dart_t>& edges,
                                const std::vector<CombMap>& attachments) {
  if (edges.size() != attachments.size() || static_cast<std::int32_t>(edges.size()) != s.num_edges())
    throw core_error(core_errc::bad_attachments, "one attachment per core edge is required");
  std::vector<std::int32_t> slot(s.num_darts(), -1);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    slot[edges[k]] = static_cast<std::int32_t>(k);
    slot[s.twin(edges[k])] = static_cast<std::int32_t>(k);
  }
  std::vector<dart_t> sid(s.num_darts(), -1);
  std::vector<dart_t> base(edges.size(), -1);
  dart_t next = 0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (is_trivial_2gon(attachments[k])) {
      sid[edges[k]] = next++;
      sid[s.twin(edges[k])] = next++;
    } else {
      base[k] = next;
      next += attachments[k].num_darts();
    }
  }
  std::vector<dart_t> twins(next);
  std::vector<std::vector<dart_t>> rot(s.num_vertices());
  for (dart_t d = 0; d < s.num_darts(); ++d)
    if (sid[d] >= 0) twins[sid[d]] = sid[s.twin(d)];
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (base[k] < 0) continue;
    const CombMap& a = attachments[k];
    for (dart_t d = 0; d < a.num_darts(); ++d) twins[base[k] + d] = base[k] + a.twin(d);
  }
  auto arc = [](const CombMap& a, dart_t from, dart_t to, dart_t off, std::vector<dart_t>& out) {
    dart_t d = from;
    for (;;) {
      out.push_back(off + d);
      if (d == to) break;
      d = a.sigma(d);
    }
  };
  for (vertex_t t = 0; t < s.num_vertices(); ++t) {
    for (dart_t e : s.rotation(t)) {
      const std::int32_t k = slot[e];
      if (base[k] < 0) {
        rot[t].push_back(sid[e]);
        continue;
      }
      const CombMap& a = attachments[k];
      const dart_t y = a.root(), x = a.sigma_inv(y);
      if (e == edges[k])
        arc(a, y, x, base[k], rot[t]);
      else
        arc(a, a.twin(x), a.twin(y), base[k], rot[t]);
    }
  }
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (base[k] < 0) continue;
    const CombMap& a = attachments[k];
    const vertex_t r1 = a.root_vertex(), r2 = a.target(a.root());
    for (vertex_t v = 0; v < a.num_vertices(); ++v) {
      if (v == r1 || v == r2) continue;
      std::vector<dart_t> r;
      for (dart_t d : a.rotation(v)) r.push_back(base[k] + d);
      rot.push_back(std::move(r));
    }
  }
  const dart_t r = s.root();
  const std::int32_t k = slot[r];
  dart_t root;
  if (base[k] < 0) {
    root = sid[r];
  } else {
    const CombMap& a = attachments[k];
    root = base[k] + (r == edges[k] ? a.root() : a.twin(a.sigma_inv(a.root())));
  }
  return CombMap::from_rotations(rot, twins, root);
}

// Open the root edge of a sphere triangulation into a 2-gon whose root face sits
// on the left of the old root dart.
inline CombMap cut_root(const CombMap& m) {
  const dart_t r = m.root(), n = m.num_darts();
  const dart_t x = n, tx = n + 1;
  std::vector<dart_t> twins = m.twins();
  twins.push_back(tx);
  twins.push_back(x);
  std::vector<std::vector<dart_t>> rot(m.num_vertices());
  for (vertex_t v = 0; v < m.num_vertices(); ++v) {
    for (dart_t d : m.rotation(v)) {
      if (d == r) rot[v].push_back(x);
      rot[v].push_back(d);
      if (d == m.twin(r)) rot[v].push_back(tx);
    }
  }
  return CombMap::from_rotations(rot, twins, r);
}

// Inverse of cut_root: merge the two boundary edges of a nontrivial 2-gon.
inline CombMap merge_2gon(const CombMap& a) {
  if (a.perimeter() != 2 || is_trivial_2gon(a)) throw core_error(core_errc::not_two_gon, "expected a nontrivial 2-gon");
  const dart_t y = a.root(), x = a.sigma_inv(y), tx = a.twin(x);
  std::vector<dart_t> id(a.num_darts(), -1);
  dart_t next = 0;
  for (dart_t d = 0; d < a.num_darts(); ++d)
    if (d != x && d != tx) id[d] = next++;
  std::vector<dart_t> twins(next);
  for (dart_t d = 0; d < a.num_darts(); ++d)
    if (id[d] >= 0) twins[id[d]] = id[a.twin(d)];
  std::vector<std::vector<dart_t>> rot(a.num_vertices());
  for (vertex_t v = 0; v < a.num_vertices(); ++v)
    for (dart_t d : a.rotation(v))
      if (id[d] >= 0) rot[v].push_back(id[d]);
  return CombMap::from_rotations(rot, twins, id[y]);
}

struct CoreDecomposition {
  CombMap core;
  std::vector<dart_t> edges;          // bfs_edge_order(core)
  std::vector<CombMap> attachments;   // one 2-gon per entry of edges
};

namespace detail {

// For every dart z, the parallel dart met first when turning counterclockwise
// from z around its origin (z itself for a simple edge).
inline std::vector<dart_t> parallel_predecessor(const CombMap& m) {
  std::vector<dart_t> w(m.num_darts());
  std::vector<std::pair<vertex_t, std::int32_t>> tmp;
  for (vertex_t u = 0; u < m.num_vertices(); ++u) {
    const auto r = m.rotation(u);
    tmp.clear();
    for (std::size_t i = 0; i < r.size(); ++i) tmp.emplace_back(m.target(r[i]), static_cast<std::int32_t>(i));
    std::sort(tmp.begin(), tmp.end());
    for (std::size_t a = 0; a < tmp.size();) {
      std::size_t b = a;
      while (b < tmp.size() && tmp[b].first == tmp[a].first) ++b;
      for (std::size_t i = a; i < b; ++i) {
        const std::size_t prev = i == a ? b - 1 : i - 1;
        w[r[tmp[i].second]] = r[tmp[prev].second];
      }
      a = b;
    }
  }
  return w;
}

// The 2-gon between y and x = pred(y): everything met turning clockwise from y to x.
inline CombMap extract_2gon(const CombMap& m, dart_t y, dart_t x) {
  const dart_t ty = m.twin(y), tx = m.twin(x);
  std::vector<char> inside(m.num_faces(), 0);
  std::vector<face_t> queue{m.face(ty)};
  inside[m.face(ty)] = 1;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    for (dart_t q : m.face_darts(queue[k])) {
      if (q == ty || q == x) continue;
      const face_t g = m.face(m.twin(q));
      if (!inside[g]) {
        inside[g] = 1;
        queue.push_back(g);
      }
    }
  }
  std::vector<dart_t> id(m.num_darts(), -1);
  dart_t next = 0;
  id[y] = next++;
  id[tx] = next++;
  std::vector<vertex_t> vid(m.num_vertices(), -1);
  const vertex_t u = m.origin(y), v = m.target(y);
  vid[u] = 0;
  vid[v] = 1;
  vertex_t nv = 2;
  for (face_t f : queue) {
    for (dart_t d : m.face_darts(f)) {
      id[d] = next++;
      if (vid[m.origin(d)] == -1) vid[m.origin(d)] = nv++;
    }
  }
  std::vector<dart_t> twins(next);
  for (dart_t d = 0; d < m.num_darts(); ++d)
    if (id[d] >= 0) twins[id[d]] = id[m.twin(d)];
  std::vector<std::vector<dart_t>> rot(nv);
  for (dart_t d = y;; d = m.sigma(d)) {
    rot[0].push_back(id[d]);
    if (d == x) break;
  }
  for (dart_t d = tx;; d = m.sigma(d)) {
    rot[1].push_back(id[d]);
    if (d == ty) break;
  }
  for (vertex_t a = 0; a < m.num_vertices(); ++a)
    if (vid[a] >= 2)
      for (dart_t d : m.rotation(a)) rot[vid[a]].push_back(id[d]);
  return CombMap::from_rotations(rot, twins, id[y]);
}

}  // namespace detail

// Split a loopless triangulation (p-gon, or sphere rooted at a dart) into its
// simple core and the maximal 2-gons hanging on the core edges.
inline CoreDecomposition simple_core(const CombMap& m) {
  if (has_self_loop(m)) throw core_error(core_errc::not_type_two, "simple_core needs a loopless map");
  const auto w = detail::parallel_predecessor(m);
  std::vector<char> in_core(m.num_faces(), 0);
  std::vector<face_t> queue{m.root_face()};
  in_core[m.root_face()] = 1;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    for (dart_t z : m.face_darts(queue[k])) {
      const face_t g = m.face(m.twin(w[z]));
      if (!in_core[g]) {
        in_core[g] = 1;
        queue.push_back(g);
      }
    }
  }
  std::vector<dart_t> sid(m.num_darts(), -1), of_sid;
  for (dart_t z = 0; z < m.num_darts(); ++z)
    if (in_core[m.face(z)]) {
      sid[z] = static_cast<dart_t>(of_sid.size());
      of_sid.push_back(z);
    }
  const auto n = static_cast<dart_t>(of_sid.size());
  std::vector<dart_t> twins(n), sigma(n);
  std::vector<vertex_t> origin(n);
  std::vector<vertex_t> vid(m.num_vertices(), -1);
  std::vector<vertex_t> vorder;
  for (dart_t s = 0; s < n; ++s) {
    const dart_t z = of_sid[s];
    twins[s] = sid[m.twin(w[z])];
    sigma[s] = sid[m.sigma(w[z])];
    if (vid[m.origin(z)] == -1) vorder.push_back(m.origin(z)), vid[m.origin(z)] = 0;
  }
  std::sort(vorder.begin(), vorder.end());
  for (std::size_t i = 0; i < vorder.size(); ++i) vid[vorder[i]] = static_cast<vertex_t>(i);
  std::vector<dart_t> first(vorder.size(), -1);
  for (dart_t s = 0; s < n; ++s) {
    origin[s] = vid[m.origin(of_sid[s])];
    if (first[origin[s]] == -1) first[origin[s]] = s;
  }
  CoreDecomposition out;
  out.core = CombMap::from_permutations(std::move(twins), std::move(sigma), std::move(origin), std::move(first),
                                        sid[m.root()]);
  out.edges = bfs_edge_order(out.core);
  out.attachments.reserve(out.edges.size());
  for (dart_t s : out.edges) {
    const dart_t y = of_sid[s];
    if (w[y] == y)
      out.attachments.push_back(trivial_2gon());
    else
      out.attachments.push_back(detail::extract_2gon(m, y, w[y]));
  }
  return out;
}

// A nontrivial 2-gon as the cut of its merged sphere; the core is a triangle-rooted simple map.
inline CoreDecomposition two_gon_core(const CombMap& a) { return simple_core(merge_2gon(a)); }

inline constexpr double two_gon_trivial_probability = 8.0 / 9.0;

// Boltzmann 2-gon of type II. Trivial with probability 8/9, otherwise a
// Bol_III(3) core with independent 2-gons on all its edges, cut open at the root.
inline CombMap sample_bol2_2gon(Rng& rng, std::int32_t max_depth = 10000, std::int32_t depth = 0) {
  if (rng.below(9) != 0) return trivial_2gon();
  if (depth >= max_depth) throw sampler_error(sampler_errc::recursion_budget, "2-gon recursion too deep");
  CombMap s = sample_bol3(3, rng).closure.map;
  s.set_marked_face(std::nullopt);
  const auto edges = bfs_edge_order(s);
  std::vector<CombMap> atts;
  atts.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) atts.push_back(sample_bol2_2gon(rng, max_depth, depth + 1));
  return cut_root(glue_attachments(s, edges, atts));
}

struct Bol2Sample {
  CombMap map;
  CoreDecomposition parts;
};

// Bol_II(p): a Bol_III(p) core with independent 2-gons glued in breadth-first edge order.
inline Bol2Sample sample_bol2(std::int32_t p, Rng& rng) {
  if (p < 3) throw sampler_error(sampler_errc::bad_perimeter, "sample_bol2 needs p >= 3");
  CombMap s = sample_bol3(p, rng).closure.map;
  s.set_marked_face(std::nullopt);
  auto edges = bfs_edge_order(s);
  std::vector<CombMap> atts;
  atts.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) atts.push_back(sample_bol2_2gon(rng));
  CombMap m = glue_attachments(s, edges, atts);
  return {std::move(m), {std::move(s), std::move(edges), std::move(atts)}};
}

// ---- 2-connected core of a type-I map --------------------------------------

// Remove the region enclosed by every maximal self-loop and merge the two edges
// that the loop region separated. Loops are found from the root face.
inline CombMap two_connected_core(const CombMap& m) {
  if (m.perimeter() < 2) throw core_error(core_errc::not_type_two, "a 1-gon has no loopless core");
  CombMap cur = m;
  for (;;) {
    const std::int32_t p = cur.perimeter();
    dart_t loop = -1;
    // Faces reachable from the root face without crossing a loop.
    std::vector<char> seen(cur.num_faces(), 0);
    std::vector<face_t> queue{cur.root_face()};
    seen[cur.root_face()] = 1;
    for (std::size_t k = 0; k < queue.size() && loop < 0; ++k) {
      for (dart_t d : cur.face_darts(queue[k])) {
        if (cur.origin(d) == cur.target(d)) {
          loop = d;
          break;
        }
        const face_t g = cur.face(cur.twin(d));
        if (!seen[g]) {
          seen[g] = 1;
          queue.push_back(g);
        }
      }
    }
    if (loop < 0) return cur;
    // The outer face of the loop is its left face (loop, a, b); a and b are merged.
    const dart_t tl = cur.twin(loop);
    const vertex_t u = cur.origin(loop);
    std::vector<char> inside(cur.num_faces(), 0);
    std::vector<face_t> q2{cur.face(tl)};
    inside[cur.face(tl)] = 1;
    for (std::size_t k = 0; k < q2.size(); ++k)
      for (dart_t d : cur.face_darts(q2[k])) {
        if (d == tl) continue;
        const face_t g = cur.face(cur.twin(d));
        if (!inside[g]) {
          inside[g] = 1;
          q2.push_back(g);
        }
      }
    const dart_t a = cur.phi(loop), b = cur.phi(a);
    if (cur.phi(b) != loop) throw core_error(core_errc::not_type_two, "loop not bounded by a triangle");
    std::vector<char> drop(cur.num_darts(), 0);
    for (face_t f : q2)
      for (dart_t d : cur.face_darts(f)) drop[d] = 1;
    drop[loop] = 1;
    drop[tl] = 1;
    const dart_t tb = cur.twin(b);
    std::vector<char> vdrop(cur.num_vertices(), 0);
    for (face_t f : q2)
      for (dart_t d : cur.face_darts(f))
        if (cur.origin(d) != u) vdrop[cur.origin(d)] = 1;
    std::vector<dart_t> id(cur.num_darts(), -1);
    dart_t next = 0;
    for (dart_t d = 0; d < cur.num_darts(); ++d)
      if (!drop[d] && d != b && d != tb) id[d] = next++;
    std::vector<dart_t> twins(next);
    for (dart_t d = 0; d < cur.num_darts(); ++d)
      if (id[d] >= 0) twins[id[d]] = id[cur.twin(d)];
    std::vector<std::vector<dart_t>> rot;
    for (vertex_t v = 0; v < cur.num_vertices(); ++v) {
      if (vdrop[v]) continue;
      std::vector<dart_t> r;
      for (dart_t d : cur.rotation(v))
        if (id[d] >= 0) r.push_back(id[d]);
      rot.push_back(std::move(r));
    }
    const dart_t root = cur.root() == tb ? a : cur.root();
    CombMap nxt = CombMap::from_rotations(rot, twins, id[root]);
    if (nxt.perimeter() != p) throw core_error(core_errc::not_type_two, "perimeter changed while removing a loop");
    cur = std::move(nxt);
  }
}

// ---- size-only samplers ----------------------------------------------------

// Vertex count of a Bol_III(3) sample, P[n = 3 + k] = T(k) rho^(3+k) / Z with
// T(k) = 6 (4k+1)! / (k! (3k+3)!) and Z = (32/27) rho^3. Probabilities are
// tabulated up to `table` and extended term by term beyond it.
class TriangleSizeLaw {
 public:
  explicit TriangleSizeLaw(std::int64_t table = 4096) {
    cdf_.reserve(table);
    double t = 27.0 / 32.0, acc = 0.0;
    for (std::int64_t k = 0; k < table; ++k) {
      acc += t;
      cdf_.push_back(acc);
      t *= ratio(k);
    }
    next_term_ = t;
  }

  std::int64_t operator()(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it != cdf_.end()) return 3 + (it - cdf_.begin());
    double acc = cdf_.back(), t = next_term_;
    for (std::int64_t k = static_cast<std::int64_t>(cdf_.size()); k < kScanLimit; ++k) {
      acc += t;
      if (u < acc) return 3 + k;
      t *= ratio(k);
    }
    // Only reachable through rounding in the far tail.
    for (;;) {
      const std::int64_t n = sample_bol3_size(3, rng);
      if (n - 3 >= kScanLimit) return n;
    }
  }

 private:
  static constexpr std::int64_t kScanLimit = std::int64_t{1} << 31;
  static double ratio(std::int64_t k) {
    const double a = static_cast<double>(k);
    return (4 * a + 5) * (4 * a + 4) * (4 * a + 3) * (4 * a + 2) /
           ((a + 1) * (3 * a + 6) * (3 * a + 5) * (3 * a + 4)) * (27.0 / 256.0);
  }
  std::vector<double> cdf_;
  double next_term_ = 0.0;
};

inline const TriangleSizeLaw& triangle_size_law() {
  static const TriangleSizeLaw law;
  return law;
}

// Sum of |V(M_i)| - 2 over `edges` independent Boltzmann 2-gons.
inline std::int64_t sample_2gon_excess(std::int64_t edges, Rng& rng) {
  const auto& law = triangle_size_law();
  std::int64_t total = 0;
  while (edges > 0) {
    std::binomial_distribution<std::int64_t> nontrivial(edges, 1.0 / 9.0);
    const std::int64_t j = nontrivial(rng);
    std::int64_t next = 0;
    for (std::int64_t i = 0; i < j; ++i) {
      const std::int64_t n = law(rng);
      total += n - 2;
      next += 3 * n - 6;
    }
    edges = next;
  }
  return total;
}

inline std::int64_t sample_2gon_size(Rng& rng) { return 2 + sample_2gon_excess(1, rng); }

struct Bol2Size {
  std::int32_t p = 0;
  std::int64_t core_vertices = 0;
  std::int64_t vertices = 0;
  std::int64_t core_edges() const { return 3 * core_vertices - p - 3; }
  std::int64_t edges() const { return 3 * vertices - p - 3; }
};

// |V| of Bol_II(p) and of its core; |E(M)| = |E(S)| + 3 (|V(M)| - |V(S)|).
inline Bol2Size sample_bol2_size(std::int32_t p, Rng& rng) {
  Bol2Size out;
  out.p = p;
  out.core_vertices = sample_bol3_size(p, rng);
  out.vertices = out.core_vertices + sample_2gon_excess(out.core_edges(), rng);
  return out;
}

}  // namespace polydisk
