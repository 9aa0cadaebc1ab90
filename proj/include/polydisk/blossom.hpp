#pragma once
// Blossoming forests, corner labels, successors and the closure.
//
// Blossoms are kept as stem positions: for each proper vertex a sorted list
// of child counts, a stem with position k sitting just before child k.
// Inside the closure the forest is expanded: every child edge (proper or
// stem) gets darts 2e (down) and 2e+1 (up), numbered in contour order, and
// boundary edge rho_i rho_{i+1} gets darts 2(E+i) (forward) and 2(E+i)+1.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "polydisk/forest.hpp"
#include "polydisk/map.hpp"
#include "polydisk/orient.hpp"

namespace polydisk {

enum class blossom_errc { invalid_blossoming, not_validly_labeled, closure_stuck };

class blossom_error : public std::runtime_error {
 public:
  blossom_error(blossom_errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  blossom_errc code() const noexcept { return code_; }

 private:
  blossom_errc code_;
};

struct BlossomForest {
  CyclicForest base;
  std::vector<std::int32_t> stem_offset;  // size() + 1 entries
  std::vector<std::int32_t> stem_pos;

  std::int32_t perimeter() const { return base.perimeter(); }
  std::int32_t num_stems(std::int32_t v) const { return stem_offset[v + 1] - stem_offset[v]; }
  std::int32_t stem(std::int32_t v, std::int32_t j) const { return stem_pos[stem_offset[v] + j]; }
  std::int32_t total_stems() const { return static_cast<std::int32_t>(stem_pos.size()); }

  static BlossomForest make(CyclicForest base, const std::vector<std::vector<std::int32_t>>& stems) {
    BlossomForest f;
    f.base = std::move(base);
    const std::int32_t n = f.base.size();
    if (static_cast<std::int32_t>(stems.size()) != n)
      throw blossom_error(blossom_errc::invalid_blossoming, "stem list size differs from vertex count");
    f.stem_offset.assign(n + 1, 0);
    for (std::int32_t v = 0; v < n; ++v) {
      f.stem_offset[v + 1] = f.stem_offset[v] + static_cast<std::int32_t>(stems[v].size());
      f.stem_pos.insert(f.stem_pos.end(), stems[v].begin(), stems[v].end());
    }
    return f;
  }

  bool operator==(const BlossomForest& o) const {
    if (base.nested() != o.base.nested()) return false;
    if (base.size() != o.base.size()) return false;
    const auto a = lex_order(base), b = lex_order(o.base);
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (num_stems(a[k]) != o.num_stems(b[k])) return false;
      for (std::int32_t j = 0; j < num_stems(a[k]); ++j)
        if (stem(a[k], j) != o.stem(b[k], j)) return false;
    }
    return true;
  }
};

inline void validate_blossoming(const BlossomForest& f) {
  const std::int32_t p = f.perimeter();
  if (p < 3) throw blossom_error(blossom_errc::invalid_blossoming, "perimeter below 3");
  std::int32_t boundary = 0;
  for (std::int32_t v = 0; v < f.base.size(); ++v) {
    const std::int32_t s = f.num_stems(v);
    for (std::int32_t j = 0; j < s; ++j) {
      const std::int32_t pos = f.stem(v, j);
      if (pos < 0 || pos > f.base.num_children(v) || (j && pos < f.stem(v, j - 1)))
        throw blossom_error(blossom_errc::invalid_blossoming, "bad stem position at vertex " + std::to_string(v));
    }
    if (f.base.is_boundary(v))
      boundary += s;
    else if (s != 2)
      throw blossom_error(blossom_errc::invalid_blossoming,
                          "inner vertex " + std::to_string(v) + " carries " + std::to_string(s) + " stems");
  }
  if (boundary != p - 3)
    throw blossom_error(blossom_errc::invalid_blossoming,
                        "boundary carries " + std::to_string(boundary) + " stems instead of " + std::to_string(p - 3));
}

enum class dart_kind : std::uint8_t { tree_down, tree_up, stem_down, stem_up, boundary_fwd, boundary_rev };

// Contour data of the expanded forest; corner N stands for the duplicate xi°.
struct LabeledForest {
  std::int32_t p = 0;
  std::int32_t n_proper = 0;
  std::int32_t n_items = 0;
  std::int32_t n_corners = 0;  // N
  std::vector<dart_kind> kind;
  std::vector<vertex_t> dart_origin;  // proper origin; blossom darts carry the stem vertex
  std::vector<std::int32_t> dart_stem;  // stem index for stem darts, else -1
  std::vector<dart_t> sigma;  // rotation at proper vertices; stem_up darts point to themselves
  std::vector<dart_t> vertex_first;
  std::vector<dart_t> item_edge_of_vertex;  // edge index of the parent edge, -1 at the boundary
  std::vector<dart_t> corner_dart;  // N + 1 entries
  std::vector<vertex_t> corner_vertex;  // proper vertex, -1 for blossom corners
  std::vector<std::int32_t> corner_stem;  // stem of a blossom corner, else -1
  std::vector<std::int32_t> label;  // N + 1 entries, label[N] = -3
  std::vector<std::int32_t> dart_corner;  // corner whose dart is d, -1 for rev boundary darts
  std::vector<std::int32_t> first_corner;  // per proper vertex
  std::vector<std::int32_t> stem_vertex, stem_corner;  // per stem

  dart_t down(std::int32_t e) const { return 2 * e; }
  dart_t up(std::int32_t e) const { return 2 * e + 1; }
  dart_t fwd(std::int32_t i) const { return 2 * (n_items + i); }
  dart_t rev(std::int32_t i) const { return 2 * (n_items + i) + 1; }
  dart_t num_darts() const { return 2 * (n_items + p); }
  std::int32_t X(vertex_t v) const { return label[first_corner[v]]; }
  bool is_blossom_corner(std::int32_t k) const { return k < n_corners && corner_stem[k] >= 0; }
};

inline LabeledForest label_corners(const BlossomForest& f) {
  validate_blossoming(f);
  const CyclicForest& t = f.base;
  LabeledForest L;
  L.p = t.perimeter();
  L.n_proper = t.size();
  L.n_items = (t.size() - L.p) + f.total_stems();
  const std::int32_t n_full = t.size() + f.total_stems();
  L.n_corners = 2 * n_full - L.p;
  const dart_t nd = L.num_darts();
  L.kind.assign(nd, dart_kind::tree_down);
  L.dart_origin.assign(nd, -1);
  L.dart_stem.assign(nd, -1);
  L.sigma.assign(nd, -1);
  L.vertex_first.assign(t.size(), -1);
  L.item_edge_of_vertex.assign(t.size(), -1);
  L.corner_dart.reserve(L.n_corners + 1);
  L.corner_vertex.reserve(L.n_corners + 1);
  L.corner_stem.reserve(L.n_corners + 1);
  L.label.reserve(L.n_corners + 1);
  L.dart_corner.assign(nd, -1);
  L.first_corner.assign(t.size(), -1);
  L.stem_vertex.reserve(f.total_stems());
  L.stem_corner.reserve(f.total_stems());

  struct Frame {
    vertex_t v;
    std::int32_t child;  // proper children already passed
    std::int32_t stem;   // stems already passed
    dart_t prev;         // last dart placed in the rotation of v
  };
  std::vector<Frame> stack;
  std::int32_t next_edge = 0;
  std::int32_t cur = 0;
  const std::int32_t p = L.p;

  auto emit_corner = [&](dart_t d, vertex_t v, std::int32_t stem) {
    const auto k = static_cast<std::int32_t>(L.corner_dart.size());
    L.corner_dart.push_back(d);
    L.corner_vertex.push_back(v);
    L.corner_stem.push_back(stem);
    L.label.push_back(cur);
    L.dart_corner[d] = k;
    return k;
  };
  auto link = [&](Frame& fr, dart_t d) {
    L.sigma[fr.prev] = d;
    fr.prev = d;
  };

  for (std::int32_t i = 0; i < p; ++i) {
    const dart_t r = L.rev((i + p - 1) % p);
    L.kind[r] = dart_kind::boundary_rev;
    L.dart_origin[r] = i;
    L.vertex_first[i] = r;
    stack.push_back({i, 0, 0, r});
    while (!stack.empty()) {
      Frame& fr = stack.back();
      const vertex_t v = fr.v;
      const std::int32_t kids = t.num_children(v), stems = f.num_stems(v);
      const bool more = fr.child < kids || fr.stem < stems;
      dart_t d;
      if (more) {
        d = L.down(next_edge);
      } else if (t.is_boundary(v)) {
        d = L.fwd(v);
        L.kind[d] = dart_kind::boundary_fwd;
      } else {
        d = L.up(L.item_edge_of_vertex[v]);
      }
      L.dart_origin[d] = v;
      const std::int32_t k = emit_corner(d, v, -1);
      if (L.first_corner[v] < 0) L.first_corner[v] = k;
      if (!more) {
        L.sigma[fr.prev] = L.vertex_first[v];
        if (d != L.vertex_first[v]) {
          L.sigma[fr.prev] = d;
          L.sigma[d] = L.vertex_first[v];
        }
        stack.pop_back();
        --cur;
        continue;
      }
      const std::int32_t e = next_edge++;
      link(fr, d);
      if (fr.stem < stems && f.stem(v, fr.stem) == fr.child) {
        const auto s = static_cast<std::int32_t>(L.stem_vertex.size());
        ++fr.stem;
        L.kind[L.down(e)] = dart_kind::stem_down;
        L.kind[L.up(e)] = dart_kind::stem_up;
        L.dart_stem[L.down(e)] = L.dart_stem[L.up(e)] = s;
        L.dart_origin[L.up(e)] = v;
        L.sigma[L.up(e)] = L.up(e);
        L.stem_vertex.push_back(v);
        L.stem_corner.push_back(emit_corner(L.up(e), -1, s));
        ++cur;
      } else {
        const vertex_t c = t.child(v, fr.child++);
        L.kind[L.down(e)] = dart_kind::tree_down;
        L.kind[L.up(e)] = dart_kind::tree_up;
        L.item_edge_of_vertex[c] = e;
        L.vertex_first[c] = L.up(e);
        --cur;
        stack.push_back({c, 0, 0, L.up(e)});
      }
    }
  }
  L.corner_dart.push_back(L.corner_dart[0]);
  L.corner_vertex.push_back(0);
  L.corner_stem.push_back(-1);
  L.label.push_back(cur);
  if (static_cast<std::int32_t>(L.label.size()) != L.n_corners + 1)
    throw blossom_error(blossom_errc::invalid_blossoming, "contour length mismatch");
  return L;
}

enum class successor_type : std::uint8_t { first, second };

struct Successor {
  std::int32_t corner = -1;
  successor_type type = successor_type::first;
};

// Successor of every inner corner 0..N-1 (targets may be N = xi°).
inline std::vector<Successor> successors(const LabeledForest& L) {
  const std::int32_t N = L.n_corners;
  std::vector<Successor> out(N);
  std::vector<std::int32_t> stack;
  stack.reserve(64);
  for (std::int32_t k = N; k >= 0; --k) {
    while (!stack.empty() && L.label[stack.back()] >= L.label[k]) stack.pop_back();
    if (k < N && !stack.empty()) out[k] = {stack.back(), successor_type::first};
    stack.push_back(k);
  }
  const auto [lo_it, hi_it] = std::minmax_element(L.label.begin(), L.label.end());
  const std::int32_t lo = *lo_it, hi = *hi_it;
  std::vector<std::int32_t> first(hi - lo + 1, -1);
  for (std::int32_t k = 0; k <= N; ++k)
    if (first[L.label[k] - lo] < 0) first[L.label[k] - lo] = k;
  for (std::int32_t k = 0; k < N; ++k) {
    if (out[k].corner >= 0) continue;
    const std::int32_t want = L.label[k] + 2;
    const std::int32_t c = want <= hi ? first[want - lo] : -1;
    if (c < 0 || c >= k)
      throw blossom_error(blossom_errc::closure_stuck, "corner " + std::to_string(k) + " has no successor");
    out[k] = {c, successor_type::second};
  }
  return out;
}

inline Successor successor(const LabeledForest& L, std::int32_t corner) { return successors(L).at(corner); }

struct VStar {
  std::int32_t k_min = -1, k_min1 = -1, k_min2 = -1;
  std::int32_t l_min = 0;
  vertex_t v_star = -1;
};

inline VStar find_vstar(const LabeledForest& L) {
  VStar r;
  r.l_min = *std::min_element(L.label.begin(), L.label.end());
  for (std::int32_t k = 0; k <= L.n_corners; ++k) {
    const std::int32_t l = L.label[k];
    if (l == r.l_min && r.k_min < 0) r.k_min = k;
    if (l == r.l_min + 1 && r.k_min1 < 0) r.k_min1 = k;
    if (l == r.l_min + 2 && r.k_min2 < 0) r.k_min2 = k;
  }
  r.v_star = L.corner_vertex[r.k_min];
  return r;
}

enum class edge_class : std::uint8_t { tree, closure_first, closure_second, boundary };

struct Closure {
  LabeledForest forest;
  std::vector<Successor> succ;
  VStar vstar;
  CombMap map;
  Orientation orientation;
  std::vector<std::int32_t> lam_left;  // per dart of the map; lam_none on root-face corners
  std::vector<edge_class> cls;         // per dart
  static constexpr std::int32_t lam_none = std::numeric_limits<std::int32_t>::min();

  dart_t xi_dagger_dart() const { return forest.corner_dart[0]; }
  std::int32_t lam_right(dart_t d) const {
    const dart_t s = map.sigma(d);
    return s == xi_dagger_dart() ? -3 : lam_left[s];
  }
  std::int32_t X(vertex_t v) const { return forest.X(v); }
  // F-corner of the dart, N standing for xi° never being returned here.
  std::int32_t corner_of(dart_t d) const { return forest.dart_corner[d]; }
};

// Labeled closure: every blossom is identified with the corner of its successor.
inline Closure close_forest(const BlossomForest& f) {
  Closure c;
  c.forest = label_corners(f);
  const LabeledForest& L = c.forest;
  c.succ = successors(L);
  c.vstar = find_vstar(L);
  const std::int32_t N = L.n_corners;
  const dart_t nd = L.num_darts();
  const auto n_stems = static_cast<std::int32_t>(L.stem_vertex.size());

  struct Ins {
    std::int32_t target, dist;
    dart_t dart;
  };
  std::vector<Ins> ins;
  ins.reserve(n_stems);
  for (std::int32_t s = 0; s < n_stems; ++s) {
    const std::int32_t b = L.stem_corner[s];
    const std::int32_t t = c.succ[b].corner;
    if (t == 0 || L.is_blossom_corner(t))
      throw blossom_error(blossom_errc::closure_stuck, "successor lands on a blossom or on xi-dagger");
    const std::int32_t dist = t == N ? N - b : (t - b + N) % N;
    ins.push_back({t, dist, L.corner_dart[b]});
  }
  std::sort(ins.begin(), ins.end(),
            [](const Ins& a, const Ins& b) { return a.target != b.target ? a.target < b.target : a.dist < b.dist; });

  std::vector<dart_t> sigma = L.sigma;
  std::vector<vertex_t> origin = L.dart_origin;
  std::vector<dart_t> sigma_inv(nd, -1);
  for (dart_t d = 0; d < nd; ++d)
    if (L.kind[d] != dart_kind::stem_up) sigma_inv[sigma[d]] = d;
  for (std::size_t a = 0; a < ins.size();) {
    std::size_t b = a;
    while (b < ins.size() && ins[b].target == ins[a].target) ++b;
    const dart_t target = L.corner_dart[ins[a].target];
    const vertex_t w = L.corner_vertex[ins[a].target];
    dart_t prev = sigma_inv[target];
    for (std::size_t k = a; k < b; ++k) {
      sigma[prev] = ins[k].dart;
      origin[ins[k].dart] = w;
      prev = ins[k].dart;
    }
    sigma[prev] = target;
    a = b;
  }

  std::vector<dart_t> twins(nd);
  for (dart_t d = 0; d < nd; ++d) twins[d] = d ^ 1;
  c.map = CombMap::from_permutations(std::move(twins), std::move(sigma), std::move(origin), L.vertex_first,
                                     L.rev(L.p - 1));
  const std::int32_t k_min = c.vstar.k_min;
  c.map.set_marked_face(c.map.face(L.corner_dart[k_min]));

  c.orientation.out.assign(nd, 0);
  c.cls.assign(nd, edge_class::tree);
  c.lam_left.assign(nd, Closure::lam_none);
  for (dart_t d = 0; d < nd; ++d) {
    switch (L.kind[d]) {
      case dart_kind::tree_up:
      case dart_kind::stem_down:
      case dart_kind::boundary_fwd: c.orientation.out[d] = 1; break;
      default: break;
    }
    if (L.kind[d] == dart_kind::boundary_fwd || L.kind[d] == dart_kind::boundary_rev) c.cls[d] = edge_class::boundary;
    if (L.kind[d] == dart_kind::stem_down || L.kind[d] == dart_kind::stem_up) {
      const std::int32_t s = L.dart_stem[d];
      c.cls[d] = c.succ[L.stem_corner[s]].type == successor_type::first ? edge_class::closure_first
                                                                        : edge_class::closure_second;
    }
    if (L.kind[d] == dart_kind::stem_up) {
      c.lam_left[d] = L.label[c.succ[L.stem_corner[L.dart_stem[d]]].corner];
    } else if (L.kind[d] != dart_kind::boundary_rev) {
      c.lam_left[d] = L.label[L.dart_corner[d]];
    }
  }
  return c;
}

// Iterated local closures on the contour; independent of the labels.
inline CombMap local_closure(const BlossomForest& f) {
  const LabeledForest L = label_corners(f);
  const std::int32_t N = L.n_corners;
  const dart_t nd = L.num_darts();
  std::vector<dart_t> sigma = L.sigma;
  std::vector<vertex_t> origin = L.dart_origin;
  std::vector<std::int32_t> nxt(N), prv(N);
  std::vector<dart_t> at(N);
  std::vector<char> is_stem_down(N, 0), is_stem_up(N, 0), alive(N, 1);
  for (std::int32_t k = 0; k < N; ++k) {
    at[k] = L.corner_dart[k];
    nxt[k] = (k + 1) % N;
    prv[k] = (k + N - 1) % N;
    is_stem_down[k] = L.kind[at[k]] == dart_kind::stem_down;
    is_stem_up[k] = L.kind[at[k]] == dart_kind::stem_up;
  }
  auto proper = [&](std::int32_t k) { return !is_stem_down[k] && !is_stem_up[k]; };
  std::int32_t stems = static_cast<std::int32_t>(L.stem_vertex.size());
  std::int32_t len = N, cur = 0, idle = 0;
  while (stems > 0) {
    if (idle > 2 * len + 4) throw blossom_error(blossom_errc::closure_stuck, "no local closure applies");
    const std::int32_t a = cur, b = nxt[a], x = nxt[b], y = nxt[x];
    if (is_stem_down[a] && is_stem_up[b] && L.dart_stem[at[a]] == L.dart_stem[at[b]] && proper(x) && proper(y)) {
      const dart_t up = at[b];
      const dart_t wv = at[y] ^ 1;
      const vertex_t w = origin[at[y] ^ 1];
      origin[up] = w;
      sigma[up] = sigma[wv];
      sigma[wv] = up;
      alive[b] = alive[x] = alive[y] = 0;
      nxt[a] = nxt[y];
      prv[nxt[y]] = a;
      is_stem_down[a] = 0;
      len -= 3;
      --stems;
      idle = 0;
      cur = prv[prv[prv[a]]];
    } else {
      cur = nxt[cur];
      ++idle;
    }
  }
  std::vector<dart_t> twins(nd);
  for (dart_t d = 0; d < nd; ++d) twins[d] = d ^ 1;
  CombMap m = CombMap::from_permutations(std::move(twins), std::move(sigma), std::move(origin), L.vertex_first,
                                         L.rev(L.p - 1));
  m.set_marked_face(m.face(at[cur]));
  return m;
}

// --- validly labeled forests -------------------------------------------------

struct ValidLabeledForest {
  CyclicForest forest;
  std::vector<std::int32_t> X;

  std::int32_t D(std::int32_t child) const { return X[child] - X[forest.parent(child)]; }
  std::vector<std::int32_t> displacement(std::int32_t u) const {
    std::vector<std::int32_t> d;
    for (std::int32_t k = 0; k < forest.num_children(u); ++k) d.push_back(D(forest.child(u, k)));
    return d;
  }
  std::int32_t boundary_stems(std::int32_t i) const {
    const std::int32_t p = forest.perimeter();
    return i + 1 < p ? X[i + 1] - X[i] + 1 : X[0] - X[p - 1] - 2;
  }
};

inline ValidLabeledForest to_valid_labeled(const BlossomForest& f) {
  const LabeledForest L = label_corners(f);
  ValidLabeledForest v;
  v.forest = f.base;
  v.X.resize(f.base.size());
  for (std::int32_t u = 0; u < f.base.size(); ++u) v.X[u] = L.X(u);
  return v;
}

inline void check_valid_labeled(const ValidLabeledForest& v) {
  const CyclicForest& t = v.forest;
  const std::int32_t p = t.perimeter();
  auto fail = [](const std::string& why) { throw blossom_error(blossom_errc::not_validly_labeled, why); };
  if (p < 3) fail("perimeter below 3");
  if (static_cast<std::int32_t>(v.X.size()) != t.size()) fail("label vector size");
  if (v.X[0] != 0) fail("X(rho_1) != 0");
  for (std::int32_t i = 1; i < p; ++i)
    if (v.X[i] < v.X[i - 1] - 1) fail("X(rho_i) < X(rho_{i-1}) - 1 at i = " + std::to_string(i + 1));
  if (v.X[0] < v.X[p - 1] + 2) fail("X(rho_1) < X(rho_p) + 2");
  for (std::int32_t u = 0; u < t.size(); ++u) {
    const auto d = v.displacement(u);
    for (std::size_t k = 1; k < d.size(); ++k)
      if (d[k] < d[k - 1]) fail("displacement vector not non-decreasing at " + std::to_string(u));
    for (std::int32_t x : d) {
      if (t.is_boundary(u)) {
        if (x < -1) fail("displacement below -1 at a boundary vertex");
        if (x > v.boundary_stems(u) - 1) fail("displacement exceeds the stems at a boundary vertex");
      } else if (x < -1 || x > 1) {
        fail("inner displacement outside {-1,0,1}");
      }
    }
  }
}

inline BlossomForest from_valid_labeled(const ValidLabeledForest& v) {
  check_valid_labeled(v);
  const CyclicForest& t = v.forest;
  std::vector<std::vector<std::int32_t>> stems(t.size());
  for (std::int32_t u = 0; u < t.size(); ++u) {
    const auto d = v.displacement(u);
    auto count_le = [&](std::int32_t x) {
      return static_cast<std::int32_t>(std::count_if(d.begin(), d.end(), [x](std::int32_t y) { return y <= x; }));
    };
    const std::int32_t s = t.is_boundary(u) ? v.boundary_stems(u) : 2;
    for (std::int32_t j = 1; j <= s; ++j) stems[u].push_back(count_le(j - 2));
  }
  return BlossomForest::make(t, stems);
}

}  // namespace polydisk
