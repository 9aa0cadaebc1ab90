#pragma once
// Boltzmann samplers for marked and unmarked simple triangulations of the p-gon.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "polydisk/blossom.hpp"
#include "polydisk/forest.hpp"
#include "polydisk/rng.hpp"

namespace polydisk {

enum class sampler_errc { node_cap_exceeded, arity_mismatch, recursion_budget, bad_perimeter };

class sampler_error : public std::runtime_error {
 public:
  sampler_error(sampler_errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  sampler_errc code() const noexcept { return code_; }

 private:
  sampler_errc code_;
};

inline std::int64_t default_node_cap() {
  if (const char* s = std::getenv("POLYDISK_NODE_CAP")) {
    char* end = nullptr;
    const long long v = std::strtoll(s, &end, 10);
    if (end != s && v > 0) return v;
  }
  return 100'000'000;
}

inline std::uint32_t sample_G(Rng& rng) { return rng.geometric_quarter(); }

// P[B = k] = C(k+2, 2) P[G = k] / (16/9), the law of a sum of three independent copies of G.
inline std::uint32_t sample_B(Rng& rng) { return sample_G(rng) + sample_G(rng) + sample_G(rng); }

// Sum of r independent copies of G.
inline std::int64_t sample_G_sum(Rng& rng, std::int64_t r) {
  if (r <= 0) return 0;
  if (r <= 32) {
    std::int64_t s = 0;
    for (std::int64_t k = 0; k < r; ++k) s += sample_G(rng);
    return s;
  }
  return std::negative_binomial_distribution<std::int64_t>(r, 0.75)(rng);
}

// Blossoming tree in preorder. Node 0 is the root and carries no stems.
struct BlossomTree {
  struct Node {
    std::int32_t kids = 0;
    std::int32_t stem_a = 0, stem_b = 0;  // positions among the children, stem_a <= stem_b
  };
  std::vector<Node> nodes;
  std::int32_t size() const { return static_cast<std::int32_t>(nodes.size()); }
};

// Two stems placed uniformly among the C(k+2, 2) interleavings with k children.
inline std::pair<std::int32_t, std::int32_t> sample_stem_pair(Rng& rng, std::int32_t k) {
  const auto slots = static_cast<std::uint64_t>(k) + 2;
  const auto a = static_cast<std::int32_t>(rng.below(slots));
  auto b = static_cast<std::int32_t>(rng.below(slots - 1));
  if (b >= a) ++b;
  const auto lo = std::min(a, b), hi = std::max(a, b);
  return {lo, hi - 1};
}

inline BlossomTree sample_blossom_tree(Rng& rng, std::int64_t cap = default_node_cap()) {
  BlossomTree t;
  std::int64_t open = 1;
  bool root = true;
  while (open > 0) {
    BlossomTree::Node n;
    n.kids = static_cast<std::int32_t>(root ? sample_G(rng) : sample_B(rng));
    if (!root) std::tie(n.stem_a, n.stem_b) = sample_stem_pair(rng, n.kids);
    root = false;
    open += n.kids - 1;
    t.nodes.push_back(n);
    if (static_cast<std::int64_t>(t.nodes.size()) > cap)
      throw sampler_error(sampler_errc::node_cap_exceeded, "blossoming tree exceeds the node cap");
  }
  return t;
}

struct Bridge {
  std::vector<std::int8_t> X;     // steps X_1..X_{2p-3}, stored 0-based
  std::vector<std::int32_t> b;    // b_0..b_{2p-3}
  std::vector<std::int32_t> Z;    // Z_1..Z_p, stored 0-based
};

inline Bridge bridge_from_steps(std::vector<std::int8_t> X) {
  Bridge br;
  br.X = std::move(X);
  br.b.assign(br.X.size() + 1, 0);
  for (std::size_t k = 0; k < br.X.size(); ++k) br.b[k + 1] = br.b[k] + br.X[k];
  std::int32_t ups = 0;
  for (std::int8_t x : br.X) {
    if (x > 0) {
      ++ups;
    } else {
      br.Z.push_back(ups);
      ups = 0;
    }
  }
  return br;
}

// Steps with sum -3 whose last step is a down-step: C(2p-4, p-3) equally likely tuples.
inline Bridge sample_bridge(std::int32_t p, Rng& rng) {
  if (p < 3) throw sampler_error(sampler_errc::bad_perimeter, "perimeter below 3");
  const std::int32_t free = 2 * p - 4;
  std::vector<std::int8_t> X(free + 1, -1);
  // Floyd's selection of p - 3 up-step slots among the first 2p - 4.
  std::vector<char> chosen(free, 0);
  for (std::int32_t j = free - (p - 3); j < free; ++j) {
    const auto t = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(j) + 1));
    if (chosen[t])
      chosen[j] = 1;
    else
      chosen[t] = 1;
  }
  for (std::int32_t k = 0; k < free; ++k)
    if (chosen[k]) X[k] = 1;
  return bridge_from_steps(std::move(X));
}

// Grafts trees[i] into the i-th boundary corner, boundary stems following the bridge.
inline BlossomForest assemble_forest(std::int32_t p, const Bridge& br, const std::vector<BlossomTree>& trees) {
  if (static_cast<std::int32_t>(br.X.size()) != 2 * p - 3 || static_cast<std::int32_t>(trees.size()) != 2 * p - 3)
    throw sampler_error(sampler_errc::arity_mismatch, "expected 2p-3 steps and trees");
  if (br.X.back() != -1) throw sampler_error(sampler_errc::arity_mismatch, "bridge must end with a down-step");
  std::int64_t total = p;
  for (const auto& t : trees) total += t.size() - 1;
  std::vector<std::vector<std::int32_t>> children(p);
  std::vector<std::vector<std::int32_t>> stems(p);
  children.reserve(total);
  stems.reserve(total);
  struct Open {
    std::int32_t id, left;
  };
  std::vector<Open> stack;
  std::int32_t j = 0;
  for (std::int32_t i = 0; i < 2 * p - 3; ++i) {
    const auto& t = trees[i];
    stack.clear();
    stack.push_back({j, t.nodes[0].kids});
    for (std::int32_t k = 1; k < t.size(); ++k) {
      while (stack.back().left == 0) stack.pop_back();
      --stack.back().left;
      const auto id = static_cast<std::int32_t>(children.size());
      children[stack.back().id].push_back(id);
      children.emplace_back();
      stems.push_back({t.nodes[k].stem_a, t.nodes[k].stem_b});
      stack.push_back({id, t.nodes[k].kids});
    }
    if (br.X[i] > 0)
      stems[j].push_back(static_cast<std::int32_t>(children[j].size()));
    else
      ++j;
  }
  return BlossomForest::make(CyclicForest(p, children), stems);
}

inline BlossomForest sample_forest(std::int32_t p, Rng& rng, std::int64_t cap = default_node_cap()) {
  const Bridge br = sample_bridge(p, rng);
  std::vector<BlossomTree> trees;
  trees.reserve(2 * p - 3);
  std::int64_t used = p;
  for (std::int32_t i = 0; i < 2 * p - 3; ++i) {
    trees.push_back(sample_blossom_tree(rng, cap - used + 1));
    used += trees.back().size() - 1;
  }
  return assemble_forest(p, br, trees);
}

// Same law, returning nothing as soon as the forest exceeds max_vertices proper vertices.
inline std::optional<BlossomForest> sample_forest_bounded(std::int32_t p, Rng& rng, std::int64_t max_vertices) {
  const Bridge br = sample_bridge(p, rng);
  std::vector<BlossomTree> trees;
  trees.reserve(2 * p - 3);
  std::int64_t used = p;
  if (used > max_vertices) return std::nullopt;
  for (std::int32_t i = 0; i < 2 * p - 3; ++i) {
    BlossomTree t;
    std::int64_t open = 1;
    bool root = true;
    while (open > 0) {
      BlossomTree::Node n;
      n.kids = static_cast<std::int32_t>(root ? sample_G(rng) : sample_B(rng));
      if (!root) {
        std::tie(n.stem_a, n.stem_b) = sample_stem_pair(rng, n.kids);
        if (++used > max_vertices) return std::nullopt;
      }
      root = false;
      open += n.kids - 1;
      t.nodes.push_back(n);
    }
    trees.push_back(std::move(t));
  }
  return assemble_forest(p, br, trees);
}

inline Closure sample_bol3_marked(std::int32_t p, Rng& rng, std::int64_t cap = default_node_cap()) {
  return close_forest(sample_forest(p, rng, cap));
}

// Smallest number of inner faces of a simple triangulation of the p-gon.
inline std::int64_t min_inner_faces(std::int32_t p) { return p - 2; }

inline std::int64_t inner_faces(std::int64_t vertices, std::int32_t p) { return 2 * vertices - p - 2; }

// Forest whose closure, with the mark forgotten, has the law Bol_III(p).
inline BlossomForest sample_bol3_forest(std::int32_t p, Rng& rng, std::int64_t cap = default_node_cap(),
                                        std::int64_t* proposals = nullptr) {
  const double fmin = static_cast<double>(min_inner_faces(p));
  for (std::int64_t tries = 1;; ++tries) {
    const double u = rng.uniform_pos();
    // Accept iff u * N <= F_min, i.e. N <= F_min / u.
    const double nmax_faces = fmin / u;
    const double vmax = (nmax_faces + p + 2) / 2.0;
    const bool capped = vmax > static_cast<double>(cap);
    auto f = sample_forest_bounded(p, rng, capped ? cap : static_cast<std::int64_t>(vmax));
    if (!f) {
      if (capped) throw sampler_error(sampler_errc::node_cap_exceeded, "proposal exceeds the node cap");
      continue;
    }
    const std::int64_t n = f->base.size();
    if (u * static_cast<double>(inner_faces(n, p)) <= fmin) {
      if (proposals) *proposals = tries;
      return std::move(*f);
    }
  }
}

enum class bol_mode { rejection, importance };

struct WeightedClosure {
  Closure closure;
  double weight = 1.0;
  std::int64_t proposals = 1;
};

// Rejection: accept a marked sample with probability F_min / N, N its inner faces;
// the uniform is drawn first so oversized proposals are abandoned early.
// Importance: return the marked sample with weight 1 / N.
inline WeightedClosure sample_bol3(std::int32_t p, Rng& rng, bol_mode mode = bol_mode::rejection,
                                   std::int64_t cap = default_node_cap()) {
  if (mode == bol_mode::importance) {
    Closure c = sample_bol3_marked(p, rng, cap);
    const double w = 1.0 / static_cast<double>(inner_faces(c.map.num_vertices(), p));
    return {std::move(c), w, 1};
  }
  std::int64_t tries = 0;
  BlossomForest f = sample_bol3_forest(p, rng, cap, &tries);
  return {close_forest(f), 1.0, tries};
}

// ---- size-only samplers ---------------------------------------------------

// Total progeny of a forest of `roots` trees with offspring law B. The walk with
// steps B - 1 is skip-free downwards, so from height h above the target it
// cannot arrive before h more steps and those h steps can be drawn at once.
// Stops early, returning some value above `limit`, once the size is known to exceed it.
inline std::int64_t sample_B_forest_size(std::int64_t roots, Rng& rng,
                                         std::int64_t limit = std::numeric_limits<std::int64_t>::max()) {
  std::int64_t steps = 0, h = roots;
  while (h > 0) {
    steps += h;
    if (steps > limit) return steps;
    h = sample_G_sum(rng, 3 * h);
  }
  return steps;
}

// |F*_p|: proper vertices of the sampled blossoming forest.
inline std::int64_t sample_forest_size(std::int32_t p, Rng& rng,
                                       std::int64_t limit = std::numeric_limits<std::int64_t>::max()) {
  const std::int64_t root_children = sample_G_sum(rng, 2 * p - 3);
  return p + sample_B_forest_size(root_children, rng, limit - p);
}

// |V| of a sample of the unmarked Boltzmann simple triangulation of the p-gon.
inline std::int64_t sample_bol3_size(std::int32_t p, Rng& rng) {
  const double fmin = static_cast<double>(min_inner_faces(p));
  for (;;) {
    const double u = rng.uniform_pos();
    const double vmax = (fmin / u + p + 2) / 2.0;
    const std::int64_t lim = vmax > 4e18 ? std::numeric_limits<std::int64_t>::max() : static_cast<std::int64_t>(vmax);
    const std::int64_t n = sample_forest_size(p, rng, lim);
    if (n > lim) continue;
    if (u * static_cast<double>(inner_faces(n, p)) <= fmin) return n;
  }
}

struct LexPrefix {
  std::vector<std::int32_t> labels;  // X of the first vertices in lexicographic order
  bool complete = false;             // the forest ended before the requested count
};

// Labels of the first `count` vertices of a sampled forest in lexicographic
// order, generating the trees only as far as needed.
inline LexPrefix sample_lex_prefix(std::int32_t p, Rng& rng, std::int64_t count) {
  const Bridge br = sample_bridge(p, rng);
  LexPrefix out;
  out.labels.reserve(static_cast<std::size_t>(std::min<std::int64_t>(count, 1 << 24)));
  struct Frame {
    std::int32_t label, left, rank, a, b;
    bool root;
  };
  std::vector<Frame> stack;
  auto full = [&] { return static_cast<std::int64_t>(out.labels.size()) >= count; };
  for (std::int32_t i = 0; i < 2 * p - 3; ++i) {
    const std::int32_t corner = br.b[i];
    if (i == 0 || br.X[i - 1] < 0) {
      if (full()) return out;
      out.labels.push_back(corner);
    }
    stack.clear();
    stack.push_back({corner, static_cast<std::int32_t>(sample_G(rng)), 0, 0, 0, true});
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.left == 0) {
        stack.pop_back();
        continue;
      }
      --top.left;
      const std::int32_t r = top.rank++;
      const std::int32_t x = top.root ? corner - 1 : top.label + (top.a <= r) + (top.b <= r) - 1;
      if (full()) return out;
      out.labels.push_back(x);
      const auto k = static_cast<std::int32_t>(sample_B(rng));
      const auto [a, b] = sample_stem_pair(rng, k);
      stack.push_back({x, k, 0, a, b, false});
    }
  }
  out.complete = true;
  return out;
}

}  // namespace polydisk
