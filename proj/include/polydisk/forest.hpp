#pragma once
// Cyclic forests of perimeter p: a p-cycle rho_1..rho_p with a plane tree
// hanging inside at each rho_i. Vertex ids 0..p-1 are rho_1..rho_p.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace polydisk {

using rational = boost::multiprecision::cpp_rational;

struct forest_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Nested child lists; a vertex is the list of its children.
struct Nested {
  std::vector<Nested> kids;
  bool operator==(const Nested&) const = default;
};

class CyclicForest {
 public:
  CyclicForest() = default;

  // children[v] lists the children of v in clockwise order after the parent edge.
  CyclicForest(std::int32_t p, const std::vector<std::vector<std::int32_t>>& children) : p_(p) {
    if (p < 1) throw forest_error("perimeter must be positive");
    const auto n = static_cast<std::int32_t>(children.size());
    if (n < p) throw forest_error("fewer vertices than the perimeter");
    parent_.assign(n, -1);
    offset_.assign(n + 1, 0);
    for (std::int32_t v = 0; v < n; ++v) offset_[v + 1] = offset_[v] + static_cast<std::int32_t>(children[v].size());
    kids_.reserve(offset_[n]);
    std::vector<char> seen(n, 0);
    for (std::int32_t v = 0; v < n; ++v)
      for (std::int32_t c : children[v]) {
        if (c < p || c >= n || seen[c]) throw forest_error("invalid child id " + std::to_string(c));
        seen[c] = 1;
        parent_[c] = v;
        kids_.push_back(c);
      }
    for (std::int32_t v = p; v < n; ++v)
      if (!seen[v]) throw forest_error("vertex without parent");
    finish();
  }

  static CyclicForest from_nested(const std::vector<Nested>& trees) {
    const auto p = static_cast<std::int32_t>(trees.size());
    std::vector<std::vector<std::int32_t>> children(p);
    std::vector<std::pair<const Nested*, std::int32_t>> queue;
    for (std::int32_t i = 0; i < p; ++i) queue.push_back({&trees[i], i});
    for (std::size_t k = 0; k < queue.size(); ++k) {
      const auto [node, id] = queue[k];
      for (const auto& kid : node->kids) {
        const auto c = static_cast<std::int32_t>(children.size());
        children.emplace_back();
        children[id].push_back(c);
        queue.push_back({&kid, c});
      }
    }
    return CyclicForest(p, children);
  }

  std::int32_t perimeter() const { return p_; }
  std::int32_t size() const { return static_cast<std::int32_t>(parent_.size()); }
  std::int32_t parent(std::int32_t v) const { return parent_[v]; }
  std::int32_t num_children(std::int32_t v) const { return offset_[v + 1] - offset_[v]; }
  std::int32_t child(std::int32_t v, std::int32_t k) const { return kids_[offset_[v] + k]; }
  // Position of v among the children of its parent.
  std::int32_t rank(std::int32_t v) const { return rank_[v]; }
  std::int32_t depth(std::int32_t v) const { return depth_[v]; }
  // 1-based index of the tree containing v.
  std::int32_t tree(std::int32_t v) const { return tree_[v]; }
  bool is_boundary(std::int32_t v) const { return v < p_; }

  Nested nested(std::int32_t v) const {
    Nested n;
    for (std::int32_t k = 0; k < num_children(v); ++k) n.kids.push_back(nested(child(v, k)));
    return n;
  }
  std::vector<Nested> nested() const {
    std::vector<Nested> out;
    for (std::int32_t i = 0; i < p_; ++i) out.push_back(nested(i));
    return out;
  }

 private:
  void finish() {
    const std::int32_t n = size();
    rank_.assign(n, 0);
    depth_.assign(n, 0);
    tree_.assign(n, 0);
    for (std::int32_t v = 0; v < n; ++v)
      for (std::int32_t k = 0; k < num_children(v); ++k) rank_[child(v, k)] = k;
    std::vector<std::int32_t> stack;
    std::int32_t reached = 0;
    for (std::int32_t i = 0; i < p_; ++i) {
      tree_[i] = i + 1;
      stack.push_back(i);
      while (!stack.empty()) {
        const std::int32_t v = stack.back();
        stack.pop_back();
        ++reached;
        for (std::int32_t k = 0; k < num_children(v); ++k) {
          const std::int32_t c = child(v, k);
          depth_[c] = depth_[v] + 1;
          tree_[c] = i + 1;
          stack.push_back(c);
        }
      }
    }
    if (reached != n) throw forest_error("forest contains a cycle");
  }

  std::int32_t p_ = 0;
  std::vector<std::int32_t> parent_, offset_, kids_, rank_, depth_, tree_;
};

// Ulam-Harris words: tree index followed by 1-based child ranks.
inline std::vector<std::vector<std::int32_t>> ulam_harris(const CyclicForest& f) {
  std::vector<std::vector<std::int32_t>> words(f.size());
  std::vector<std::int32_t> stack;
  for (std::int32_t i = 0; i < f.perimeter(); ++i) {
    words[i] = {i + 1};
    stack.push_back(i);
    while (!stack.empty()) {
      const std::int32_t v = stack.back();
      stack.pop_back();
      for (std::int32_t k = 0; k < f.num_children(v); ++k) {
        const std::int32_t c = f.child(v, k);
        words[c] = words[v];
        words[c].push_back(k + 1);
        stack.push_back(c);
      }
    }
  }
  return words;
}

inline std::string format_word(const std::vector<std::int32_t>& w) {
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) s += '.';
    s += std::to_string(w[k]);
  }
  return s;
}

// Vertices in lexicographic order of their words (preorder, trees in order).
inline std::vector<std::int32_t> lex_order(const CyclicForest& f) {
  std::vector<std::int32_t> out, stack;
  out.reserve(f.size());
  for (std::int32_t i = 0; i < f.perimeter(); ++i) {
    stack.push_back(i);
    while (!stack.empty()) {
      const std::int32_t v = stack.back();
      stack.pop_back();
      out.push_back(v);
      for (std::int32_t k = f.num_children(v) - 1; k >= 0; --k) stack.push_back(f.child(v, k));
    }
  }
  return out;
}

// beta(0..2|V|-p): vertices visited by the contour exploration from rho_1.
inline std::vector<std::int32_t> contour_exploration(const CyclicForest& f) {
  std::vector<std::int32_t> beta;
  beta.reserve(2 * f.size() - f.perimeter() + 1);
  std::vector<std::int32_t> next_child(f.size(), 0);
  std::int32_t v = 0;
  beta.push_back(v);
  for (;;) {
    if (next_child[v] < f.num_children(v)) {
      v = f.child(v, next_child[v]++);
    } else if (!f.is_boundary(v)) {
      v = f.parent(v);
    } else if (v + 1 < f.perimeter()) {
      v = v + 1;
    } else {
      beta.push_back(0);
      break;
    }
    beta.push_back(v);
  }
  return beta;
}

// Integer sequence with its time and space scales; the physical value at
// time i * time_scale is values[i] * space (space = space_scale, or its
// square root when space_is_sqrt).
struct ProcessTrace {
  std::vector<std::int64_t> values;
  rational time_scale{1};
  rational space_scale{1};
  bool space_is_sqrt = false;

  std::int64_t domain_length() const { return static_cast<std::int64_t>(values.size()) - 1; }

  // Exact linear interpolation of the unscaled values at unscaled time t.
  rational at(const rational& t) const {
    if (t < 0 || t > domain_length()) throw std::out_of_range("trace time outside the domain");
    const boost::multiprecision::cpp_int whole = boost::multiprecision::numerator(t) /
                                                 boost::multiprecision::denominator(t);
    const auto i = static_cast<std::int64_t>(whole);
    const rational frac = t - rational(i);
    if (frac == 0) return rational(values[i]);
    return rational(values[i]) + frac * rational(values[i + 1] - values[i]);
  }

  double space_factor() const {
    const double s = static_cast<double>(space_scale);
    return space_is_sqrt ? std::sqrt(s) : s;
  }

  // Rescaled value at rescaled time s.
  double rescaled(const rational& s) const { return static_cast<double>(at(s / time_scale)) * space_factor(); }
};

inline ProcessTrace height_function(const CyclicForest& f) {
  ProcessTrace t;
  for (std::int32_t v : lex_order(f)) t.values.push_back(f.depth(v) - f.tree(v) + 1);
  t.values.push_back(-f.perimeter());
  return t;
}

inline ProcessTrace contour_function(const CyclicForest& f) {
  ProcessTrace t;
  const auto beta = contour_exploration(f);
  for (std::size_t i = 0; i + 1 < beta.size(); ++i) t.values.push_back(f.depth(beta[i]) - f.tree(beta[i]) + 1);
  t.values.push_back(-f.perimeter());
  return t;
}

// Scales used for traces of forests sampled at perimeter p.
inline void set_height_scales(ProcessTrace& t, std::int64_t p) {
  t.time_scale = rational(3, p * p);
  t.space_scale = rational(1, p);
  t.space_is_sqrt = false;
}

inline void set_label_scales(ProcessTrace& t, std::int64_t p) {
  t.time_scale = rational(3, p * p);
  t.space_scale = rational(3, 2 * p);
  t.space_is_sqrt = true;
}

// Corner indices of the cyclic interval [[c, c']] on 0..last.
inline std::vector<std::int32_t> cyclic_interval(std::int32_t c, std::int32_t c2, std::int32_t last) {
  std::vector<std::int32_t> out;
  if (c <= c2) {
    for (std::int32_t k = c; k <= c2; ++k) out.push_back(k);
  } else {
    for (std::int32_t k = c; k <= last; ++k) out.push_back(k);
    for (std::int32_t k = 0; k <= c2; ++k) out.push_back(k);
  }
  return out;
}

inline std::string trace_csv(const ProcessTrace& t, bool rescaled) {
  std::string out = rescaled ? "s,value\n" : "index,value\n";
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    if (rescaled) {
      const double s = static_cast<double>(t.time_scale) * static_cast<double>(i);
      out += std::to_string(s) + "," + std::to_string(static_cast<double>(t.values[i]) * t.space_factor()) + "\n";
    } else {
      out += std::to_string(i) + "," + std::to_string(t.values[i]) + "\n";
    }
  }
  return out;
}

}  // namespace polydisk
