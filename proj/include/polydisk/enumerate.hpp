#pragma once
// Exhaustive enumeration of blossoming forests and the bijection audit.

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "polydisk/blossom.hpp"
#include "polydisk/checks.hpp"
#include "polydisk/exact.hpp"
#include "polydisk/forest.hpp"

namespace polydisk {

struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cyclic forests of perimeter p with exactly `inner` inner vertices, in
// lexicographic order of their preorder child-count sequences.
inline void for_each_cyclic_forest(std::int32_t p, std::int32_t inner, const std::function<void(const CyclicForest&)>& fn) {
  std::vector<std::vector<std::int32_t>> children(p);
  std::vector<std::int32_t> pending;
  for (std::int32_t i = p - 1; i >= 0; --i) pending.push_back(i);
  std::function<void(std::int32_t)> rec = [&](std::int32_t left) {
    if (pending.empty()) {
      if (left == 0) fn(CyclicForest(p, children));
      return;
    }
    const std::int32_t v = pending.back();
    pending.pop_back();
    for (std::int32_t c = 0; c <= left; ++c) {
      const auto base = static_cast<std::int32_t>(children.size());
      for (std::int32_t j = 0; j < c; ++j) {
        children[v].push_back(base + j);
        children.emplace_back();
      }
      for (std::int32_t j = c - 1; j >= 0; --j) pending.push_back(base + j);
      rec(left - c);
      pending.resize(pending.size() - c);
      children.resize(base);
      children[v].clear();
    }
    pending.push_back(v);
  };
  rec(inner);
}

// Non-decreasing sequences of length s over 0..k.
inline std::vector<std::vector<std::int32_t>> multisets(std::int32_t k, std::int32_t s) {
  std::vector<std::vector<std::int32_t>> out;
  std::vector<std::int32_t> cur;
  std::function<void(std::int32_t)> rec = [&](std::int32_t lo) {
    if (static_cast<std::int32_t>(cur.size()) == s) {
      out.push_back(cur);
      return;
    }
    for (std::int32_t x = lo; x <= k; ++x) {
      cur.push_back(x);
      rec(x);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

inline std::vector<std::vector<std::int32_t>> compositions(std::int32_t total, std::int32_t parts) {
  std::vector<std::vector<std::int32_t>> out;
  std::vector<std::int32_t> cur;
  std::function<void(std::int32_t)> rec = [&](std::int32_t left) {
    if (static_cast<std::int32_t>(cur.size()) == parts - 1) {
      cur.push_back(left);
      out.push_back(cur);
      cur.pop_back();
      return;
    }
    for (std::int32_t x = left; x >= 0; --x) {
      cur.push_back(x);
      rec(left - x);
      cur.pop_back();
    }
  };
  if (parts > 0) rec(total);
  return out;
}

// All blossoming forests of perimeter p and size n (proper vertices):
// tree shapes, then boundary stem compositions, then stem placements.
inline void for_each_blossoming_forest(std::int32_t p, std::int32_t n, const std::function<void(const BlossomForest&)>& fn) {
  if (p < 3 || n < p) return;
  const auto comps = compositions(p - 3, p);
  for_each_cyclic_forest(p, n - p, [&](const CyclicForest& base) {
    for (const auto& comp : comps) {
      std::vector<std::vector<std::vector<std::int32_t>>> options(base.size());
      for (std::int32_t v = 0; v < base.size(); ++v)
        options[v] = multisets(base.num_children(v), base.is_boundary(v) ? comp[v] : 2);
      std::vector<std::size_t> idx(base.size(), 0);
      std::vector<std::vector<std::int32_t>> stems(base.size());
      for (;;) {
        for (std::int32_t v = 0; v < base.size(); ++v) stems[v] = options[v][idx[v]];
        fn(BlossomForest::make(base, stems));
        std::int32_t v = base.size() - 1;
        while (v >= 0 && ++idx[v] == options[v].size()) idx[v--] = 0;
        if (v < 0) break;
      }
    }
  });
}

struct EnumSizeReport {
  std::int32_t n = 0;
  std::int64_t forests = 0;
  std::int64_t closures = 0;  // distinct marked maps
  std::int64_t valid = 0;     // closures passing every check
  std::int64_t unmarked = 0;  // distinct maps after forgetting the mark
  std::int64_t expected = 0;  // closed-form forest count
  std::int64_t unique_minimal = 0;  // maps whose minimal 3-orientation is unique
};

struct EnumReport {
  std::int32_t p = 0;
  std::vector<EnumSizeReport> sizes;
  bool injective = true;
  std::vector<std::string> mismatches;

  bool ok() const {
    if (!injective || !mismatches.empty()) return false;
    for (const auto& s : sizes)
      if (s.forests != s.closures || s.closures != s.valid || s.forests != s.expected) return false;
    return true;
  }
};

struct EnumOptions {
  bool uniqueness = false;  // run exhaustive 3-orientation search per unmarked map
  std::int32_t uniqueness_max_vertices = 7;
  std::size_t max_mismatches = 20;
};

inline EnumReport enumerate_and_check(std::int32_t p, std::int32_t n_max, const EnumOptions& opt = {}) {
  if (p < 3 || p > 5) throw budget_error("enumeration supports perimeters 3 to 5");
  if (n_max > 8) throw budget_error("enumeration supports sizes up to 8");
  EnumReport rep;
  rep.p = p;
  auto note = [&](std::string s) {
    if (rep.mismatches.size() < opt.max_mismatches) rep.mismatches.push_back(std::move(s));
  };
  for (std::int32_t n = p; n <= n_max; ++n) {
    EnumSizeReport sz;
    sz.n = n;
    sz.expected = static_cast<std::int64_t>(blossoming_forest_count(n, p));
    std::set<std::vector<std::int32_t>> keys, plain;
    std::map<std::vector<std::int32_t>, CombMap> unmarked_maps;
    for_each_blossoming_forest(p, n, [&](const BlossomForest& f) {
      ++sz.forests;
      try {
        const Closure c = close_forest(f);
        if (!keys.insert(canonical_key(c.map)).second) {
          rep.injective = false;
          note("duplicate closure at n = " + std::to_string(n) + " forest #" + std::to_string(sz.forests));
        }
        std::string err = check_closure(c, true);
        if (err.empty() && canonical_key(local_closure(f)) != canonical_key(c.map)) err = "local closure differs";
        if (err.empty() && !(from_valid_labeled(to_valid_labeled(f)) == f)) err = "labeled round trip differs";
        if (err.empty())
          ++sz.valid;
        else
          note("n = " + std::to_string(n) + " forest #" + std::to_string(sz.forests) + ": " + err);
        CombMap bare = c.map;
        bare.set_marked_face(std::nullopt);
        auto key = canonical_key(bare);
        if (plain.insert(key).second && opt.uniqueness) unmarked_maps.emplace(std::move(key), std::move(bare));
      } catch (const std::exception& e) {
        note("n = " + std::to_string(n) + " forest #" + std::to_string(sz.forests) + ": " + e.what());
      }
    });
    sz.closures = static_cast<std::int64_t>(keys.size());
    sz.unmarked = static_cast<std::int64_t>(plain.size());
    if (opt.uniqueness && n <= opt.uniqueness_max_vertices) {
      for (auto& [key, m] : unmarked_maps) {
        // Minimality depends on the marked face; every inner face must give exactly one.
        bool all = true;
        for (face_t f = 0; f < m.num_faces() && all; ++f) {
          if (f == m.root_face()) continue;
          m.set_marked_face(f);
          std::int32_t minimal = 0;
          for (const auto& o : enumerate_3_orientations(m))
            if (is_minimal(m, o)) ++minimal;
          all = minimal == 1;
        }
        if (all)
          ++sz.unique_minimal;
        else
          note("n = " + std::to_string(n) + ": minimal orientation not unique");
      }
    }
    rep.sizes.push_back(sz);
  }
  return rep;
}

}  // namespace polydisk
