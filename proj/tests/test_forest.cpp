#include <gtest/gtest.h>

#include <set>

#include "polydisk/forest.hpp"

using namespace polydisk;

namespace {

CyclicForest bare(std::int32_t p) { return CyclicForest(p, std::vector<std::vector<std::int32_t>>(p)); }

// Rebuild a forest from its height sequence: the parent of a vertex at
// height h is the last earlier vertex at height h - 1 within the same tree.
CyclicForest decode_height(const ProcessTrace& h) {
  const auto n = static_cast<std::int32_t>(h.values.size()) - 1;
  const auto p = static_cast<std::int32_t>(-h.values.back());
  std::vector<std::vector<std::int32_t>> children(n);
  std::vector<std::int32_t> id(n), last_at;
  std::int32_t next_inner = p, tree = 0;
  for (std::int32_t k = 0; k < n; ++k) {
    const auto v = static_cast<std::int32_t>(h.values[k]);
    if (v == -tree) {
      id[k] = tree++;
      last_at.assign(1, id[k]);
      continue;
    }
    const std::int32_t depth = v + tree - 1;
    id[k] = next_inner++;
    children[last_at[depth - 1]].push_back(id[k]);
    last_at.resize(depth);
    last_at.push_back(id[k]);
  }
  return CyclicForest(p, children);
}

// All forests of perimeter p with at most budget inner vertices, built from
// preorder child counts.
void forests_by_counts(std::int32_t p, std::int32_t budget, std::vector<CyclicForest>& out) {
  struct Node {
    std::vector<std::vector<std::int32_t>> children;
    std::vector<std::int32_t> pending;
    std::int32_t used;
  };
  std::vector<Node> stack;
  Node start{std::vector<std::vector<std::int32_t>>(p), {}, 0};
  for (std::int32_t i = p - 1; i >= 0; --i) start.pending.push_back(i);
  stack.push_back(std::move(start));
  while (!stack.empty()) {
    Node cur = std::move(stack.back());
    stack.pop_back();
    if (cur.pending.empty()) {
      out.emplace_back(p, cur.children);
      continue;
    }
    const std::int32_t v = cur.pending.back();
    cur.pending.pop_back();
    for (std::int32_t c = 0; cur.used + c <= budget; ++c) {
      Node nx = cur;
      std::vector<std::int32_t> kids;
      for (std::int32_t j = 0; j < c; ++j) {
        kids.push_back(static_cast<std::int32_t>(nx.children.size()));
        nx.children.emplace_back();
      }
      nx.children[v] = kids;
      for (std::int32_t j = c - 1; j >= 0; --j) nx.pending.push_back(kids[j]);
      nx.used += c;
      stack.push_back(std::move(nx));
    }
  }
}

}  // namespace

TEST(UlamHarris, RootWord) {
  const auto w = ulam_harris(bare(3));
  EXPECT_EQ(format_word(w[0]), "1");
  EXPECT_EQ(format_word(w[2]), "3");
}

TEST(UlamHarris, NestedWord) {
  const CyclicForest f(3, {{}, {}, {3}, {4, 5}, {}, {}});
  EXPECT_EQ(format_word(ulam_harris(f)[5]), "3.1.2");
}

TEST(UlamHarris, WordsAreDistinct) {
  std::vector<CyclicForest> fs;
  for (std::int32_t p = 1; p <= 4; ++p) forests_by_counts(p, 12 - p, fs);
  ASSERT_GT(fs.size(), 1000u);
  for (const auto& f : fs) {
    const auto words = ulam_harris(f);
    std::set<std::vector<std::int32_t>> uniq(words.begin(), words.end());
    EXPECT_EQ(uniq.size(), words.size());
    for (std::int32_t v = 0; v < f.size(); ++v) EXPECT_EQ(words[v].size(), static_cast<std::size_t>(f.depth(v) + 1));
  }
}

TEST(Contour, BareCycle) {
  EXPECT_EQ(contour_exploration(bare(4)), (std::vector<std::int32_t>{0, 1, 2, 3, 0}));
}

TEST(Contour, OneChild) {
  const CyclicForest f(3, {{3}, {}, {}, {}});
  EXPECT_EQ(contour_exploration(f), (std::vector<std::int32_t>{0, 3, 0, 1, 2, 0}));
}

TEST(Contour, StepCountAndLexOrder) {
  std::vector<CyclicForest> fs;
  for (std::int32_t p = 1; p <= 4; ++p) forests_by_counts(p, 10 - p, fs);
  for (const auto& f : fs) {
    const auto beta = contour_exploration(f);
    ASSERT_EQ(static_cast<std::int32_t>(beta.size()) - 1, 2 * f.size() - f.perimeter());
    std::vector<std::int32_t> first_visit;
    std::vector<char> seen(f.size(), 0);
    for (std::size_t i = 0; i + 1 < beta.size(); ++i)
      if (!seen[beta[i]]) {
        seen[beta[i]] = 1;
        first_visit.push_back(beta[i]);
      }
    EXPECT_EQ(first_visit, lex_order(f));
  }
}

TEST(Height, BareTriangle) {
  EXPECT_EQ(height_function(bare(3)).values, (std::vector<std::int64_t>{0, -1, -2, -3}));
}

TEST(Height, ContourOfBareCycle) {
  const auto c = contour_function(bare(5));
  ASSERT_EQ(c.values.size(), 6u);
  EXPECT_EQ(c.values.back(), -5);
}

TEST(Height, ContourDropsAcrossRoots) {
  const CyclicForest f(3, {{3, 4}, {}, {5}, {6}, {}, {}, {}});
  const auto c = contour_function(f);
  EXPECT_EQ(c.values, (std::vector<std::int64_t>{0, 1, 2, 1, 0, 1, 0, -1, -2, -1, -2, -3}));
}

TEST(Height, DecodeRecoversForest) {
  std::vector<CyclicForest> fs;
  for (std::int32_t p = 1; p <= 4; ++p) forests_by_counts(p, 10 - p, fs);
  for (const auto& f : fs) {
    const auto back = decode_height(height_function(f));
    EXPECT_EQ(back.nested(), f.nested());
  }
}

TEST(Trace, ExactInterpolation) {
  ProcessTrace t;
  t.values = {0, 3, -1};
  EXPECT_EQ(t.at(rational(1, 3)), rational(1));
  EXPECT_EQ(t.at(rational(3, 2)), rational(1));
  EXPECT_EQ(t.at(rational(2)), rational(-1));
  EXPECT_THROW(t.at(rational(5, 2)), std::out_of_range);
}

TEST(Trace, HeightScales) {
  auto t = height_function(bare(4));
  set_height_scales(t, 4);
  EXPECT_EQ(t.time_scale, rational(3, 16));
  EXPECT_DOUBLE_EQ(t.rescaled(rational(3, 16)), -0.25);
}

TEST(CyclicInterval, Cases) {
  EXPECT_EQ(cyclic_interval(2, 2, 5), (std::vector<std::int32_t>{2}));
  EXPECT_EQ(cyclic_interval(1, 3, 5), (std::vector<std::int32_t>{1, 2, 3}));
  EXPECT_EQ(cyclic_interval(4, 1, 5), (std::vector<std::int32_t>{4, 5, 0, 1}));
}

TEST(CyclicInterval, IndependentOfRootCorner) {
  const std::int32_t last = 6, n = last + 1;
  for (std::int32_t shift = 0; shift < n; ++shift)
    for (std::int32_t a = 0; a < n; ++a)
      for (std::int32_t b = 0; b < n; ++b) {
        auto iv = cyclic_interval(a, b, last);
        auto moved = cyclic_interval((a + shift) % n, (b + shift) % n, last);
        for (auto& x : iv) x = (x + shift) % n;
        EXPECT_EQ(iv, moved);
      }
}

TEST(Forest, RejectsBadInput) {
  EXPECT_THROW(CyclicForest(0, {}), forest_error);
  EXPECT_THROW(CyclicForest(2, {{2}, {2}, {}}), forest_error);
  EXPECT_THROW(CyclicForest(2, {{}, {}, {}}), forest_error);
}

TEST(Forest, EdgeCountEqualsVertexCount) {
  std::vector<CyclicForest> fs;
  forests_by_counts(3, 5, fs);
  for (const auto& f : fs) {
    std::int32_t edges = f.perimeter();
    for (std::int32_t v = 0; v < f.size(); ++v) edges += f.num_children(v);
    EXPECT_EQ(edges, f.size());
  }
}
