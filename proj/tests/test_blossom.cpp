#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "polydisk/blossom.hpp"
#include "polydisk/io.hpp"

using namespace polydisk;

TEST(Labels, BareTriangle) {
  const auto L = label_corners(fixtures::bare_forest(3));
  EXPECT_EQ(L.label, (std::vector<std::int32_t>{0, -1, -2, -3}));
}

TEST(Labels, OneInnerVertex) {
  const auto L = label_corners(fixtures::one_vertex_forest());
  EXPECT_EQ(L.label, (std::vector<std::int32_t>{0, -1, -1, 0, 0, 1, 0, -1, -2, -3}));
  // Proper corners of v in contour order: 1, 3, 5.
  EXPECT_EQ(L.corner_vertex[1], 3);
  EXPECT_EQ(L.corner_vertex[3], 3);
  EXPECT_EQ(L.corner_vertex[5], 3);
  EXPECT_EQ(L.X(3), -1);
  EXPECT_EQ(L.X(0), 0);
}

TEST(Labels, InvalidBlossomingRejected) {
  const auto f = BlossomForest::make(CyclicForest(3, {{3}, {}, {}, {}}), {{}, {}, {}, {0}});
  try {
    label_corners(f);
    FAIL() << "expected an exception";
  } catch (const blossom_error& e) {
    EXPECT_EQ(e.code(), blossom_errc::invalid_blossoming);
  }
  const auto g = BlossomForest::make(CyclicForest(4, std::vector<std::vector<std::int32_t>>(4)), {{0, 0}, {}, {}, {}});
  EXPECT_THROW(validate_blossoming(g), blossom_error);
}

TEST(Successor, OneInnerVertex) {
  const auto L = label_corners(fixtures::one_vertex_forest());
  const auto b1 = successor(L, 2);
  EXPECT_EQ(b1.corner, 8);
  EXPECT_EQ(b1.type, successor_type::first);
  EXPECT_EQ(L.corner_vertex[8], 2);
  const auto b2 = successor(L, 4);
  EXPECT_EQ(b2.corner, 7);
  EXPECT_EQ(b2.type, successor_type::first);
  EXPECT_EQ(L.corner_vertex[7], 1);
}

TEST(Successor, SecondTypeWraps) {
  // A stem at rho_4 carries the final minimum -3.
  const auto f = BlossomForest::make(CyclicForest(4, std::vector<std::vector<std::int32_t>>(4)), {{}, {}, {}, {0}});
  const auto L = label_corners(f);
  const auto s = successors(L);
  bool saw_second = false;
  for (std::int32_t k = 0; k < L.n_corners; ++k) {
    if (s[k].type == successor_type::first) {
      EXPECT_EQ(L.label[s[k].corner], L.label[k] - 1);
      EXPECT_GT(s[k].corner, k);
    } else {
      saw_second = true;
      EXPECT_EQ(L.label[s[k].corner], L.label[k] + 2);
      EXPECT_LT(s[k].corner, k);
    }
  }
  EXPECT_TRUE(saw_second);
}

TEST(VStar, BareTriangle) {
  const auto L = label_corners(fixtures::bare_forest(3));
  const auto v = find_vstar(L);
  EXPECT_EQ(v.l_min, -3);
  EXPECT_EQ(v.k_min, 3);
  EXPECT_EQ(v.v_star, 0);
}

TEST(VStar, OneInnerVertex) {
  const auto L = label_corners(fixtures::one_vertex_forest());
  const auto v = find_vstar(L);
  EXPECT_EQ(v.v_star, 0);
  EXPECT_EQ(v.k_min, 9);
  EXPECT_EQ(L.corner_vertex[v.k_min1], 2);
  EXPECT_EQ(L.label[v.k_min1], -2);
  EXPECT_EQ(v.k_min2, 1);
  EXPECT_EQ(L.corner_vertex[v.k_min2], 3);
}

TEST(Closure, BareTriangle) {
  const auto c = close_forest(fixtures::bare_forest(3));
  auto expect = fixtures::triangle();
  expect.set_marked_face(1 - expect.root_face());
  EXPECT_EQ(canonical_key(c.map), canonical_key(expect));
  EXPECT_EQ(classify(c.map, 3), tri_type::III);
}

TEST(Closure, OneInnerVertex) {
  const auto c = close_forest(fixtures::one_vertex_forest());
  auto expect = fixtures::triangle_center();
  expect.set_marked_face(expect.face(4));
  EXPECT_EQ(canonical_key(c.map), canonical_key(expect));
  // The marked face holds the three corners returned by find_vstar.
  const face_t mf = *c.map.marked_face();
  for (std::int32_t k : {c.vstar.k_min, c.vstar.k_min1, c.vstar.k_min2})
    EXPECT_EQ(c.map.face(c.forest.corner_dart[k]), mf) << "corner " << k;
}

TEST(Closure, EulerCounts) {
  const auto c = close_forest(fixtures::one_vertex_forest());
  const std::int32_t n = c.map.num_vertices(), p = 3;
  EXPECT_EQ(c.map.num_edges(), 3 * n - p - 3);
  EXPECT_EQ(c.map.num_faces(), 2 * n - p - 1);
}

TEST(Closure, OrientationIsMinimal) {
  const auto c = close_forest(fixtures::one_vertex_forest());
  const auto chk = is_3_orientation(c.map, c.orientation);
  EXPECT_TRUE(chk.ok) << chk.message;
  EXPECT_EQ(chk.boundary_sum, 3);
  EXPECT_TRUE(is_minimal(c.map, c.orientation));
}

TEST(Closure, EdgeQuadruples) {
  const auto c = close_forest(fixtures::one_vertex_forest());
  for (dart_t d = 0; d < c.map.num_darts(); ++d) {
    if (!c.orientation.out[d] || c.cls[d] == edge_class::boundary) continue;
    const dart_t r = c.map.twin(d);
    const std::int32_t a = c.lam_left[d], b = c.lam_right(r), x = c.lam_left[r], y = c.lam_right(d);
    const bool tree = b == a - 1 && x == a - 1 && y == a - 2;
    const bool first = b == a - 1 && x == a - 1 && y == a + 1;
    const bool second = b == a + 2 && x == a + 2 && y == a + 1;
    EXPECT_EQ(tree + first + second, 1) << "dart " << d;
    if (c.cls[d] == edge_class::tree) {
      EXPECT_TRUE(tree);
    } else if (c.cls[d] == edge_class::closure_first) {
      EXPECT_TRUE(first);
    } else {
      EXPECT_TRUE(second);
    }
  }
}

TEST(Closure, LocalClosureAgrees) {
  const auto wrap = BlossomForest::make(CyclicForest(4, std::vector<std::vector<std::int32_t>>(4)), {{}, {}, {}, {0}});
  for (const auto& f : {fixtures::bare_forest(3), fixtures::one_vertex_forest(), fixtures::bare_forest(6), wrap}) {
    const auto c = close_forest(f);
    EXPECT_EQ(canonical_key(local_closure(f)), canonical_key(c.map));
  }
}

TEST(ValidLabeled, RoundTrip) {
  for (const auto& f : {fixtures::bare_forest(3), fixtures::one_vertex_forest(), fixtures::bare_forest(6)}) {
    const auto v = to_valid_labeled(f);
    check_valid_labeled(v);
    EXPECT_TRUE(from_valid_labeled(v) == f);
  }
}

TEST(ValidLabeled, BoundaryStemShiftAtRhoP) {
  const auto v = to_valid_labeled(fixtures::bare_forest(6));
  std::int32_t total = 0;
  for (std::int32_t i = 0; i < 6; ++i) total += v.boundary_stems(i);
  EXPECT_EQ(v.boundary_stems(0), 3);
  EXPECT_EQ(total, 3);
}

TEST(ValidLabeled, EqualEndLabelsRejected) {
  ValidLabeledForest v{CyclicForest(3, std::vector<std::vector<std::int32_t>>(3)), {0, -1, 0}};
  try {
    check_valid_labeled(v);
    FAIL() << "expected an exception";
  } catch (const blossom_error& e) {
    EXPECT_EQ(e.code(), blossom_errc::not_validly_labeled);
  }
}

TEST(ForestJson, RoundTrip) {
  const auto f = fixtures::one_vertex_forest();
  const auto j = forest_to_json(f);
  EXPECT_EQ(j.dump(), R"({"perimeter":3,"trees":[[[]],[],[]],"stem_positions":[[],[0,0],[],[]],"boundary_stem_counts":[0,0,0]})");
  EXPECT_TRUE(forest_from_json(j) == f);
  EXPECT_THROW(forest_from_json(ojson::parse(R"({"perimeter":3,"trees":[[],[],[]],"stem_positions":[[0],[],[]],"boundary_stem_counts":[0,0,0]})")),
               parse_error);
}
