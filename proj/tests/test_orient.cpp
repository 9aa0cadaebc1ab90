#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "polydisk/blossom.hpp"
#include "polydisk/core.hpp"
#include "polydisk/enumerate.hpp"
#include "polydisk/orient.hpp"

using namespace polydisk;

namespace {

Closure center_closure() { return close_forest(fixtures::one_vertex_forest()); }

dart_t inner_out_dart(const Closure& c) {
  for (dart_t d = 0; d < c.map.num_darts(); ++d)
    if (c.orientation.out[d] && c.map.origin(d) >= 3) return d;
  return -1;
}

}  // namespace

TEST(ThreeOrientation, TriangleCenter) {
  const Closure c = center_closure();
  const auto chk = is_3_orientation(c.map, c.orientation);
  EXPECT_TRUE(chk.ok) << chk.message;
  EXPECT_EQ(chk.boundary_sum, 3);
  EXPECT_EQ(out_degrees(c.map, c.orientation)[3], 3);
}

TEST(ThreeOrientation, ReversedEdgeFails) {
  const Closure c = center_closure();
  Orientation o = c.orientation;
  const dart_t d = inner_out_dart(c);
  ASSERT_GE(d, 0);
  o.out[d] = 0;
  o.out[c.map.twin(d)] = 1;
  const auto chk = is_3_orientation(c.map, o);
  EXPECT_FALSE(chk.ok);
  EXPECT_EQ(out_degrees(c.map, o)[3], 2);
}

TEST(ThreeOrientation, BareTriangleVacuous) {
  const Closure c = close_forest(fixtures::bare_forest(3));
  const auto chk = is_3_orientation(c.map, c.orientation);
  EXPECT_TRUE(chk.ok);
  EXPECT_EQ(chk.boundary_sum, 3);
  EXPECT_TRUE(boundary_is_clockwise(c.map, c.orientation));
}

TEST(ThreeOrientation, InconsistentRejected) {
  const Closure c = center_closure();
  Orientation o = c.orientation;
  o.out[0] = o.out[c.map.twin(0)] = 1;
  EXPECT_FALSE(is_3_orientation(c.map, o).ok);
}

TEST(Minimal, ClosureIsMinimal) {
  const Closure c = center_closure();
  EXPECT_TRUE(is_minimal(c.map, c.orientation));
  EXPECT_FALSE(has_ccw_facial_cycle(c.map, c.orientation));
}

TEST(Minimal, CounterclockwiseBoundaryFails) {
  const Closure c = center_closure();
  Orientation o = c.orientation;
  for (dart_t d : c.map.face_darts(c.map.root_face())) std::swap(o.out[d], o.out[c.map.twin(d)]);
  EXPECT_FALSE(boundary_is_clockwise(c.map, o));
  EXPECT_FALSE(is_minimal(c.map, o));
}

TEST(Minimal, TriangleCenterHasOneOrientation) {
  const Closure c = center_closure();
  const auto all = enumerate_3_orientations(c.map);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0].out, c.orientation.out);
}

TEST(Minimal, ReversedInnerCycleFails) {
  // Reversing a directed cycle keeps out-degrees and turns it counterclockwise.
  std::int32_t found = 0;
  for_each_blossoming_forest(4, 7, [&](const BlossomForest& f) {
    if (found >= 10) return;
    const Closure c = close_forest(f);
    const auto boundary = c.map.boundary_mask();
    for_each_directed_cycle(c.map, c.orientation, [&](const std::vector<dart_t>& cyc) {
      bool inner = false;
      for (dart_t d : cyc) inner = inner || !boundary[c.map.origin(d)];
      if (!inner) return true;
      Orientation o = c.orientation;
      for (dart_t d : cyc) std::swap(o.out[d], o.out[c.map.twin(d)]);
      EXPECT_TRUE(is_3_orientation(c.map, o).ok);
      EXPECT_FALSE(is_minimal(c.map, o));
      ++found;
      return false;
    });
  });
  EXPECT_EQ(found, 10);
}

TEST(Minimal, UniqueOnEnumeratedMaps) {
  EnumOptions opt;
  opt.uniqueness = true;
  for (std::int32_t p : {3, 4}) {
    const auto rep = enumerate_and_check(p, 6, opt);
    EXPECT_TRUE(rep.ok());
    for (const auto& s : rep.sizes) EXPECT_EQ(s.unique_minimal, s.unmarked) << "p=" << p << " n=" << s.n;
  }
}

TEST(Minimal, FacialCheckAgreesOnSmallClosures) {
  std::int32_t seen = 0;
  for_each_blossoming_forest(4, 6, [&](const BlossomForest& f) {
    const Closure c = close_forest(f);
    EXPECT_EQ(is_minimal(c.map, c.orientation), !has_ccw_facial_cycle(c.map, c.orientation));
    ++seen;
  });
  EXPECT_GT(seen, 0);
}

TEST(Simplicity, LoopedMapHasNoThreeOrientation) {
  Rng rng(5);
  std::int32_t tested = 0;
  for (int it = 0; it < 20000 && tested < 5; ++it) {
    const Bol2Sample s = sample_bol2(3, rng);
    if (s.map.num_vertices() > 8 || classify(s.map, 3) != tri_type::II) continue;
    EXPECT_TRUE(enumerate_3_orientations(s.map).empty());
    ++tested;
  }
  EXPECT_EQ(tested, 5);
}

TEST(Simplicity, EnumeratedClosuresAreTypeThree) {
  for_each_blossoming_forest(3, 6, [&](const BlossomForest& f) {
    const Closure c = close_forest(f);
    EXPECT_EQ(classify(c.map, 3), tri_type::III);
    EXPECT_FALSE(enumerate_3_orientations(c.map, 1).empty());
  });
}
