#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "polydisk/blossom.hpp"
#include "polydisk/enumerate.hpp"
#include "polydisk/exact.hpp"
#include "polydisk/io.hpp"
#include "polydisk/sampler.hpp"
#include "polydisk/stats.hpp"

using namespace polydisk;

namespace {

// |x - target| within k standard errors of a mean of n draws with variance var.
void expect_mean(double mean, double target, double var, double n, double k = 3.0) {
  EXPECT_NEAR(mean, target, k * std::sqrt(var / n));
}

}  // namespace

TEST(Offspring, GeometricMean) {
  Rng rng(1);
  const int n = 1'000'000;
  double s = 0;
  for (int i = 0; i < n; ++i) s += sample_G(rng);
  // Var[G] = (1/4)/(3/4)^2 = 4/9.
  expect_mean(s / n, 1.0 / 3.0, 4.0 / 9.0, n);
}

TEST(Offspring, BMeanAndVariance) {
  Rng rng(2);
  const int n = 1'000'000;
  std::vector<double> x(n);
  for (auto& v : x) v = sample_B(rng);
  const MeanEstimate m = mean_estimate(x);
  expect_mean(m.mean, 1.0, 4.0 / 3.0, n);
  double m4 = 0;
  for (double v : x) m4 += std::pow(v - 1.0, 4);
  const double var = m.sd * m.sd;
  EXPECT_NEAR(var, 4.0 / 3.0, 3 * std::sqrt((m4 / n - var * var) / n));
}

TEST(Offspring, BLawMatchesBinomialWeights) {
  // P[B = k] = C(k+2, 2) P[G = k] / E[C(G+2, 2)], the normalizer summed directly.
  double gamma = 0;
  for (int k = 0; k < 200; ++k) gamma += (k + 2) * (k + 1) / 2.0 * 0.75 * std::pow(0.25, k);
  EXPECT_NEAR(gamma, 16.0 / 9.0, 1e-12);
  Rng rng(3);
  const int n = 400'000;
  std::vector<std::int64_t> counts(8, 0);
  std::vector<double> prob(8);
  for (int k = 0; k < 8; ++k) prob[k] = (k + 2) * (k + 1) / 2.0 * 0.75 * std::pow(0.25, k) / gamma;
  for (int i = 0; i < n; ++i) {
    const auto b = sample_B(rng);
    if (b < 8) ++counts[b];
  }
  EXPECT_GT(chi_square(counts, prob, n).p_value, 0.001);
}

TEST(Offspring, GSumMatchesRepeatedDraws) {
  Rng rng(4);
  const int n = 100'000;
  for (std::int64_t r : {5, 100}) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += static_cast<double>(sample_G_sum(rng, r));
    expect_mean(s / n, r / 3.0, r * 4.0 / 9.0, n);
  }
  EXPECT_EQ(sample_G_sum(rng, 0), 0);
}

TEST(BlossomTree, SingleRootProbability) {
  Rng rng(5);
  const int n = 1'000'000;
  int single = 0, one_leaf = 0;
  for (int i = 0; i < n; ++i) {
    try {
      const auto t = sample_blossom_tree(rng, 2);
      if (t.size() == 1) ++single;
      if (t.size() == 2 && t.nodes[0].kids == 1) ++one_leaf;
    } catch (const sampler_error&) {
    }
  }
  const double q1 = 0.75, q2 = 81.0 / 1024.0;
  EXPECT_NEAR(single / double(n), q1, 3 * std::sqrt(q1 * (1 - q1) / n));
  EXPECT_NEAR(one_leaf / double(n), q2, 3 * std::sqrt(q2 * (1 - q2) / n));
}

TEST(BlossomTree, StemsOnNonRootVertices) {
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const auto t = sample_blossom_tree(rng);
    EXPECT_EQ(t.nodes[0].stem_a, 0);
    EXPECT_EQ(t.nodes[0].stem_b, 0);
    for (std::int32_t k = 1; k < t.size(); ++k) {
      const auto& nd = t.nodes[k];
      EXPECT_LE(0, nd.stem_a);
      EXPECT_LE(nd.stem_a, nd.stem_b);
      EXPECT_LE(nd.stem_b, nd.kids);
      if (nd.kids == 0) {
        EXPECT_EQ(nd.stem_b, 0);
      }
    }
  }
}

TEST(BlossomTree, StemPairsUniform) {
  Rng rng(7);
  const int n = 120'000;
  std::map<std::pair<int, int>, std::int64_t> hist;
  for (int i = 0; i < n; ++i) ++hist[sample_stem_pair(rng, 2)];
  ASSERT_EQ(hist.size(), 6u);  // C(4, 2)
  std::vector<std::int64_t> counts;
  for (const auto& [k, c] : hist) counts.push_back(c);
  EXPECT_GT(chi_square(counts, std::vector<double>(6, 1.0 / 6), n).p_value, 0.001);
}

TEST(BlossomTree, NodeCapEnforced) {
  Rng rng(8);
  bool thrown = false;
  for (int i = 0; i < 1000 && !thrown; ++i) {
    try {
      sample_blossom_tree(rng, 2);
    } catch (const sampler_error& e) {
      EXPECT_EQ(e.code(), sampler_errc::node_cap_exceeded);
      thrown = true;
    }
  }
  EXPECT_TRUE(thrown);
}

TEST(Bridge, TriangleIsForced) {
  Rng rng(9);
  const Bridge br = sample_bridge(3, rng);
  EXPECT_EQ(br.X, (std::vector<std::int8_t>{-1, -1, -1}));
  EXPECT_EQ(br.Z, (std::vector<std::int32_t>{0, 0, 0}));
}

TEST(Bridge, SquareTuplesUniform) {
  // Five steps with sum -3 ending in a down-step: the up-step sits in one of 4 slots.
  Rng rng(10);
  const int n = 80'000;
  std::map<std::vector<std::int8_t>, std::int64_t> hist;
  for (int i = 0; i < n; ++i) ++hist[sample_bridge(4, rng).X];
  ASSERT_EQ(hist.size(), 4u);
  std::vector<std::int64_t> counts;
  for (const auto& [x, c] : hist) {
    EXPECT_EQ(x.back(), -1);
    counts.push_back(c);
  }
  EXPECT_GT(chi_square(counts, std::vector<double>(4, 0.25), n).p_value, 0.001);
}

TEST(Bridge, EndpointsAndStemCounts) {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const std::int32_t p = 3 + static_cast<std::int32_t>(rng.below(60));
    const Bridge br = sample_bridge(p, rng);
    ASSERT_EQ(static_cast<std::int32_t>(br.b.size()), 2 * p - 2);
    EXPECT_EQ(br.b.front(), 0);
    EXPECT_EQ(br.b.back(), -3);
    ASSERT_EQ(static_cast<std::int32_t>(br.Z.size()), p);
    std::int32_t sum = 0;
    for (auto z : br.Z) sum += z;
    EXPECT_EQ(sum, p - 3);
  }
}

TEST(Bridge, MidpointVariance) {
  Rng rng(12);
  const std::int32_t p = 512;
  const int n = 20'000;
  std::vector<double> x(n);
  for (auto& v : x) v = sample_bridge(p, rng).b[(2 * p - 3) / 2];
  const MeanEstimate m = mean_estimate(x);
  EXPECT_NEAR(m.sd * m.sd * 3.0 / (2 * p), 0.75, 0.75 * 0.05);
}

TEST(Assemble, TrivialTreesGiveBareCycle) {
  Rng rng(13);
  const Bridge br = sample_bridge(3, rng);
  const std::vector<BlossomTree> trees(3, BlossomTree{{BlossomTree::Node{}}});
  EXPECT_TRUE(assemble_forest(3, br, trees) == fixtures::bare_forest(3));
}

TEST(Assemble, ArityMismatch) {
  Rng rng(14);
  const Bridge br = sample_bridge(4, rng);
  const std::vector<BlossomTree> trees(3, BlossomTree{{BlossomTree::Node{}}});
  try {
    assemble_forest(4, br, trees);
    FAIL() << "expected an exception";
  } catch (const sampler_error& e) {
    EXPECT_EQ(e.code(), sampler_errc::arity_mismatch);
  }
}

TEST(Assemble, BoundaryCornerLabelsFollowBridge) {
  Rng rng(15);
  for (int it = 0; it < 1000; ++it) {
    const std::int32_t p = 3 + static_cast<std::int32_t>(rng.below(48));
    const Bridge br = sample_bridge(p, rng);
    std::vector<BlossomTree> trees;
    std::int64_t total = p;
    try {
      for (std::int32_t i = 0; i < 2 * p - 3; ++i) {
        trees.push_back(sample_blossom_tree(rng, 500));
        total += trees.back().size() - 1;
      }
    } catch (const sampler_error&) {
      continue;
    }
    const BlossomForest f = assemble_forest(p, br, trees);
    ASSERT_EQ(f.base.size(), total);
    const LabeledForest L = label_corners(f);
    // Corners at boundary vertices in contour order, grouped by boundary
    // corner: each tree root with k children splits its corner in k + 1.
    std::vector<std::int32_t> boundary_labels;
    for (std::int32_t k = 0; k < L.n_corners; ++k) {
      if (L.is_blossom_corner(k) || L.corner_vertex[k] >= p) continue;
      boundary_labels.push_back(L.label[k]);
    }
    std::size_t pos = 0;
    for (std::int32_t i = 0; i < 2 * p - 3; ++i) {
      for (std::int32_t c = 0; c <= trees[i].nodes[0].kids; ++c) {
        ASSERT_LT(pos, boundary_labels.size());
        EXPECT_EQ(boundary_labels[pos++], br.b[i]) << "p=" << p << " corner " << i;
      }
    }
    EXPECT_EQ(pos, boundary_labels.size());
  }
}

TEST(Forest, SamplesAreValidClosures) {
  Rng rng(16);
  for (int it = 0; it < 200; ++it) {
    const std::int32_t p = 3 + static_cast<std::int32_t>(rng.below(20));
    const auto f = sample_forest_bounded(p, rng, 2000);
    if (!f) continue;
    const Closure c = close_forest(*f);
    const std::int32_t n = c.map.num_vertices();
    EXPECT_EQ(classify(c.map, p), tri_type::III);
    EXPECT_EQ(c.map.num_edges(), 3 * n - p - 3);
    EXPECT_EQ(c.map.num_faces(), 2 * n - p - 1);
    EXPECT_TRUE(c.map.marked_face().has_value());
    EXPECT_FALSE(has_ccw_facial_cycle(c.map, c.orientation));
  }
}

TEST(Forest, BoundedMatchesUnbounded) {
  // Both samplers consume the stream in the same order.
  std::int32_t agreed = 0;
  for (std::uint64_t s = 0; s < 300; ++s) {
    Rng a(s), b(s);
    std::optional<BlossomForest> f;
    try {
      f = sample_forest(5, a, 5000);
    } catch (const sampler_error&) {
    }
    const auto g = sample_forest_bounded(5, b, 5000);
    ASSERT_EQ(f.has_value(), g.has_value()) << "seed " << s;
    if (f) {
      EXPECT_TRUE(*f == *g);
      ++agreed;
    }
  }
  EXPECT_GT(agreed, 250);
}

TEST(Forest, LexPrefixMatchesFullForest) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const std::int32_t p = 3 + static_cast<std::int32_t>(s % 17);
    Rng a(s, 1), b(s, 1);
    const BlossomForest f = sample_forest(p, a);
    const LexPrefix pre = sample_lex_prefix(p, b, f.base.size() + 5);
    EXPECT_TRUE(pre.complete);
    const ValidLabeledForest v = to_valid_labeled(f);
    std::vector<std::int32_t> want;
    for (std::int32_t u : lex_order(f.base)) want.push_back(v.X[u]);
    EXPECT_EQ(pre.labels, want) << "seed " << s;
  }
}

TEST(Forest, SizeOnlyMatchesFullSampler) {
  // Same law of |F*_p|: compare the first few size cells at p = 4.
  Rng a(17), b(18);
  const int n = 60'000;
  std::vector<double> x, y;
  for (int i = 0; i < n; ++i) {
    x.push_back(static_cast<double>(std::min<std::int64_t>(sample_forest_size(4, a), 40)));
    const auto f = sample_forest_bounded(4, b, 40);
    y.push_back(f ? static_cast<double>(f->base.size()) : 40.0);
  }
  EXPECT_GT(ks_two_sample(x, y).p_value, 0.001);
}

TEST(Marked, TriangleProbability) {
  // (3/4)^3: all three trees trivial.
  Rng rng(19);
  const int n = 100'000;
  int tri = 0;
  std::map<std::vector<std::int32_t>, int> four;
  for (int i = 0; i < n; ++i) {
    const auto f = sample_forest_bounded(3, rng, 4);
    if (!f) continue;
    if (f->base.size() == 3) {
      ++tri;
    } else {
      ++four[canonical_key(close_forest(*f).map)];
    }
  }
  const double q = 27.0 / 64.0;
  EXPECT_NEAR(tri / double(n), q, 3 * std::sqrt(q * (1 - q) / n));
  EXPECT_DOUBLE_EQ(static_cast<double>(marked_probability(3, 0)), q);
  // The three marked versions of the one-inner-vertex map are equally likely.
  ASSERT_EQ(four.size(), 3u);
  std::vector<std::int64_t> counts;
  std::int64_t total = 0;
  for (const auto& [k, c] : four) {
    counts.push_back(c);
    total += c;
  }
  EXPECT_GT(chi_square(counts, std::vector<double>(3, 1.0 / 3), total).p_value, 0.001);
}

TEST(Bol3, RejectionMatchesExactLawAtTriangle) {
  // Unmarked Bol_III(3): P[m] = rho^n / Z, Z = (32/27) rho^3, checked on the
  // enumerated maps with n <= 6 against the closed-form count.
  std::map<std::vector<std::int32_t>, double> exact;
  const double rho = 27.0 / 256.0;
  for (std::int32_t n = 3; n <= 6; ++n) {
    std::set<std::vector<std::int32_t>> keys;
    for_each_blossoming_forest(3, n, [&](const BlossomForest& f) {
      CombMap m = close_forest(f).map;
      m.set_marked_face(std::nullopt);
      keys.insert(canonical_key(m));
    });
    EXPECT_EQ(static_cast<std::int64_t>(keys.size()), static_cast<std::int64_t>(simple_triangulation_count(n - 3, 3)));
    for (const auto& k : keys) exact[k] = std::pow(rho, n);
  }
  const double Z = 32.0 / 27.0 * std::pow(rho, 3);
  double partial = 0;
  for (std::int32_t inner = 0; inner < 400; ++inner) {
    // log of 2 (2p-3)! (4n+2p-5)! / ((p-1)! (p-3)! n! (3n+2p-3)!) at p = 3
    const double lc = std::log(2.0) + std::lgamma(4.0) + std::lgamma(4.0 * inner + 2) - std::lgamma(3.0) -
                      std::lgamma(inner + 1.0) - std::lgamma(3.0 * inner + 4);
    if (inner < 20) {
      const double exact_count = static_cast<double>(simple_triangulation_count(inner, 3));
      EXPECT_NEAR(std::exp(lc), exact_count, 1e-6 * exact_count);
    }
    partial += std::exp(lc + (inner + 3) * std::log(rho));
  }
  EXPECT_LT(partial, Z);
  EXPECT_NEAR(partial / Z, 1.0, 1e-3);
  Rng rng(20);
  const int n = 100'000;
  std::map<std::vector<std::int32_t>, std::int64_t> hist;
  for (int i = 0; i < n; ++i) {
    CombMap m = sample_bol3(3, rng).closure.map;
    if (m.num_vertices() > 6) continue;
    m.set_marked_face(std::nullopt);
    ++hist[canonical_key(m)];
  }
  std::vector<std::int64_t> obs;
  std::vector<double> prob;
  for (const auto& [k, w] : exact) {
    obs.push_back(hist.count(k) ? hist[k] : 0);
    prob.push_back(w / Z);
  }
  EXPECT_EQ(hist.size(), exact.size());
  EXPECT_GT(chi_square(obs, prob, n).p_value, 0.001);
}

TEST(Bol3, ImportanceWeightsRecoverVertexWeights) {
  // Weighted frequencies of the maps at p = 3 with n <= 5 are proportional to rho^n.
  Rng rng(21);
  const int n = 200'000;
  std::map<std::int32_t, double> w;
  for (int i = 0; i < n; ++i) {
    const auto f = sample_forest_bounded(3, rng, 5);
    if (!f) continue;
    const std::int32_t v = f->base.size();
    w[v] += 1.0 / static_cast<double>(inner_faces(v, 3));
  }
  const double rho = 27.0 / 256.0;
  // One map with 3 vertices, one with 4, three with 5.
  EXPECT_NEAR(w[4] / w[3], rho, 0.05 * rho);
  EXPECT_NEAR(w[5] / w[3], 3 * rho * rho, 0.1 * 3 * rho * rho);
}

TEST(Bol3, ImportanceModeWeight) {
  Rng rng(22);
  for (int i = 0; i < 50; ++i) {
    const auto wc = sample_bol3(5, rng, bol_mode::importance, 1'000'000);
    EXPECT_DOUBLE_EQ(wc.weight, 1.0 / static_cast<double>(inner_faces(wc.closure.map.num_vertices(), 5)));
  }
}

TEST(Bol3, SizeOnlyMatchesFullRejection) {
  Rng a(23), b(24);
  const int n = 20'000;
  std::vector<double> x, y;
  for (int i = 0; i < n; ++i) {
    x.push_back(static_cast<double>(sample_bol3_size(6, a)));
    y.push_back(static_cast<double>(sample_bol3(6, b).closure.map.num_vertices()));
  }
  EXPECT_GT(ks_two_sample(x, y).p_value, 0.001);
}

TEST(Bol3, BadPerimeter) {
  Rng rng(25);
  try {
    sample_bridge(2, rng);
    FAIL() << "expected an exception";
  } catch (const sampler_error& e) {
    EXPECT_EQ(e.code(), sampler_errc::bad_perimeter);
  }
}

TEST(Determinism, SameSeedSameBytes) {
  for (std::uint64_t s : {1ull, 99ull}) {
    Rng a(s), b(s);
    const auto ca = sample_bol3(12, a).closure;
    const auto cb = sample_bol3(12, b).closure;
    EXPECT_EQ(serialize_map(ca.map, &ca.orientation), serialize_map(cb.map, &cb.orientation));
  }
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_EQ(mix_seed(7, 3), mix_seed(7, 3));
}
