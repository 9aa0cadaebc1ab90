#pragma once
// Sample records, the verification runner and the statistics experiments
// shared by the command-line tool and the acceptance suite.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include "polydisk/blossom.hpp"
#include "polydisk/checks.hpp"
#include "polydisk/continuum.hpp"
#include "polydisk/core.hpp"
#include "polydisk/enumerate.hpp"
#include "polydisk/exact.hpp"
#include "polydisk/io.hpp"
#include "polydisk/map.hpp"
#include "polydisk/metric.hpp"
#include "polydisk/rng.hpp"
#include "polydisk/sampler.hpp"
#include "polydisk/stats.hpp"

namespace polydisk {

// Runs fn(i) for i in [0, n) on up to `threads` workers; each index is
// handled by exactly one worker, so results stored by index are ordered.
inline void parallel_for(std::int64_t n, std::int32_t threads, const std::function<void(std::int64_t)>& fn) {
  const std::int64_t workers = std::clamp<std::int64_t>(threads, 1, std::max<std::int64_t>(1, n));
  if (workers == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::int64_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::int64_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---- sample records ---------------------------------------------------------

enum class sample_kind { marked, bol3, bol2, two_gon };

inline std::string to_string(sample_kind k) {
  switch (k) {
    case sample_kind::marked: return "iii-marked";
    case sample_kind::bol3: return "iii";
    case sample_kind::bol2: return "ii";
    case sample_kind::two_gon: return "ii-2gon";
  }
  return "?";
}

inline sample_kind sample_kind_from(const std::string& s) {
  if (s == "iii-marked") return sample_kind::marked;
  if (s == "iii") return sample_kind::bol3;
  if (s == "ii") return sample_kind::bol2;
  if (s == "ii-2gon") return sample_kind::two_gon;
  throw parse_error("unknown sample type '" + s + "'");
}

struct SampleRecord {
  std::int64_t index = 0;
  std::uint64_t seed = 0;
  sample_kind kind = sample_kind::marked;
  std::int32_t p = 0;
  CombMap map;
  std::optional<Orientation> orientation;
  std::optional<BlossomForest> forest;
  double weight = 1.0;  // importance weight 1/N in importance mode
};

inline SampleRecord sample_record(sample_kind kind, std::int32_t p, std::uint64_t base_seed, std::int64_t index,
                                  bol_mode mode = bol_mode::rejection) {
  SampleRecord r;
  r.index = index;
  r.seed = mix_seed(base_seed, static_cast<std::uint64_t>(index));
  r.kind = kind;
  r.p = p;
  Rng rng(r.seed);
  switch (kind) {
    case sample_kind::marked: {
      BlossomForest f = sample_forest(p, rng);
      Closure c = close_forest(f);
      r.map = c.map;
      r.orientation = c.orientation;
      r.forest = std::move(f);
      break;
    }
    case sample_kind::bol3: {
      BlossomForest f = mode == bol_mode::importance ? sample_forest(p, rng) : sample_bol3_forest(p, rng);
      r.map = close_forest(f).map;
      r.map.set_marked_face(std::nullopt);
      if (mode == bol_mode::importance) r.weight = 1.0 / static_cast<double>(inner_faces(r.map.num_vertices(), p));
      r.forest = std::move(f);
      break;
    }
    case sample_kind::bol2: r.map = sample_bol2(p, rng).map; break;
    case sample_kind::two_gon: r.map = sample_bol2_2gon(rng); break;
  }
  return r;
}

inline ojson record_to_json(const SampleRecord& r) {
  ojson j;
  j["index"] = r.index;
  j["seed"] = r.seed;
  j["type"] = to_string(r.kind);
  j["p"] = r.p;
  j["weight"] = r.weight;
  j["map"] = map_to_json(r.map, r.orientation ? &*r.orientation : nullptr);
  if (r.forest)
    j["forest"] = forest_to_json(*r.forest);
  else
    j["forest"] = nullptr;
  return j;
}

inline SampleRecord record_from_json(const ojson& j) {
  SampleRecord r;
  try {
    r.index = j.at("index").get<std::int64_t>();
    r.seed = j.value("seed", std::uint64_t{0});
    r.kind = sample_kind_from(j.at("type").get<std::string>());
    r.p = j.at("p").get<std::int32_t>();
    r.weight = j.value("weight", 1.0);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(e.what());
  }
  MapRecord m = map_from_json(j.at("map"));
  r.map = std::move(m.map);
  r.orientation = std::move(m.orientation);
  if (j.contains("forest") && !j.at("forest").is_null()) r.forest = forest_from_json(j.at("forest"));
  return r;
}

// Reads JSONL records; blank lines are skipped, errors carry the line number.
inline std::vector<SampleRecord> read_records(std::istream& in) {
  std::vector<SampleRecord> out;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(ojson::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw parse_error("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const parse_error& e) {
      throw parse_error("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::exception& e) {
      throw parse_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// ---- deterministic checks ---------------------------------------------------

inline std::string check_lmp(const Closure& c) {
  for (dart_t d = 0; d < c.map.num_darts(); ++d) {
    if (!c.orientation.out[d]) continue;
    const LmpPath P = modified_lmp(c, d);
    if (P.length() != P.formula)
      return "dart " + std::to_string(d) + ": length " + std::to_string(P.length()) + " formula " + std::to_string(P.formula);
    if (!P.successor_identity) return "dart " + std::to_string(d) + ": successor identity fails";
    if (P.second_type_steps > 1) return "dart " + std::to_string(d) + ": several second-type successors";
    if (P.vertices.back() != c.vstar.v_star) return "dart " + std::to_string(d) + ": path misses v*";
  }
  return {};
}

// Two-point bounds are checked on every pair when the map has at most
// pair_max_vertices vertices.
inline std::string check_bounds(const Closure& c, std::int32_t pair_max_vertices = 60) {
  const CombMap& m = c.map;
  const auto dist = bfs_distances(m, c.vstar.v_star);
  for (vertex_t u = 0; u < m.num_vertices(); ++u)
    if (bound_dist_to_vstar(c, u) < dist[u]) return "distance bound to v* fails at vertex " + std::to_string(u);
  if (m.num_vertices() > pair_max_vertices) return {};
  const TwoPointBound B(c);
  for (vertex_t u = 0; u < m.num_vertices(); ++u) {
    const auto du = bfs_distances(m, u);
    for (vertex_t v = 0; v < m.num_vertices(); ++v) {
      const auto b = B(u, v);
      if (!b) return "no start edge for vertex pair " + std::to_string(u) + "," + std::to_string(v);
      if (*b < du[v]) return "two-point bound fails at " + std::to_string(u) + "," + std::to_string(v);
      if (B(v, u) != b) return "two-point bound not symmetric at " + std::to_string(u) + "," + std::to_string(v);
    }
  }
  return {};
}

struct ExcursionTally {
  std::int64_t audits = 0, skipped = 0;
  std::array<std::int64_t, 9> n{};
};

// Audits BFS inner geodesics from `starts` evenly spaced inner vertices.
inline std::string check_excursions(const Closure& c, std::int32_t starts = 5, ExcursionTally* tally = nullptr) {
  const CombMap& m = c.map;
  const std::int32_t p = c.forest.p;
  const std::int32_t inner = m.num_vertices() - p;
  if (inner <= 0) return {};
  const std::int32_t step = std::max(1, inner / std::max(1, starts));
  for (vertex_t u = p; u < m.num_vertices(); u += step) {
    dart_t e = -1;
    for (dart_t d : m.rotation(u))
      if (c.orientation.out[d]) {
        e = d;
        break;
      }
    const auto q = e < 0 ? std::nullopt : inner_geodesic_after(c, e);
    if (!q) {
      if (tally) ++tally->skipped;
      continue;
    }
    ExcursionAudit A;
    try {
      A = excursion_audit(c, e, *q);
    } catch (const metric_error&) {
      if (tally) ++tally->skipped;
      continue;
    }
    if (tally) {
      ++tally->audits;
      for (int k = 1; k < 9; ++k) tally->n[k] += A.n[k];
    }
    if (!A.lengths_ok) return "excursion length bound fails from vertex " + std::to_string(u);
    if (!A.shortcut_claim()) return "path length claim fails from vertex " + std::to_string(u);
  }
  return {};
}

// ---- verification runner ----------------------------------------------------

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"counts", "orientation", "roundtrip", "labels", "lmp", "bounds", "excursions"};
  return names;
}

struct VerifyOptions {
  std::vector<std::string> checks = known_checks();
  std::int32_t threads = 1;
  std::int32_t exhaustive_max_vertices = 12;  // full directed-cycle search up to this size
  std::int32_t pair_max_vertices = 60;
  std::int32_t excursion_starts = 5;
};

struct CheckTally {
  std::int64_t passed = 0, failed = 0, skipped = 0;
  std::int64_t first_index = -1;
  std::string first_detail;
};

struct VerifyReport {
  std::int64_t maps = 0;
  std::vector<std::string> order;
  std::map<std::string, CheckTally> checks;

  bool ok() const {
    for (const auto& [name, t] : checks)
      if (t.failed) return false;
    return true;
  }

  ojson to_json() const {
    ojson j;
    j["maps"] = maps;
    ojson cs = ojson::object();
    for (const auto& name : order) {
      const CheckTally& t = checks.at(name);
      ojson c;
      c["passed"] = t.passed;
      c["failed"] = t.failed;
      c["skipped"] = t.skipped;
      if (t.failed)
        c["first_failure"] = {{"index", t.first_index}, {"detail", t.first_detail}};
      else
        c["first_failure"] = nullptr;
      cs[name] = std::move(c);
    }
    j["checks"] = std::move(cs);
    j["ok"] = ok();
    return j;
  }
};

namespace detail {

enum class outcome : std::uint8_t { skipped, passed, failed };

struct CheckOutcome {
  outcome state = outcome::skipped;
  std::string detail;
};

inline CheckOutcome run_one(const std::string& name, const SampleRecord& r, const std::optional<Closure>& c,
                            const VerifyOptions& opt) {
  auto verdict = [](std::string err) {
    return err.empty() ? CheckOutcome{outcome::passed, {}} : CheckOutcome{outcome::failed, std::move(err)};
  };
  try {
    if (name == "counts") {
      const std::int32_t n = r.map.num_vertices();
      if (r.map.perimeter() != r.p) return verdict("perimeter " + std::to_string(r.map.perimeter()));
      const bool trivial = r.kind == sample_kind::two_gon && is_trivial_2gon(r.map);
      if (!trivial && r.map.num_edges() != 3 * n - r.p - 3) return verdict("edge count " + std::to_string(r.map.num_edges()));
      const bool two = r.kind == sample_kind::bol2 || r.kind == sample_kind::two_gon;
      const tri_type got = classify(r.map, r.p);
      // Simple maps lie in type II as well.
      const bool fits = got == tri_type::III || (two && got == tri_type::II);
      if (!fits) return verdict(std::string("classified as ") + to_string(got));
      if (r.kind == sample_kind::marked && !r.map.marked_face()) return verdict("no marked face");
      return verdict({});
    }
    if (name == "orientation") {
      if (!r.orientation) return {};
      return verdict(check_orientation(r.map, *r.orientation, r.map.num_vertices() <= opt.exhaustive_max_vertices));
    }
    if (!c) return {};
    if (name == "roundtrip") {
      CombMap closed = c->map;
      if (!r.map.marked_face()) closed.set_marked_face(std::nullopt);
      if (canonical_key(closed) != canonical_key(r.map)) return verdict("closure of the forest differs from the map");
      if (r.orientation && !(r.orientation->out == c->orientation.out)) return verdict("stored orientation differs");
      return verdict({});
    }
    if (name == "labels") return verdict(check_closure(*c, c->map.num_vertices() <= opt.exhaustive_max_vertices));
    if (name == "lmp") return verdict(check_lmp(*c));
    if (name == "bounds") return verdict(check_bounds(*c, opt.pair_max_vertices));
    if (name == "excursions") return verdict(check_excursions(*c, opt.excursion_starts));
  } catch (const std::exception& e) {
    return verdict(std::string("exception: ") + e.what());
  }
  return {};
}

}  // namespace detail

inline VerifyReport run_verify(const std::vector<SampleRecord>& records, const VerifyOptions& opt = {}) {
  for (const auto& name : opt.checks)
    if (std::find(known_checks().begin(), known_checks().end(), name) == known_checks().end())
      throw parse_error("unknown check '" + name + "'");
  const auto n = static_cast<std::int64_t>(records.size());
  std::vector<std::vector<detail::CheckOutcome>> results(records.size());
  parallel_for(n, opt.threads, [&](std::int64_t i) {
    const SampleRecord& r = records[i];
    std::optional<Closure> c;
    if (r.forest) {
      try {
        c = close_forest(*r.forest);
      } catch (const std::exception&) {
        c.reset();
      }
    }
    for (const auto& name : opt.checks) {
      if (name != "counts" && name != "orientation" && r.forest && !c)
        results[i].push_back({detail::outcome::failed, "forest does not close"});
      else
        results[i].push_back(detail::run_one(name, r, c, opt));
    }
  });
  VerifyReport rep;
  rep.maps = n;
  rep.order = opt.checks;
  for (const auto& name : opt.checks) rep.checks[name];
  for (std::size_t i = 0; i < records.size(); ++i)
    for (std::size_t k = 0; k < opt.checks.size(); ++k) {
      CheckTally& t = rep.checks[opt.checks[k]];
      const auto& o = results[i][k];
      switch (o.state) {
        case detail::outcome::skipped: ++t.skipped; break;
        case detail::outcome::passed: ++t.passed; break;
        case detail::outcome::failed:
          if (!t.failed++) {
            t.first_index = records[i].index;
            t.first_detail = o.detail;
          }
          break;
      }
    }
  return rep;
}

// ---- statistics over records --------------------------------------------------

// Per-perimeter moments of the vertex count together with the rescaling
// constants of the label and height processes.
inline ojson run_stats(const std::vector<SampleRecord>& records) {
  std::map<std::int32_t, std::vector<double>> by_p;
  for (const auto& r : records) by_p[r.p].push_back(static_cast<double>(r.map.num_vertices()));
  ojson out = ojson::array();
  for (const auto& [p, v] : by_p) {
    const double p2 = static_cast<double>(p) * p;
    std::vector<double> scaled;
    for (double x : v) scaled.push_back(3 * x / p2);
    const MeanEstimate mv = mean_estimate(v), ms = mean_estimate(scaled);
    ojson j;
    j["p"] = p;
    j["maps"] = v.size();
    j["mean_vertices"] = mv.mean;
    j["mean_3V_over_p2"] = ms.mean;
    j["se_3V_over_p2"] = ms.se;
    j["time_scale"] = p2 / 3;
    j["label_scale"] = std::sqrt(3.0 / (2.0 * p));
    j["height_scale"] = 1.0 / p;
    out.push_back(std::move(j));
  }
  return out;
}

// Column of a CSV file with a header line; `column` is a name or a 0-based index.
inline std::vector<double> read_csv_column(std::istream& in, const std::string& column) {
  std::string line;
  if (!std::getline(in, line)) return {};
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  const auto header = split(line);
  std::size_t col = header.size();
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == column) col = k;
  if (col == header.size()) {
    try {
      col = std::stoul(column);
    } catch (const std::exception&) {
      throw parse_error("no column '" + column + "'");
    }
  }
  std::vector<double> out;
  std::int64_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (col >= cells.size()) throw parse_error("line " + std::to_string(lineno) + ": missing column");
    try {
      out.push_back(std::stod(cells[col]));
    } catch (const std::exception&) {
      throw parse_error("line " + std::to_string(lineno) + ": not a number");
    }
  }
  return out;
}

// ---- statistics experiments -------------------------------------------------

struct Experiment {
  std::string name;
  std::string statistic;  // "ks", "mean", "proportion", "chi2"
  double value = 0;       // D, mean, proportion or chi2 statistic
  double reference = 0;   // critical value, target or dof
  double tolerance = 0;
  double p_value = 1;
  std::int64_t samples = 0;
  bool pass = false;
  std::string detail;

  ojson to_json() const {
    return {{"name", name},           {"statistic", statistic}, {"value", value},     {"reference", reference},
            {"tolerance", tolerance}, {"p_value", p_value},     {"samples", samples}, {"pass", pass},
            {"detail", detail}};
  }
};

inline Experiment ks_experiment(std::string name, const KsResult& k, double level, std::int64_t n, std::string detail) {
  Experiment e;
  e.name = std::move(name);
  e.statistic = "ks";
  e.value = k.D;
  e.reference = k.critical(level);
  e.tolerance = level;
  e.p_value = k.p_value;
  e.samples = n;
  e.pass = k.accept(level);
  e.detail = std::move(detail);
  return e;
}

// Draws fn(rng_i) for i < n with per-index seeds.
inline std::vector<double> draw(std::int64_t n, std::uint64_t seed, std::int32_t threads,
                                const std::function<double(Rng&)>& fn) {
  std::vector<double> out(static_cast<std::size_t>(n));
  parallel_for(n, threads, [&](std::int64_t i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    out[i] = fn(rng);
  });
  return out;
}

// 3|F*_p|/p^2 against independent draws of A, the hitting time of -1.
inline Experiment experiment_forest_size(std::int32_t p, std::int64_t n, std::uint64_t seed, std::int32_t threads = 1) {
  const double p2 = static_cast<double>(p) * p;
  const auto x = draw(n, seed, threads, [&](Rng& r) { return 3.0 * static_cast<double>(sample_forest_size(p, r)) / p2; });
  const auto a = draw(n, mix_seed(seed, 0xA11), threads, [](Rng& r) { return sample_A(r); });
  const KsResult one = ks_one_sample(x, A_cdf);
  return ks_experiment("forest_size", ks_two_sample(x, a), 0.01, n,
                       "one-sample D against the exact law " + std::to_string(one.D));
}

// Rescaled label at fixed s, 0 beyond the end of the forest.
inline double rescaled_label(std::int32_t p, double s, Rng& rng) {
  const double t = static_cast<double>(p) * p * s / 3;
  const auto f = static_cast<std::int64_t>(t);
  const double fr = t - static_cast<double>(f);
  const LexPrefix lp = sample_lex_prefix(p, rng, f + 2);
  const auto got = static_cast<std::int64_t>(lp.labels.size());
  double v = 0;
  if (got >= f + 2)
    v = lp.labels[f] + fr * (lp.labels[f + 1] - lp.labels[f]);
  else if (got == f + 1)
    v = lp.labels[f] * (1 - fr);
  return std::sqrt(3.0 / (2.0 * p)) * v;
}

inline Experiment experiment_label_marginal(std::int32_t p, double s, std::int64_t n, std::uint64_t seed,
                                            std::int32_t threads = 1) {
  const auto x = draw(n, seed, threads, [&](Rng& r) { return rescaled_label(p, s, r); });
  const auto y = draw(n, mix_seed(seed, 0x1AB), threads, [&](Rng& r) { return sample_Lambda_marginal(s, r); });
  const MeanEstimate mx = mean_estimate(x), my = mean_estimate(y);
  return ks_experiment("label_marginal", ks_two_sample(x, y), 0.01, n,
                       "s=" + std::to_string(s) + " means " + std::to_string(mx.mean) + " vs " + std::to_string(my.mean) +
                           " sd " + std::to_string(mx.sd) + " vs " + std::to_string(my.sd));
}

inline double rescaled_bridge(std::int32_t p, double s, Rng& rng) {
  const Bridge br = sample_bridge(p, rng);
  const double t = (2.0 * p - 3) * s;
  const auto f = std::min<std::int64_t>(static_cast<std::int64_t>(t), 2 * p - 3);
  const double fr = t - static_cast<double>(f);
  double v = br.b[f];
  if (f < 2 * p - 3) v += fr * (br.b[f + 1] - br.b[f]);
  return std::sqrt(3.0 / (2.0 * p)) * v;
}

inline Experiment experiment_bridge_marginal(std::int32_t p, double s, std::int64_t n, std::uint64_t seed,
                                             std::int32_t threads = 1) {
  const auto x = draw(n, seed, threads, [&](Rng& r) { return rescaled_bridge(p, s, r); });
  const double sd = bridge_marginal_sd(s);
  const auto y = draw(n, mix_seed(seed, 0xB12), threads, [&](Rng& r) { return sd * r.normal(); });
  const MeanEstimate mx = mean_estimate(x);
  return ks_experiment("bridge_marginal", ks_two_sample(x, y), 0.01, n,
                       "s=" + std::to_string(s) + " mean " + std::to_string(mx.mean) + " sd " + std::to_string(mx.sd) +
                           " vs " + std::to_string(sd));
}

inline Experiment experiment_bol3_mean(std::int32_t p, std::int64_t n, std::uint64_t seed, std::int32_t threads = 1) {
  const double p2 = static_cast<double>(p) * p;
  const auto x = draw(n, seed, threads, [&](Rng& r) { return 3.0 * static_cast<double>(sample_bol3_size(p, r)) / p2; });
  const MeanEstimate m = mean_estimate(x);
  Experiment e;
  e.name = "bol3_mean";
  e.statistic = "mean";
  e.value = m.mean;
  e.reference = 1.0;
  e.tolerance = 0.1;
  e.samples = n;
  e.pass = std::abs(m.mean - 1.0) <= 0.1;
  e.detail = "standard error " + std::to_string(m.se);
  return e;
}

inline Experiment experiment_two_gon_mean(std::int64_t n, std::uint64_t seed, std::int32_t threads = 1) {
  const auto x = draw(n, seed, threads, [](Rng& r) { return static_cast<double>(sample_2gon_size(r)); });
  const MeanEstimate m = mean_estimate(x);
  Experiment e;
  e.name = "two_gon_mean";
  e.statistic = "mean";
  e.value = m.mean;
  e.reference = 7.0 / 3.0;
  e.tolerance = 3 * m.se;
  e.samples = n;
  e.pass = std::abs(m.mean - 7.0 / 3.0) <= 3 * m.se;
  e.detail = "standard error " + std::to_string(m.se);
  return e;
}

inline Experiment experiment_edge_ratio(std::int32_t p, std::int64_t n, std::uint64_t seed, std::int32_t threads = 1) {
  const auto x = draw(n, seed, threads, [&](Rng& r) {
    const Bol2Size s = sample_bol2_size(p, r);
    return static_cast<double>(s.edges()) / static_cast<double>(s.core_edges());
  });
  const MeanEstimate m = mean_estimate(x);
  Experiment e;
  e.name = "edge_ratio";
  e.statistic = "mean";
  e.value = m.mean;
  e.reference = 2.0;
  e.tolerance = 0.1;
  e.samples = n;
  e.pass = std::abs(m.mean - 2.0) <= 0.1;
  e.detail = "standard error " + std::to_string(m.se);
  return e;
}

// |V(M_p)|/p^2 under Bol_II(p) against the law with density
// proportional to x^{-5/2} e^{-1/(3x)}, whose CDF is Q(3/2, 1/(3x)).
inline double bol2_vertex_cdf(double x) { return x <= 0 ? 0.0 : boost::math::gamma_q(1.5, 1.0 / (3 * x)); }

inline Experiment experiment_bol2_vertices(std::int32_t p, std::int64_t n, std::uint64_t seed, std::int32_t threads = 1) {
  const double p2 = static_cast<double>(p) * p;
  const auto x = draw(n, seed, threads, [&](Rng& r) { return static_cast<double>(sample_bol2_size(p, r).vertices) / p2; });
  return ks_experiment("bol2_vertices", ks_one_sample(x, bol2_vertex_cdf), 0.01, n, "p=" + std::to_string(p));
}

// Canonical keys and exact probabilities of the marked maps of the p-gon
// with at most n_max vertices.
inline std::map<std::vector<std::int32_t>, double> marked_support(std::int32_t p, std::int32_t n_max) {
  std::map<std::vector<std::int32_t>, double> out;
  for (std::int32_t n = p; n <= n_max; ++n) {
    const double prob = static_cast<double>(marked_probability(p, n - p));
    for_each_blossoming_forest(p, n, [&](const BlossomForest& f) { out[canonical_key(close_forest(f).map)] = prob; });
  }
  return out;
}

struct SmallMarkedCounts {
  std::int64_t samples = 0, triangles = 0, outside = 0;
  std::map<std::vector<std::int32_t>, std::int64_t> counts;
};

// Marked samples at perimeter p; only forests with at most n_max vertices are closed.
inline SmallMarkedCounts sample_small_marked(std::int32_t p, std::int32_t n_max, std::int64_t n, std::uint64_t seed) {
  SmallMarkedCounts out;
  out.samples = n;
  for (std::int64_t i = 0; i < n; ++i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    const auto f = sample_forest_bounded(p, rng, n_max);
    if (!f) {
      ++out.outside;
      continue;
    }
    const Closure c = close_forest(*f);
    if (c.map.num_vertices() == p) ++out.triangles;
    ++out.counts[canonical_key(c.map)];
  }
  return out;
}

inline Experiment experiment_triangle_probability(const SmallMarkedCounts& s) {
  const double q = 27.0 / 64.0;
  const double n = static_cast<double>(s.samples);
  const double freq = static_cast<double>(s.triangles) / n;
  const double sigma = std::sqrt(q * (1 - q) / n);
  Experiment e;
  e.name = "triangle_probability";
  e.statistic = "proportion";
  e.value = freq;
  e.reference = q;
  e.tolerance = 3 * sigma;
  e.samples = s.samples;
  e.pass = std::abs(freq - q) <= 3 * sigma;
  e.detail = "z=" + std::to_string((freq - q) / sigma);
  return e;
}

inline Experiment experiment_small_chi_square(const SmallMarkedCounts& s, std::int32_t p, std::int32_t n_max) {
  const auto support = marked_support(p, n_max);
  std::vector<std::int64_t> obs;
  std::vector<double> prob;
  std::int64_t unknown = 0;
  for (const auto& [key, pr] : support) {
    const auto it = s.counts.find(key);
    obs.push_back(it == s.counts.end() ? 0 : it->second);
    prob.push_back(pr);
  }
  for (const auto& [key, c] : s.counts)
    if (!support.count(key)) unknown += c;
  const ChiSquareResult r = chi_square(obs, prob, s.samples);
  Experiment e;
  e.name = "small_chi_square";
  e.statistic = "chi2";
  e.value = r.statistic;
  e.reference = static_cast<double>(r.dof);
  e.tolerance = 0.01;
  e.p_value = r.p_value;
  e.samples = s.samples;
  e.pass = r.p_value >= 0.01 && unknown == 0;
  e.detail = std::to_string(support.size()) + " maps, " + std::to_string(unknown) + " samples off the support";
  return e;
}

// Fraction of (map, uniform inner vertex) draws at perimeter p with
// inner distance to v* below X(u) - X(v*) - eps sqrt(p).
inline Experiment experiment_lower_bound(std::int32_t p, double eps, std::int64_t n, std::uint64_t seed,
                                         std::int32_t threads = 1) {
  const auto x = draw(n, seed, threads, [&](Rng& r) {
    const Closure c = sample_bol3(p, r).closure;
    const std::int32_t inner = c.map.num_vertices() - p;
    if (inner <= 0) return 0.0;
    const auto u = static_cast<vertex_t>(p + static_cast<std::int32_t>(r.below(static_cast<std::uint64_t>(inner))));
    const auto d = inner_distance_to_vstar(c, u);
    const double gap = c.X(u) - c.X(c.vstar.v_star) - eps * std::sqrt(static_cast<double>(p));
    return d && static_cast<double>(*d) < gap ? 1.0 : 0.0;
  });
  const MeanEstimate m = mean_estimate(x);
  Experiment e;
  e.name = "lower_bound";
  e.statistic = "proportion";
  e.value = m.mean;
  e.reference = 0.1;
  e.samples = n;
  e.pass = m.mean < 0.1;
  e.detail = "eps=" + std::to_string(eps);
  return e;
}

inline ojson enum_report_to_json(const EnumReport& r) {
  ojson j;
  j["p"] = r.p;
  ojson sizes = ojson::array();
  for (const auto& s : r.sizes)
    sizes.push_back({{"n", s.n},
                     {"forests", s.forests},
                     {"closures", s.closures},
                     {"valid", s.valid},
                     {"unmarked", s.unmarked},
                     {"expected", s.expected},
                     {"unique_minimal", s.unique_minimal}});
  j["sizes"] = std::move(sizes);
  j["injective"] = r.injective;
  j["mismatches"] = r.mismatches;
  j["ok"] = r.ok();
  return j;
}

}  // namespace polydisk
