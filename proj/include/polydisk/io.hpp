#pragma once
// JSONL records for maps (with optional orientation) and blossoming forests.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "polydisk/blossom.hpp"
#include "polydisk/map.hpp"
#include "polydisk/orient.hpp"

namespace polydisk {

using ojson = nlohmann::ordered_json;

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MapRecord {
  CombMap map;
  std::optional<Orientation> orientation;
};

// Edges are listed by increasing smaller dart id.
inline std::vector<dart_t> edge_darts(const CombMap& m) {
  std::vector<dart_t> out;
  for (dart_t d = 0; d < m.num_darts(); ++d)
    if (d < m.twin(d)) out.push_back(d);
  return out;
}

inline ojson map_to_json(const CombMap& m, const Orientation* o = nullptr) {
  ojson j;
  j["perimeter"] = m.perimeter();
  j["root_dart"] = m.root();
  if (m.marked_face())
    j["marked_face"] = *m.marked_face();
  else
    j["marked_face"] = nullptr;
  ojson verts = ojson::array();
  for (vertex_t v = 0; v < m.num_vertices(); ++v) verts.push_back(m.rotation(v));
  j["vertices"] = std::move(verts);
  j["twins"] = m.twins();
  if (o) {
    ojson orient = ojson::array();
    for (dart_t d : edge_darts(m)) {
      const dart_t x = o->out[d] ? d : m.twin(d);
      orient.push_back({m.origin(x), m.target(x)});
    }
    j["orientation"] = std::move(orient);
  }
  return j;
}

inline std::string serialize_map(const CombMap& m, const Orientation* o = nullptr) { return map_to_json(m, o).dump(); }

inline MapRecord map_from_json(const ojson& j) {
  try {
    const auto rotations = j.at("vertices").get<std::vector<std::vector<dart_t>>>();
    const auto twins = j.at("twins").get<std::vector<dart_t>>();
    const auto root = j.at("root_dart").get<dart_t>();
    std::optional<face_t> marked;
    if (j.contains("marked_face") && !j.at("marked_face").is_null()) marked = j.at("marked_face").get<face_t>();
    MapRecord r{CombMap::from_rotations(rotations, twins, root, marked), std::nullopt};
    if (j.contains("perimeter") && j.at("perimeter").get<std::int32_t>() != r.map.perimeter())
      throw parse_error("perimeter field disagrees with the root face degree");
    if (j.contains("orientation")) {
      const auto pairs = j.at("orientation").get<std::vector<std::vector<vertex_t>>>();
      const auto edges = edge_darts(r.map);
      if (pairs.size() != edges.size()) throw parse_error("orientation length differs from edge count");
      Orientation o;
      o.out.assign(r.map.num_darts(), 0);
      for (std::size_t k = 0; k < edges.size(); ++k) {
        const dart_t d = edges[k];
        if (pairs[k].size() != 2) throw parse_error("orientation entry is not a pair");
        if (pairs[k][0] == r.map.origin(d) && pairs[k][1] == r.map.target(d))
          o.out[d] = 1;
        else if (pairs[k][0] == r.map.target(d) && pairs[k][1] == r.map.origin(d))
          o.out[r.map.twin(d)] = 1;
        else
          throw parse_error("orientation pair does not match edge endpoints");
      }
      r.orientation = std::move(o);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(e.what());
  } catch (const map_error& e) {
    throw parse_error(e.what());
  }
}

inline MapRecord parse_map(const std::string& line) {
  ojson j;
  try {
    j = ojson::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(e.what());
  }
  return map_from_json(j);
}

inline ojson nested_to_json(const Nested& n) {
  ojson a = ojson::array();
  for (const auto& k : n.kids) a.push_back(nested_to_json(k));
  return a;
}

inline Nested nested_from_json(const ojson& j) {
  if (!j.is_array()) throw parse_error("tree node is not an array");
  Nested n;
  for (const auto& k : j) n.kids.push_back(nested_from_json(k));
  return n;
}

// stem_positions lists, for every proper vertex in lexicographic order, the
// number of proper children preceding each of its stems.
inline ojson forest_to_json(const BlossomForest& f) {
  ojson j;
  j["perimeter"] = f.perimeter();
  ojson trees = ojson::array();
  for (const auto& t : f.base.nested()) trees.push_back(nested_to_json(t));
  j["trees"] = std::move(trees);
  ojson pos = ojson::array();
  for (std::int32_t v : lex_order(f.base)) {
    ojson s = ojson::array();
    for (std::int32_t k = 0; k < f.num_stems(v); ++k) s.push_back(f.stem(v, k));
    pos.push_back(std::move(s));
  }
  j["stem_positions"] = std::move(pos);
  ojson counts = ojson::array();
  for (std::int32_t i = 0; i < f.perimeter(); ++i) counts.push_back(f.num_stems(i));
  j["boundary_stem_counts"] = std::move(counts);
  return j;
}

inline BlossomForest forest_from_json(const ojson& j) {
  try {
    std::vector<Nested> trees;
    for (const auto& t : j.at("trees")) trees.push_back(nested_from_json(t));
    if (j.at("perimeter").get<std::int32_t>() != static_cast<std::int32_t>(trees.size()))
      throw parse_error("perimeter differs from the number of trees");
    CyclicForest base = CyclicForest::from_nested(trees);
    const auto order = lex_order(base);
    const auto pos = j.at("stem_positions").get<std::vector<std::vector<std::int32_t>>>();
    if (pos.size() != order.size()) throw parse_error("stem_positions length differs from vertex count");
    std::vector<std::vector<std::int32_t>> stems(base.size());
    for (std::size_t k = 0; k < order.size(); ++k) stems[order[k]] = pos[k];
    const auto counts = j.at("boundary_stem_counts").get<std::vector<std::int32_t>>();
    for (std::int32_t i = 0; i < base.perimeter(); ++i)
      if (counts.at(i) != static_cast<std::int32_t>(stems[i].size()))
        throw parse_error("boundary_stem_counts disagrees with stem_positions");
    BlossomForest f = BlossomForest::make(std::move(base), stems);
    validate_blossoming(f);
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(e.what());
  } catch (const blossom_error& e) {
    throw parse_error(e.what());
  } catch (const forest_error& e) {
    throw parse_error(e.what());
  }
}

}  // namespace polydisk
