#include "floorgnn/graph.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "floorgnn/error.hpp"
#include "json.hpp"

namespace floorgnn {

std::vector<std::pair<int, int>> build_adjacency(const FloorPlanRecord& p,
                                                 const GraphBuildConfig& cfg) {
  int n = static_cast<int>(p.rooms.size());
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rect_gap_distance(p.rooms[i].bbox, p.rooms[j].bbox) <
          cfg.adjacency_threshold)
        edges.emplace_back(i, j);
  return edges;
}

NestingFlags detect_nesting(const FloorPlanRecord& p, const GraphBuildConfig& cfg) {
  int n = static_cast<int>(p.rooms.size());
  NestingFlags flags;
  flags.is_parent.assign(n, 0);
  flags.is_child.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double overlap = rect_intersection_area(p.rooms[i].bbox, p.rooms[j].bbox);
      if (overlap > cfg.nesting_ratio * p.rooms[i].bbox.area()) {
        flags.is_child[i] = 1;
        flags.is_parent[j] = 1;
      }
    }
  }
  return flags;
}

std::vector<int> count_doors(const FloorPlanRecord& p) {
  std::vector<int> doors(p.rooms.size(), 0);
  for (const WallRecord& w : p.walls) {
    if (!w.has_door) continue;
    for (int id : w.room_ids) {
      if (id < 0 || id >= static_cast<int>(doors.size()))
        fail(ErrorCode::bad_index, "wall room id " + std::to_string(id) +
                                       " out of range in plan " + p.id);
      ++doors[id];
    }
  }
  return doors;
}

std::vector<double> extract_features(const FloorPlanRecord& p,
                                     const GraphBuildConfig& cfg) {
  int n = static_cast<int>(p.rooms.size());
  NestingFlags nesting = detect_nesting(p, cfg);
  std::vector<int> doors = count_doors(p);
  std::vector<double> x(static_cast<size_t>(n) * kNumFeatures);
  for (int i = 0; i < n; ++i) {
    const Rect& r = p.rooms[i].bbox;
    double* row = x.data() + static_cast<size_t>(i) * kNumFeatures;
    row[0] = r.area();
    row[1] = std::max(r.width(), r.height());
    row[2] = std::min(r.width(), r.height());
    row[3] = static_cast<double>(doors[i]);
    row[4] = static_cast<double>(nesting.is_parent[i]);
    row[5] = static_cast<double>(nesting.is_child[i]);
  }
  return x;
}

RoomGraph build_graph(const FloorPlanRecord& p, const CategoryVocab& vocab,
                      const GraphBuildConfig& cfg) {
  FloorPlanRecord norm = normalize_plan(p);
  RoomGraph g;
  g.n = static_cast<int>(norm.rooms.size());
  g.plan_id = norm.id;
  g.features = extract_features(norm, cfg);
  g.edges = build_adjacency(norm, cfg);
  if (g.edges.empty())
    fail(ErrorCode::empty_edges, "plan " + p.id + " has no adjacent room pair");
  g.labels.reserve(norm.rooms.size());
  for (const RoomRecord& r : norm.rooms) g.labels.push_back(vocab.index_of(r.category));
  return g;
}

BatchedGraph batch_graphs(const std::vector<const RoomGraph*>& gs) {
  if (gs.empty()) fail(ErrorCode::empty_batch, "batch_graphs on empty list");
  BatchedGraph b;
  b.node_offsets.push_back(0);
  b.edge_offsets.push_back(0);
  for (const RoomGraph* g : gs) {
    int offset = b.n;
    b.n += g->n;
    b.features.insert(b.features.end(), g->features.begin(), g->features.end());
    for (const auto& [i, j] : g->edges)
      b.edges.emplace_back(i + offset, j + offset);
    b.labels.insert(b.labels.end(), g->labels.begin(), g->labels.end());
    b.graph_of_node.insert(b.graph_of_node.end(), static_cast<size_t>(g->n),
                           b.num_graphs());
    b.node_offsets.push_back(b.n);
    b.edge_offsets.push_back(static_cast<int>(b.edges.size()));
    b.plan_ids.push_back(g->plan_id);
  }
  return b;
}

BatchedGraph batch_graphs(const std::vector<RoomGraph>& gs) {
  std::vector<const RoomGraph*> ptrs;
  ptrs.reserve(gs.size());
  for (const RoomGraph& g : gs) ptrs.push_back(&g);
  return batch_graphs(ptrs);
}

std::vector<RoomGraph> unbatch_graphs(const BatchedGraph& b) {
  std::vector<RoomGraph> gs;
  gs.reserve(b.plan_ids.size());
  for (int gi = 0; gi < b.num_graphs(); ++gi) {
    int lo = b.node_offsets[gi];
    int hi = b.node_offsets[gi + 1];
    RoomGraph g;
    g.n = hi - lo;
    g.plan_id = b.plan_ids[gi];
    g.features.assign(
        b.features.begin() + static_cast<size_t>(lo) * kNumFeatures,
        b.features.begin() + static_cast<size_t>(hi) * kNumFeatures);
    g.labels.assign(b.labels.begin() + lo, b.labels.begin() + hi);
    for (int e = b.edge_offsets[gi]; e < b.edge_offsets[gi + 1]; ++e)
      g.edges.emplace_back(b.edges[e].first - lo, b.edges[e].second - lo);
    gs.push_back(std::move(g));
  }
  return gs;
}

void write_graphs(const std::vector<RoomGraph>& gs, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write " + path);
  for (const RoomGraph& g : gs) {
    nlohmann::json x = nlohmann::json::array();
    for (int i = 0; i < g.n; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int f = 0; f < kNumFeatures; ++f)
        row.push_back(g.features[static_cast<size_t>(i) * kNumFeatures + f]);
      x.push_back(std::move(row));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [i, j] : g.edges) edges.push_back({i, j});
    nlohmann::json j = {
        {"plan_id", g.plan_id}, {"x", x}, {"edges", edges}, {"y", g.labels}};
    out << j.dump() << '\n';
  }
  out.flush();
  if (!out) fail(ErrorCode::io, "write error on " + path);
}

std::vector<RoomGraph> read_graphs(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  std::vector<RoomGraph> gs;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::schema, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("plan_id") || !j.contains("x") ||
        !j.contains("edges") || !j.contains("y"))
      fail(ErrorCode::schema,
           "line " + std::to_string(line_no) + ": missing graph field");
    RoomGraph g;
    g.plan_id = j["plan_id"].get<std::string>();
    const nlohmann::json& x = j["x"];
    if (!x.is_array())
      fail(ErrorCode::schema, "line " + std::to_string(line_no) + ": \"x\" not a list");
    g.n = static_cast<int>(x.size());
    g.features.reserve(static_cast<size_t>(g.n) * kNumFeatures);
    for (const nlohmann::json& row : x) {
      if (!row.is_array() || row.size() != kNumFeatures)
        fail(ErrorCode::schema,
             "line " + std::to_string(line_no) + ": feature row is not 6 numbers");
      for (const nlohmann::json& v : row) {
        if (!v.is_number())
          fail(ErrorCode::schema,
               "line " + std::to_string(line_no) + ": non-numeric feature");
        g.features.push_back(v.get<double>());
      }
    }
    for (const nlohmann::json& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer())
        fail(ErrorCode::schema, "line " + std::to_string(line_no) + ": bad edge");
      int a = e[0].get<int>();
      int b = e[1].get<int>();
      if (a < 0 || b < 0 || a >= g.n || b >= g.n)
        fail(ErrorCode::schema,
             "line " + std::to_string(line_no) + ": edge endpoint out of range");
      g.edges.emplace_back(a, b);
    }
    for (const nlohmann::json& y : j["y"]) {
      if (!y.is_number_integer())
        fail(ErrorCode::schema, "line " + std::to_string(line_no) + ": bad label");
      g.labels.push_back(y.get<int>());
    }
    if (static_cast<int>(g.labels.size()) != g.n)
      fail(ErrorCode::schema,
           "line " + std::to_string(line_no) + ": label count != node count");
    gs.push_back(std::move(g));
  }
  if (in.bad()) fail(ErrorCode::io, "read error on " + path);
  return gs;
}

}  // namespace floorgnn
