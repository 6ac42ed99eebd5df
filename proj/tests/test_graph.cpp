#include "floorgnn/graph.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "floorgnn/error.hpp"
#include "floorgnn/floorplan.hpp"
#include "floorgnn/rng.hpp"

namespace floorgnn {
namespace {

std::string temp_path(const std::string& name) {
  return ::testing::TempDir() + name;
}

FloorPlanRecord random_plan(Rng& rng, int n_rooms, const CategoryVocab& vocab) {
  FloorPlanRecord p;
  p.id = "rand";
  for (int i = 0; i < n_rooms; ++i) {
    double x0 = rng.uniform(0.0, 180.0);
    double y0 = rng.uniform(0.0, 180.0);
    RoomRecord r;
    r.bbox = Rect{x0, y0, x0 + rng.uniform(2.0, 60.0), y0 + rng.uniform(2.0, 60.0)};
    r.category = vocab.labels()[rng.uniform_int(0, vocab.size() - 1)];
    p.rooms.push_back(r);
  }
  int n_walls = rng.uniform_int(0, 2 * n_rooms);
  for (int i = 0; i < n_walls; ++i) {
    WallRecord w;
    w.p1 = {rng.uniform(0.0, 200.0), rng.uniform(0.0, 200.0)};
    w.p2 = {rng.uniform(0.0, 200.0), rng.uniform(0.0, 200.0)};
    w.room_ids.push_back(rng.uniform_int(0, n_rooms - 1));
    if (rng.bernoulli(0.3)) {
      int other = rng.uniform_int(0, n_rooms - 1);
      if (other != w.room_ids[0]) w.room_ids.push_back(other);
    }
    w.has_door = rng.bernoulli(0.4);
    p.walls.push_back(w);
  }
  return p;
}

std::vector<RoomGraph> synth_graphs(int n_plans, uint64_t seed) {
  SynthConfig cfg;
  cfg.n_plans = n_plans;
  cfg.seed = seed;
  Dataset d = generate_synthetic(cfg);
  std::vector<RoomGraph> gs;
  for (const FloorPlanRecord& p : d.plans)
    gs.push_back(build_graph(p, d.vocab, GraphBuildConfig{}));
  return gs;
}

TEST(adjacency, matches_brute_force_on_random_plans) {
  CategoryVocab vocab = CategoryVocab::default_categories();
  Rng rng(2024);
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    FloorPlanRecord raw = random_plan(rng, rng.uniform_int(2, 9), vocab);
    FloorPlanRecord norm = normalize_plan(raw);
    std::set<std::pair<int, int>> expect;
    int n = static_cast<int>(norm.rooms.size());
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rect_gap_distance(norm.rooms[i].bbox, norm.rooms[j].bbox) < 0.03)
          expect.insert({i, j});

    std::vector<std::pair<int, int>> got = build_adjacency(norm, GraphBuildConfig{});
    EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
    std::set<std::pair<int, int>> got_set(got.begin(), got.end());
    EXPECT_EQ(got_set.size(), got.size()) << "duplicate edges";
    EXPECT_EQ(got_set, expect);
    for (auto [i, j] : got) EXPECT_LT(i, j);
    compared += static_cast<int>(expect.size());
  }
  EXPECT_GT(compared, 50);  // the corpus actually exercised adjacency
}

TEST(adjacency, threshold_is_strict) {
  FloorPlanRecord p;
  p.id = "boundary";
  p.rooms.push_back({Rect{-0.5, 0.0, 0.0, 1.0}, "kitchen"});
  p.rooms.push_back({Rect{0.03, 0.0, 0.5, 1.0}, "kitchen"});  // gap exactly 0.03
  EXPECT_TRUE(build_adjacency(p, GraphBuildConfig{}).empty());

  p.rooms[1].bbox.x0 = std::nextafter(0.03, 0.0);  // one ulp below
  ASSERT_EQ(build_adjacency(p, GraphBuildConfig{}).size(), 1u);

  p.rooms[1].bbox.x0 = -0.2;  // overlapping rooms are adjacent
  ASSERT_EQ(build_adjacency(p, GraphBuildConfig{}).size(), 1u);
}

TEST(nesting, ratio_is_strict_and_directional) {
  FloorPlanRecord p;
  p.id = "nest";
  p.rooms.push_back({Rect{0.0, 0.0, 1.0, 1.0}, "kitchen"});   // area 1
  p.rooms.push_back({Rect{0.0, 0.0, 0.7, 1.0}, "closet"});    // fully inside, area 0.7

  // overlap of room 1 with room 0 equals its full area -> 1 > 0.7 -> child.
  // overlap of room 0 with room 1 is 0.7 of its area -> exactly 0.7, not > 0.7.
  NestingFlags f = detect_nesting(p, GraphBuildConfig{});
  EXPECT_TRUE(f.is_child[1]);
  EXPECT_TRUE(f.is_parent[0]);
  EXPECT_FALSE(f.is_child[0]);
  EXPECT_FALSE(f.is_parent[1]);

  // shrink the parent so the big room's overlap fraction passes 0.7
  p.rooms[1].bbox = Rect{0.0, 0.0, 0.75, 1.0};
  f = detect_nesting(p, GraphBuildConfig{});
  EXPECT_TRUE(f.is_child[0]);
  EXPECT_TRUE(f.is_child[1]);
}

TEST(doors, shared_walls_count_for_every_room) {
  FloorPlanRecord p;
  p.id = "doors";
  p.rooms.push_back({Rect{0, 0, 1, 1}, "kitchen"});
  p.rooms.push_back({Rect{1, 0, 2, 1}, "bedroom"});
  p.rooms.push_back({Rect{2, 0, 3, 1}, "closet"});
  WallRecord shared;
  shared.room_ids = {0, 1};
  shared.has_door = true;
  p.walls.push_back(shared);
  WallRecord solo;
  solo.room_ids = {1};
  solo.has_door = true;
  p.walls.push_back(solo);
  WallRecord no_door;
  no_door.room_ids = {2};
  no_door.has_door = false;
  p.walls.push_back(no_door);

  std::vector<int> doors = count_doors(p);
  EXPECT_EQ(doors, (std::vector<int>{1, 2, 0}));

  p.walls[0].room_ids = {0, 7};
  try {
    count_doors(p);
    FAIL() << "expected E_BAD_INDEX";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::bad_index);
  }
}

TEST(features, hand_example) {
  FloorPlanRecord p;
  p.id = "feat";
  p.rooms.push_back({Rect{0.2, 0.3, 0.6, 0.8}, "kitchen"});
  WallRecord w;
  w.room_ids = {0};
  w.has_door = true;
  p.walls.push_back(w);

  std::vector<double> x = extract_features(p, GraphBuildConfig{});
  ASSERT_EQ(x.size(), 6u);
  EXPECT_NEAR(x[0], 0.20, 1e-12);  // area
  EXPECT_NEAR(x[1], 0.5, 1e-12);   // length = max side
  EXPECT_NEAR(x[2], 0.4, 1e-12);   // width = min side
  EXPECT_DOUBLE_EQ(x[3], 1.0);     // doors
  EXPECT_DOUBLE_EQ(x[4], 0.0);     // is_parent
  EXPECT_DOUBLE_EQ(x[5], 0.0);     // is_child
}

TEST(features, area_equals_length_times_width) {
  std::vector<RoomGraph> gs = synth_graphs(25, 5);
  for (const RoomGraph& g : gs)
    for (int i = 0; i < g.n; ++i) {
      double area = g.features[static_cast<size_t>(i) * kNumFeatures];
      double len = g.features[static_cast<size_t>(i) * kNumFeatures + 1];
      double wid = g.features[static_cast<size_t>(i) * kNumFeatures + 2];
      EXPECT_LE(std::fabs(area - len * wid), 1e-9);
      EXPECT_GE(len, wid);
    }
}

TEST(build, full_pipeline_matches_independent_recomputation) {
  CategoryVocab vocab = CategoryVocab::default_categories();
  Rng rng(777);
  int built = 0;
  for (int trial = 0; trial < 80; ++trial) {
    FloorPlanRecord raw = random_plan(rng, rng.uniform_int(2, 8), vocab);
    RoomGraph g;
    try {
      g = build_graph(raw, vocab, GraphBuildConfig{});
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::empty_edges);
      continue;
    }
    ++built;
    FloorPlanRecord norm = normalize_plan(raw);
    NestingFlags nest = detect_nesting(norm, GraphBuildConfig{});
    std::vector<int> doors = count_doors(norm);
    ASSERT_EQ(g.n, static_cast<int>(norm.rooms.size()));
    for (int i = 0; i < g.n; ++i) {
      const Rect& b = norm.rooms[i].bbox;
      const double* row = &g.features[static_cast<size_t>(i) * kNumFeatures];
      EXPECT_DOUBLE_EQ(row[0], b.area());
      EXPECT_DOUBLE_EQ(row[1], std::max(b.width(), b.height()));
      EXPECT_DOUBLE_EQ(row[2], std::min(b.width(), b.height()));
      EXPECT_DOUBLE_EQ(row[3], static_cast<double>(doors[i]));
      EXPECT_DOUBLE_EQ(row[4], nest.is_parent[i] ? 1.0 : 0.0);
      EXPECT_DOUBLE_EQ(row[5], nest.is_child[i] ? 1.0 : 0.0);
      EXPECT_EQ(g.labels[i], vocab.index_of(norm.rooms[i].category));
    }
    EXPECT_EQ(g.edges, build_adjacency(norm, GraphBuildConfig{}));
  }
  EXPECT_GT(built, 20);
}

TEST(build, empty_edges_and_unknown_category) {
  CategoryVocab vocab = CategoryVocab::default_categories();
  FloorPlanRecord far;
  far.id = "far";
  far.rooms.push_back({Rect{0, 0, 10, 10}, "kitchen"});
  far.rooms.push_back({Rect{90, 90, 100, 100}, "bedroom"});
  try {
    build_graph(far, vocab, GraphBuildConfig{});
    FAIL() << "expected E_EMPTY_EDGES";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_edges);
  }

  FloorPlanRecord odd;
  odd.id = "odd";
  odd.rooms.push_back({Rect{0, 0, 10, 10}, "weird_room"});
  odd.rooms.push_back({Rect{10.1, 0, 20, 10}, "kitchen"});
  try {
    build_graph(odd, vocab, GraphBuildConfig{});
    FAIL() << "expected E_UNKNOWN_CATEGORY";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_category);
  }
}

TEST(batching, offsets_and_round_trip) {
  std::vector<RoomGraph> gs = synth_graphs(20, 11);
  BatchedGraph b = batch_graphs(gs);

  ASSERT_EQ(b.num_graphs(), 20);
  ASSERT_EQ(b.node_offsets.size(), 21u);
  ASSERT_EQ(b.edge_offsets.size(), 21u);
  EXPECT_EQ(b.node_offsets[0], 0);
  EXPECT_EQ(b.edge_offsets[0], 0);
  int total_nodes = 0, total_edges = 0;
  for (int g = 0; g < 20; ++g) {
    total_nodes += gs[g].n;
    total_edges += static_cast<int>(gs[g].edges.size());
    EXPECT_EQ(b.node_offsets[g + 1], total_nodes);
    EXPECT_EQ(b.edge_offsets[g + 1], total_edges);
    EXPECT_EQ(b.plan_ids[g], gs[g].plan_id);
  }
  EXPECT_EQ(b.n, total_nodes);
  EXPECT_EQ(static_cast<int>(b.edges.size()), total_edges);
  for (int g = 0; g < 20; ++g)
    for (size_t e = 0; e < gs[g].edges.size(); ++e) {
      auto [i, j] = b.edges[b.edge_offsets[g] + e];
      EXPECT_EQ(i, gs[g].edges[e].first + b.node_offsets[g]);
      EXPECT_EQ(j, gs[g].edges[e].second + b.node_offsets[g]);
    }
  for (int v = 0; v < b.n; ++v) {
    int g = b.graph_of_node[v];
    EXPECT_GE(v, b.node_offsets[g]);
    EXPECT_LT(v, b.node_offsets[g + 1]);
  }

  std::vector<RoomGraph> back = unbatch_graphs(b);
  ASSERT_EQ(back.size(), gs.size());
  for (size_t g = 0; g < gs.size(); ++g) {
    EXPECT_EQ(back[g].n, gs[g].n);
    EXPECT_EQ(back[g].features, gs[g].features);
    EXPECT_EQ(back[g].edges, gs[g].edges);
    EXPECT_EQ(back[g].labels, gs[g].labels);
    EXPECT_EQ(back[g].plan_id, gs[g].plan_id);
  }
}

TEST(batching, empty_batch_rejected) {
  try {
    batch_graphs(std::vector<RoomGraph>{});
    FAIL() << "expected E_EMPTY_BATCH";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_batch);
  }
  EXPECT_THROW(batch_graphs(std::vector<const RoomGraph*>{}), Error);
}

TEST(graph_io, bitwise_round_trip) {
  std::vector<RoomGraph> gs = synth_graphs(12, 31);
  std::string path = temp_path("graphs_rt.jsonl");
  write_graphs(gs, path);
  std::vector<RoomGraph> back = read_graphs(path);
  ASSERT_EQ(back.size(), gs.size());
  for (size_t g = 0; g < gs.size(); ++g) {
    EXPECT_EQ(back[g].n, gs[g].n);
    EXPECT_EQ(back[g].features, gs[g].features);  // exact doubles
    EXPECT_EQ(back[g].edges, gs[g].edges);
    EXPECT_EQ(back[g].labels, gs[g].labels);
    EXPECT_EQ(back[g].plan_id, gs[g].plan_id);
  }
}

TEST(graph_io, schema_violations_rejected) {
  std::string path = temp_path("bad_graphs.jsonl");
  {
    std::ofstream out(path);
    // edge endpoint out of range
    out << R"({"plan_id": "x", "x": [[1,1,1,1,0,0],[1,1,1,1,0,0]],)"
        << R"( "edges": [[0,5]], "y": [0,1]})"
        << "\n";
  }
  try {
    read_graphs(path);
    FAIL() << "expected E_SCHEMA";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::schema);
    EXPECT_NE(e.message().find("line 1"), std::string::npos);
  }

  {
    std::ofstream out(path);
    out << R"({"plan_id": "x", "x": [[1,1,1,1,0,0]], "edges": [], "y": [0, 1]})"
        << "\n";  // label count mismatch
  }
  EXPECT_THROW(read_graphs(path), Error);

  {
    std::ofstream out(path);
    out << R"({"plan_id": "x", "x": [[1,1,1,1,0)" << "\n";  // truncated JSON
  }
  EXPECT_THROW(read_graphs(path), Error);

  EXPECT_THROW(read_graphs(temp_path("missing_graphs.jsonl")), Error);
}

}  // namespace
}  // namespace floorgnn
