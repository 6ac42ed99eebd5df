#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "floorgnn/floorplan.hpp"

namespace floorgnn {

inline constexpr int kNumFeatures = 6;  // area, length, width, doors, is_parent, is_child

struct GraphBuildConfig {
  double adjacency_threshold = 0.03;  // on normalized bounding boxes, strict <
  double nesting_ratio = 0.7;         // overlap fraction of own area, strict >
};

struct RoomGraph {
  int n = 0;
  std::vector<double> features;              // n x 6, row-major
  std::vector<std::pair<int, int>> edges;    // undirected, i<j, sorted, unique
  std::vector<int> labels;                   // n category indices
  std::string plan_id;
};

// Undirected edge (i,j), i<j, present iff the gap between the two room
// rectangles is strictly below cfg.adjacency_threshold. Expects a
// normalized plan.
std::vector<std::pair<int, int>> build_adjacency(const FloorPlanRecord& p,
                                                 const GraphBuildConfig& cfg);

struct NestingFlags {
  std::vector<uint8_t> is_parent;
  std::vector<uint8_t> is_child;
};

// Room i is a child of j iff area(bbox_i ∩ bbox_j) > nesting_ratio * area(bbox_i).
// A room may be both parent and child.
NestingFlags detect_nesting(const FloorPlanRecord& p, const GraphBuildConfig& cfg);

// doors[i] = number of door-bearing walls mapped to room i. A door in a
// shared wall counts for every room listed.
std::vector<int> count_doors(const FloorPlanRecord& p);

// Row i = [area, length, width, door_count, is_parent, is_child] with
// length = max(dx, dy) and width = min(dx, dy), normalized units.
std::vector<double> extract_features(const FloorPlanRecord& p, const GraphBuildConfig& cfg);

// normalize_plan -> extract_features -> build_adjacency -> labels via vocab.
// E_UNKNOWN_CATEGORY for a category missing from vocab, E_EMPTY_EDGES when
// no two rooms are adjacent.
RoomGraph build_graph(const FloorPlanRecord& p, const CategoryVocab& vocab,
                      const GraphBuildConfig& cfg);

// Disjoint union of graphs; node indices of graph g are offset by the total
// node count of the preceding graphs.
struct BatchedGraph {
  int n = 0;
  std::vector<double> features;  // n x 6
  std::vector<std::pair<int, int>> edges;
  std::vector<int> labels;
  std::vector<int> graph_of_node;
  std::vector<int> node_offsets;  // size G+1
  std::vector<int> edge_offsets;  // size G+1
  std::vector<std::string> plan_ids;

  int num_graphs() const { return static_cast<int>(plan_ids.size()); }
};

BatchedGraph batch_graphs(const std::vector<const RoomGraph*>& gs);
BatchedGraph batch_graphs(const std::vector<RoomGraph>& gs);

// Inverse of batch_graphs; recovers every constituent graph exactly.
std::vector<RoomGraph> unbatch_graphs(const BatchedGraph& b);

// Graph dump format, one graph per line:
//   {"plan_id": str, "x": [[6 floats]...], "edges": [[i,j]...], "y": [int...]}
void write_graphs(const std::vector<RoomGraph>& gs, const std::string& path);
std::vector<RoomGraph> read_graphs(const std::string& path);

}  // namespace floorgnn
