#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "floorgnn/geometry.hpp"
#include "floorgnn/vocab.hpp"

namespace floorgnn {

struct RoomRecord {
  Rect bbox;
  std::string category;
};

struct WallRecord {
  std::array<double, 2> p1{0.0, 0.0};
  std::array<double, 2> p2{0.0, 0.0};
  std::vector<int> room_ids;  // rooms this wall belongs to
  bool has_door = false;
};

struct FloorPlanRecord {
  std::string id;
  std::vector<RoomRecord> rooms;
  std::vector<WallRecord> walls;
  std::optional<std::string> source_image;
};

struct Dataset {
  std::vector<FloorPlanRecord> plans;
  CategoryVocab vocab;
};

enum class DataFormat { jsonl };

// One plan per line:
//   {"id": str, "rooms": [{"bbox": [x0,y0,x1,y1], "category": str}],
//    "walls": [{"p1": [x,y], "p2": [x,y], "rooms": [int], "door": bool}],
//    "source_image": str|null}
// Vocab resolution: an explicit vocab wins; otherwise the default 8-category
// vocab is used when it covers every category in the file (keeps canonical
// label indices), else the sorted-unique categories are inferred.
Dataset load_dataset(const std::string& path, DataFormat format = DataFormat::jsonl,
                     std::optional<CategoryVocab> vocab = std::nullopt);

void save_dataset(const Dataset& d, const std::string& path);

struct CleanResult {
  Dataset dataset;
  int removed = 0;
};

// Drops plans with fewer than 2 rooms and plans holding any degenerate
// (zero-area or inverted) bbox. Total and idempotent.
CleanResult clean_dataset(const Dataset& d);

// Prefix split: first n_train plans in dataset order, remainder test.
std::pair<Dataset, Dataset> split_dataset(const Dataset& d, int n_train);

struct SynthConfig {
  int n_plans = 0;
  int rooms_min = 4;
  int rooms_max = 10;
  uint64_t seed = 0;
  int n_categories = 8;
};

// Deterministic synthetic floor plans whose room-gap graph is connected
// under the 0.03 normalized adjacency threshold.
//
// Every plan is a wide corridor (the hub) with rooms attached along its
// top edge: "singles" touch only the hub, "pairs" are a room on the hub
// with a second room stacked outward (adjacent to its partner but not the
// hub), and at most one small room sits nested inside the hub.
//
// Categories follow a fixed structural rule: the largest-area room gets
// category 0; rooms nested inside another (by the 70% overlap rule) get
// category 5; every other room gets (number of rooms within the 0.03
// threshold) mod n_categories. Labels are therefore readable from features
// alone for the first two clauses, but require neighborhood structure for
// the degree clause.
Dataset generate_synthetic(const SynthConfig& cfg);

// Translates the plan so its bounding-box min corner is the origin, then
// divides every coordinate by the LONGER side of the plan's bounding box.
// Idempotent; output coordinates lie in [0, 1].
FloorPlanRecord normalize_plan(const FloorPlanRecord& p);

}  // namespace floorgnn
