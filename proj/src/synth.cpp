#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "floorgnn/error.hpp"
#include "floorgnn/floorplan.hpp"
#include "floorgnn/rng.hpp"

namespace floorgnn {

namespace {

// Defaults of GraphBuildConfig; the generator guarantees its structural
// properties (connectivity, label rule) against these values.
constexpr double kThreshold = 0.03;
constexpr double kNestingRatio = 0.7;

// Slot geometry: rooms occupy at most 0.55 of a slot's pitch, so the gap
// between rooms in adjacent slots is at least 0.45 * pitch. With at most
// 12 slots that floor is 0.0375 > kThreshold, and the stacks stay shorter
// than the hub's unit width, so normalization preserves the layout scale.
constexpr int kMaxSlots = 12;
constexpr int kMaxRooms = 24;

struct Anchor {
  double x0, x1, y;
  bool share_hub;  // anchor wall is mapped to both the room and the hub
};

// Structural category rule, recomputed from the finished geometry rather
// than from the construction roles: largest-area room -> 0; rooms nested
// inside another (> 70% of own area overlapped) -> 5; everything else ->
// (number of rooms within the adjacency threshold) mod n_categories.
std::vector<int> assign_labels(const std::vector<Rect>& rects, int n_categories) {
  int n = static_cast<int>(rects.size());
  int largest = 0;
  for (int i = 1; i < n; ++i)
    if (rects[i].area() > rects[largest].area()) largest = i;

  std::vector<int> labels(n, 0);
  for (int i = 0; i < n; ++i) {
    if (i == largest) continue;
    bool nested = false;
    for (int j = 0; j < n && !nested; ++j)
      if (j != i &&
          rect_intersection_area(rects[i], rects[j]) > kNestingRatio * rects[i].area())
        nested = true;
    if (nested) {
      labels[i] = 5;
      continue;
    }
    int degree = 0;
    for (int j = 0; j < n; ++j)
      if (j != i && rect_gap_distance(rects[i], rects[j]) < kThreshold) ++degree;
    labels[i] = degree % n_categories;
  }
  return labels;
}

FloorPlanRecord make_plan(const SynthConfig& cfg, const CategoryVocab& vocab,
                          int plan_index) {
  Rng rng(mix_seed(cfg.seed, static_cast<uint64_t>(plan_index)));
  int n = rng.uniform_int(cfg.rooms_min, cfg.rooms_max);

  // Composition: 1 hub + optional nested child + singles + pairs. The child
  // would carry category 5, so it only appears when the vocab reaches it.
  bool want_child = cfg.n_categories > 5 && n >= 5 && rng.bernoulli(0.5);
  int m = n - 1 - (want_child ? 1 : 0);
  int n_pairs = 0;
  int n_singles = 0;
  if (m == 1) {
    n_singles = 1;
  } else if (m == 2) {
    if (rng.bernoulli(0.5))
      n_pairs = 1;
    else
      n_singles = 2;
  } else {
    n_pairs = rng.uniform_int(std::max(1, m - kMaxSlots), (m - 1) / 2);
    n_singles = m - 2 * n_pairs;
  }

  // Layout units: the hub spans x in [0,1]; stacks above it stay below
  // height 0.75, so the longer side of the plan is always the hub's width.
  double hub_h = rng.uniform(0.28, 0.38);
  std::vector<Rect> rects;
  rects.push_back(Rect{0.0, 0.0, 1.0, hub_h});
  std::vector<Anchor> anchors;  // parallel to rects[1..]

  int count_side = n_singles + n_pairs;
  std::vector<int> is_pair(n_singles, 0);
  is_pair.insert(is_pair.end(), n_pairs, 1);
  rng.shuffle(is_pair);

  double pitch = 1.0 / count_side;
  for (int s = 0; s < count_side; ++s) {
    double cx = (s + 0.5) * pitch;
    double w = pitch * rng.uniform(0.35, 0.55);
    double gap = rng.uniform(0.006, 0.02);
    double h = rng.uniform(0.10, 0.16);
    Rect inner{cx - w / 2, hub_h + gap, cx + w / 2, hub_h + gap + h};
    rects.push_back(inner);
    anchors.push_back(Anchor{inner.x0, inner.x1, hub_h, true});
    if (is_pair[s]) {
      double w2 = pitch * rng.uniform(0.35, 0.55);
      double gap2 = rng.uniform(0.006, 0.02);
      double h2 = rng.uniform(0.10, 0.16);
      Rect outer{cx - w2 / 2, inner.y1 + gap2, cx + w2 / 2, inner.y1 + gap2 + h2};
      rects.push_back(outer);
      // The outer room's anchor wall belongs to it alone, keeping door-count
      // distributions identical across singles, inner and outer pair rooms.
      anchors.push_back(Anchor{outer.x0, outer.x1, outer.y0, false});
    }
  }
  if (want_child) {
    double cw = rng.uniform(0.15, 0.25);
    double ch = rng.uniform(0.08, 0.14);
    double cx0 = rng.uniform(0.05, 0.95 - cw);
    double cy0 = rng.uniform(0.05, hub_h - 0.05 - ch);
    rects.push_back(Rect{cx0, cy0, cx0 + cw, cy0 + ch});
    anchors.push_back(Anchor{cx0, cx0 + cw, cy0, true});
  }

  std::vector<int> labels = assign_labels(rects, cfg.n_categories);

  // Walls: every room gets its four bbox edges (door p=0.2 each) plus, for
  // non-hub rooms, one anchor wall (door p=0.5) that is shared with the hub
  // except for outer pair rooms.
  std::vector<WallRecord> walls;
  auto edge_walls = [&](int idx, const Rect& r) {
    const double seg[4][4] = {{r.x0, r.y0, r.x1, r.y0},
                              {r.x1, r.y0, r.x1, r.y1},
                              {r.x1, r.y1, r.x0, r.y1},
                              {r.x0, r.y1, r.x0, r.y0}};
    for (const double* s : seg) {
      WallRecord w;
      w.p1 = {s[0], s[1]};
      w.p2 = {s[2], s[3]};
      w.room_ids = {idx};
      w.has_door = rng.bernoulli(0.2);
      walls.push_back(std::move(w));
    }
  };
  edge_walls(0, rects[0]);
  for (int i = 1; i < n; ++i) {
    edge_walls(i, rects[i]);
    const Anchor& a = anchors[static_cast<size_t>(i) - 1];
    WallRecord w;
    w.p1 = {a.x0, a.y};
    w.p2 = {a.x1, a.y};
    if (a.share_hub)
      w.room_ids = {i, 0};
    else
      w.room_ids = {i};
    w.has_door = rng.bernoulli(0.5);
    walls.push_back(std::move(w));
  }

  // Source-unit disguise: scale and translate so loaders must normalize.
  double scale = rng.uniform(80.0, 250.0);
  double tx = rng.uniform(-50.0, 50.0);
  double ty = rng.uniform(-50.0, 50.0);
  for (Rect& r : rects) {
    r = Rect{r.x0 * scale + tx, r.y0 * scale + ty, r.x1 * scale + tx,
             r.y1 * scale + ty};
  }
  for (WallRecord& w : walls) {
    w.p1 = {w.p1[0] * scale + tx, w.p1[1] * scale + ty};
    w.p2 = {w.p2[0] * scale + tx, w.p2[1] * scale + ty};
  }

  // Shuffle room order so structural roles are not readable from indices.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<int> new_index(n);
  for (int i = 0; i < n; ++i) new_index[order[i]] = i;

  FloorPlanRecord plan;
  plan.id = "synth-" + std::to_string(plan_index);
  plan.rooms.reserve(n);
  for (int i = 0; i < n; ++i) {
    plan.rooms.push_back(
        RoomRecord{rects[order[i]], vocab.labels()[labels[order[i]]]});
  }
  for (WallRecord& w : walls)
    for (int& id : w.room_ids) id = new_index[id];
  plan.walls = std::move(walls);
  return plan;
}

}  // namespace

Dataset generate_synthetic(const SynthConfig& cfg) {
  if (cfg.n_plans < 0) fail(ErrorCode::bad_config, "n_plans must be >= 0");
  if (cfg.rooms_min < 2 || cfg.rooms_min > cfg.rooms_max)
    fail(ErrorCode::bad_config, "need 2 <= rooms_min <= rooms_max");
  if (cfg.rooms_max > kMaxRooms)
    fail(ErrorCode::bad_config,
         "generator supports at most " + std::to_string(kMaxRooms) +
             " rooms per plan");
  if (cfg.n_categories < 1 || cfg.n_categories > 8)
    fail(ErrorCode::bad_config, "n_categories must be in 1..8");

  Dataset d;
  d.vocab = CategoryVocab::default_categories();
  d.plans.reserve(static_cast<size_t>(cfg.n_plans));
  for (int i = 0; i < cfg.n_plans; ++i)
    d.plans.push_back(make_plan(cfg, d.vocab, i));
  return d;
}

}  // namespace floorgnn
