#include "floorgnn/floorplan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "floorgnn/error.hpp"
#include "json.hpp"

namespace floorgnn {

namespace {

using nlohmann::json;

Rect parse_bbox(const json& j, size_t line_no) {
  if (!j.is_array() || j.size() != 4 || !std::all_of(j.begin(), j.end(), [](const json& v) {
        return v.is_number();
      })) {
    fail(ErrorCode::schema,
         "line " + std::to_string(line_no) + ": \"bbox\" must be [x0,y0,x1,y1]");
  }
  return Rect{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
              j[3].get<double>()};
}

std::array<double, 2> parse_point(const json& j, const char* key, size_t line_no) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(ErrorCode::schema, "line " + std::to_string(line_no) + ": \"" + key +
                                "\" must be [x,y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

FloorPlanRecord parse_plan(const std::string& text, size_t line_no) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::schema, "line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!j.is_object())
    fail(ErrorCode::schema, "line " + std::to_string(line_no) + ": not an object");

  FloorPlanRecord plan;
  if (!j.contains("id") || !j["id"].is_string())
    fail(ErrorCode::schema, "line " + std::to_string(line_no) + ": missing \"id\"");
  plan.id = j["id"].get<std::string>();

  if (!j.contains("rooms") || !j["rooms"].is_array())
    fail(ErrorCode::schema, "line " + std::to_string(line_no) + ": missing \"rooms\"");
  for (const json& jr : j["rooms"]) {
    if (!jr.is_object() || !jr.contains("bbox"))
      fail(ErrorCode::schema, "line " + std::to_string(line_no) + ": room lacks \"bbox\"");
    if (!jr.contains("category") || !jr["category"].is_string() ||
        jr["category"].get<std::string>().empty()) {
      fail(ErrorCode::schema,
           "line " + std::to_string(line_no) + ": room lacks \"category\"");
    }
    plan.rooms.push_back(
        RoomRecord{parse_bbox(jr["bbox"], line_no), jr["category"].get<std::string>()});
  }

  if (j.contains("walls")) {
    if (!j["walls"].is_array())
      fail(ErrorCode::schema, "line " + std::to_string(line_no) + ": \"walls\" not a list");
    for (const json& jw : j["walls"]) {
      if (!jw.is_object() || !jw.contains("p1") || !jw.contains("p2"))
        fail(ErrorCode::schema,
             "line " + std::to_string(line_no) + ": wall lacks endpoints");
      WallRecord wall;
      wall.p1 = parse_point(jw["p1"], "p1", line_no);
      wall.p2 = parse_point(jw["p2"], "p2", line_no);
      if (jw.contains("rooms")) {
        if (!jw["rooms"].is_array())
          fail(ErrorCode::schema,
               "line " + std::to_string(line_no) + ": wall \"rooms\" not a list");
        for (const json& jr : jw["rooms"]) {
          if (!jr.is_number_integer())
            fail(ErrorCode::schema,
                 "line " + std::to_string(line_no) + ": wall room id not an integer");
          int id = jr.get<int>();
          if (id < 0 || id >= static_cast<int>(plan.rooms.size()))
            fail(ErrorCode::schema, "line " + std::to_string(line_no) +
                                        ": wall room id " + std::to_string(id) +
                                        " out of range");
          wall.room_ids.push_back(id);
        }
      }
      wall.has_door = jw.contains("door") && jw["door"].is_boolean() &&
                      jw["door"].get<bool>();
      if (jw.contains("door") && !jw["door"].is_boolean())
        fail(ErrorCode::schema,
             "line " + std::to_string(line_no) + ": wall \"door\" not a boolean");
      plan.walls.push_back(std::move(wall));
    }
  }

  if (j.contains("source_image") && !j["source_image"].is_null()) {
    if (!j["source_image"].is_string())
      fail(ErrorCode::schema,
           "line " + std::to_string(line_no) + ": \"source_image\" not a string");
    plan.source_image = j["source_image"].get<std::string>();
  }
  return plan;
}

json plan_to_json(const FloorPlanRecord& plan) {
  json rooms = json::array();
  for (const RoomRecord& r : plan.rooms) {
    rooms.push_back({{"bbox", {r.bbox.x0, r.bbox.y0, r.bbox.x1, r.bbox.y1}},
                     {"category", r.category}});
  }
  json walls = json::array();
  for (const WallRecord& w : plan.walls) {
    walls.push_back({{"p1", {w.p1[0], w.p1[1]}},
                     {"p2", {w.p2[0], w.p2[1]}},
                     {"rooms", w.room_ids},
                     {"door", w.has_door}});
  }
  json j = {{"id", plan.id}, {"rooms", rooms}, {"walls", walls}};
  if (plan.source_image)
    j["source_image"] = *plan.source_image;
  else
    j["source_image"] = nullptr;
  return j;
}

CategoryVocab resolve_vocab(const std::vector<FloorPlanRecord>& plans,
                            std::optional<CategoryVocab> explicit_vocab) {
  std::set<std::string> seen;
  for (const FloorPlanRecord& p : plans)
    for (const RoomRecord& r : p.rooms) seen.insert(r.category);

  if (explicit_vocab) {
    for (const std::string& c : seen)
      if (!explicit_vocab->contains(c))
        fail(ErrorCode::unknown_category, "category not in vocab: " + c);
    return *explicit_vocab;
  }
  CategoryVocab def = CategoryVocab::default_categories();
  bool covered = std::all_of(seen.begin(), seen.end(),
                             [&](const std::string& c) { return def.contains(c); });
  if (covered) return def;
  return CategoryVocab(std::vector<std::string>(seen.begin(), seen.end()));
}

bool plan_is_clean(const FloorPlanRecord& p) {
  if (p.rooms.size() < 2) return false;
  for (const RoomRecord& r : p.rooms)
    if (r.bbox.degenerate()) return false;
  return true;
}

}  // namespace

Dataset load_dataset(const std::string& path, DataFormat format,
                     std::optional<CategoryVocab> vocab) {
  (void)format;  // jsonl is the only format
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path);

  Dataset d;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    d.plans.push_back(parse_plan(line, line_no));
  }
  if (in.bad()) fail(ErrorCode::io, "read error on " + path);
  d.vocab = resolve_vocab(d.plans, std::move(vocab));
  return d;
}

void save_dataset(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write " + path);
  for (const FloorPlanRecord& plan : d.plans) out << plan_to_json(plan).dump() << '\n';
  out.flush();
  if (!out) fail(ErrorCode::io, "write error on " + path);
}

CleanResult clean_dataset(const Dataset& d) {
  CleanResult result;
  result.dataset.vocab = d.vocab;
  for (const FloorPlanRecord& p : d.plans) {
    if (plan_is_clean(p))
      result.dataset.plans.push_back(p);
    else
      ++result.removed;
  }
  return result;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& d, int n_train) {
  int n = static_cast<int>(d.plans.size());
  if (n_train <= 0 || n_train >= n)
    fail(ErrorCode::bad_split, "n_train " + std::to_string(n_train) +
                                   " out of range for " + std::to_string(n) + " plans");
  Dataset train, test;
  train.vocab = d.vocab;
  test.vocab = d.vocab;
  train.plans.assign(d.plans.begin(), d.plans.begin() + n_train);
  test.plans.assign(d.plans.begin() + n_train, d.plans.end());
  return {std::move(train), std::move(test)};
}

FloorPlanRecord normalize_plan(const FloorPlanRecord& p) {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();
  auto expand = [&](double x, double y) {
    min_x = std::min(min_x, x);
    min_y = std::min(min_y, y);
    max_x = std::max(max_x, x);
    max_y = std::max(max_y, y);
  };
  for (const RoomRecord& r : p.rooms) {
    expand(r.bbox.x0, r.bbox.y0);
    expand(r.bbox.x1, r.bbox.y1);
  }
  for (const WallRecord& w : p.walls) {
    expand(w.p1[0], w.p1[1]);
    expand(w.p2[0], w.p2[1]);
  }
  if (p.rooms.empty() && p.walls.empty())
    fail(ErrorCode::degenerate, "plan " + p.id + " has no geometry");

  double scale = std::max(max_x - min_x, max_y - min_y);
  if (scale <= 0.0)
    fail(ErrorCode::degenerate, "plan " + p.id + " has zero spatial extent");

  FloorPlanRecord out = p;
  auto tx = [&](double v) { return (v - min_x) / scale; };
  auto ty = [&](double v) { return (v - min_y) / scale; };
  for (RoomRecord& r : out.rooms) {
    r.bbox = Rect{tx(r.bbox.x0), ty(r.bbox.y0), tx(r.bbox.x1), ty(r.bbox.y1)};
  }
  for (WallRecord& w : out.walls) {
    w.p1 = {tx(w.p1[0]), ty(w.p1[1])};
    w.p2 = {tx(w.p2[0]), ty(w.p2[1])};
  }
  return out;
}

}  // namespace floorgnn
