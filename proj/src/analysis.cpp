#include "floorgnn/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "floorgnn/error.hpp"
#include "floorgnn/rng.hpp"

namespace floorgnn {

EmbeddingDump export_embeddings(ModelKind kind, const std::vector<RoomGraph>& graphs,
                                int cap, uint64_t seed, int depth,
                                std::optional<uint64_t> sample_seed) {
  if (graphs.empty()) fail(ErrorCode::empty_data, "export_embeddings on empty graph list");
  if (cap < 1) fail(ErrorCode::bad_config, "embedding cap must be >= 1");

  ModelConfig cfg;
  cfg.kind = kind;
  cfg.depth = depth;
  cfg.seed = seed;
  Model m = init_model(cfg);  // untrained by design

  long total_nodes = 0;
  for (const RoomGraph& g : graphs) total_nodes += g.n;
  long want = std::min<long>(cap, total_nodes);

  // Global node ids in dataset order; either the prefix or a uniform sample.
  std::vector<uint8_t> take;
  if (sample_seed && want < total_nodes) {
    std::vector<long> ids(static_cast<size_t>(total_nodes));
    for (long i = 0; i < total_nodes; ++i) ids[static_cast<size_t>(i)] = i;
    Rng rng(mix_seed(*sample_seed));
    rng.shuffle(ids);
    take.assign(static_cast<size_t>(total_nodes), 0);
    for (long i = 0; i < want; ++i) take[static_cast<size_t>(ids[static_cast<size_t>(i)])] = 1;
  }

  EmbeddingDump dump;
  dump.dim = cfg.hidden_dim;
  dump.rows.reserve(static_cast<size_t>(want));
  long global = 0;
  for (const RoomGraph& g : graphs) {
    if (static_cast<long>(dump.rows.size()) >= want) break;
    Tensor emb = node_embeddings(m, g);
    for (int i = 0; i < g.n && static_cast<long>(dump.rows.size()) < want; ++i, ++global) {
      if (!take.empty() && !take[static_cast<size_t>(global)]) continue;
      EmbeddingRow row;
      row.plan_id = g.plan_id;
      row.node = i;
      row.label = g.labels[i];
      row.e.assign(emb.data.begin() + static_cast<size_t>(i) * emb.cols,
                   emb.data.begin() + static_cast<size_t>(i + 1) * emb.cols);
      dump.rows.push_back(std::move(row));
    }
  }
  return dump;
}

namespace {

void write_double(std::ofstream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_double(const std::string& s, size_t line_no) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    fail(ErrorCode::schema,
         "line " + std::to_string(line_no) + ": not a number: " + s);
  return v;
}

int parse_int(const std::string& s, size_t line_no) {
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    fail(ErrorCode::schema,
         "line " + std::to_string(line_no) + ": not an integer: " + s);
  return static_cast<int>(v);
}

}  // namespace

void write_embeddings_csv(const EmbeddingDump& dump, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write " + path);
  out << "plan_id,node,label";
  for (int i = 0; i < dump.dim; ++i) out << ",e" << i;
  out << '\n';
  for (const EmbeddingRow& r : dump.rows) {
    out << r.plan_id << ',' << r.node << ',' << r.label;
    for (double v : r.e) {
      out << ',';
      write_double(out, v);
    }
    out << '\n';
  }
  out.flush();
  if (!out) fail(ErrorCode::io, "write error on " + path);
}

EmbeddingDump read_embeddings_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::schema, "empty embeddings file");
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 4 || header[0] != "plan_id" || header[1] != "node" ||
      header[2] != "label")
    fail(ErrorCode::schema, "unexpected embeddings header");
  for (size_t i = 3; i < header.size(); ++i)
    if (header[i] != "e" + std::to_string(i - 3))
      fail(ErrorCode::schema, "unexpected embeddings header column " + header[i]);

  EmbeddingDump dump;
  dump.dim = static_cast<int>(header.size()) - 3;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      fail(ErrorCode::schema,
           "line " + std::to_string(line_no) + ": expected " +
               std::to_string(header.size()) + " fields, got " +
               std::to_string(fields.size()));
    EmbeddingRow row;
    row.plan_id = fields[0];
    row.node = parse_int(fields[1], line_no);
    row.label = parse_int(fields[2], line_no);
    row.e.reserve(static_cast<size_t>(dump.dim));
    for (int i = 0; i < dump.dim; ++i)
      row.e.push_back(parse_double(fields[static_cast<size_t>(i) + 3], line_no));
    dump.rows.push_back(std::move(row));
  }
  if (in.bad()) fail(ErrorCode::io, "read error on " + path);
  return dump;
}

void write_tsne_csv(const EmbeddingDump& dump, const std::vector<double>& coords,
                    const std::string& path) {
  if (coords.size() != dump.rows.size() * 2)
    fail(ErrorCode::shape, "t-SNE coordinate count does not match embedding rows");
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write " + path);
  out << "plan_id,node,label,x,y\n";
  for (size_t i = 0; i < dump.rows.size(); ++i) {
    const EmbeddingRow& r = dump.rows[i];
    out << r.plan_id << ',' << r.node << ',' << r.label << ',';
    write_double(out, coords[i * 2]);
    out << ',';
    write_double(out, coords[i * 2 + 1]);
    out << '\n';
  }
  out.flush();
  if (!out) fail(ErrorCode::io, "write error on " + path);
}

}  // namespace floorgnn
