#include "floorgnn/analysis.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "floorgnn/error.hpp"
#include "floorgnn/floorplan.hpp"
#include "floorgnn/graph.hpp"
#include "floorgnn/model.hpp"

namespace floorgnn {
namespace {

std::string temp_path(const std::string& name) {
  return ::testing::TempDir() + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
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

int total_nodes(const std::vector<RoomGraph>& gs) {
  int n = 0;
  for (const RoomGraph& g : gs) n += g.n;
  return n;
}

TEST(export_embeddings, full_dump_matches_untrained_model) {
  std::vector<RoomGraph> gs = synth_graphs(6, 50);
  EmbeddingDump dump = export_embeddings(ModelKind::sage, gs, 10000, 3);

  ASSERT_EQ(dump.dim, 16);
  ASSERT_EQ(static_cast<int>(dump.rows.size()), total_nodes(gs));

  ModelConfig mc;
  mc.kind = ModelKind::sage;
  mc.depth = 3;
  mc.seed = 3;
  Model m = init_model(mc);
  size_t at = 0;
  for (const RoomGraph& g : gs) {
    Tensor e = node_embeddings(m, g);
    for (int i = 0; i < g.n; ++i, ++at) {
      const EmbeddingRow& row = dump.rows[at];
      EXPECT_EQ(row.plan_id, g.plan_id);
      EXPECT_EQ(row.node, i);
      EXPECT_EQ(row.label, g.labels[i]);
      ASSERT_EQ(row.e.size(), 16u);
      for (int c = 0; c < 16; ++c) EXPECT_EQ(row.e[c], e.at(i, c));
    }
  }
}

TEST(export_embeddings, cap_takes_prefix_in_graph_order) {
  std::vector<RoomGraph> gs = synth_graphs(6, 51);
  EmbeddingDump full = export_embeddings(ModelKind::mlp, gs, 10000, 1);
  EmbeddingDump capped = export_embeddings(ModelKind::mlp, gs, 9, 1);
  ASSERT_EQ(capped.rows.size(), 9u);
  for (size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(capped.rows[i].plan_id, full.rows[i].plan_id);
    EXPECT_EQ(capped.rows[i].node, full.rows[i].node);
    EXPECT_EQ(capped.rows[i].e, full.rows[i].e);
  }
}

TEST(export_embeddings, sampling_is_a_deterministic_ordered_subset) {
  std::vector<RoomGraph> gs = synth_graphs(8, 52);
  EmbeddingDump full = export_embeddings(ModelKind::gcn, gs, 10000, 2);
  int cap = 11;
  EmbeddingDump s1 = export_embeddings(ModelKind::gcn, gs, cap, 2, 3, 777);
  EmbeddingDump s2 = export_embeddings(ModelKind::gcn, gs, cap, 2, 3, 777);
  ASSERT_EQ(s1.rows.size(), static_cast<size_t>(cap));

  // deterministic
  for (size_t i = 0; i < s1.rows.size(); ++i) {
    EXPECT_EQ(s1.rows[i].plan_id, s2.rows[i].plan_id);
    EXPECT_EQ(s1.rows[i].node, s2.rows[i].node);
    EXPECT_EQ(s1.rows[i].e, s2.rows[i].e);
  }

  // subsequence of the full enumeration (original order, no duplicates)
  size_t cursor = 0;
  for (const EmbeddingRow& row : s1.rows) {
    while (cursor < full.rows.size() &&
           (full.rows[cursor].plan_id != row.plan_id ||
            full.rows[cursor].node != row.node))
      ++cursor;
    ASSERT_LT(cursor, full.rows.size()) << "sampled row not in original order";
    EXPECT_EQ(full.rows[cursor].e, row.e);
    ++cursor;
  }

  EmbeddingDump s3 = export_embeddings(ModelKind::gcn, gs, cap, 2, 3, 778);
  bool differs = false;
  for (size_t i = 0; i < s1.rows.size() && !differs; ++i)
    differs = s1.rows[i].plan_id != s3.rows[i].plan_id ||
              s1.rows[i].node != s3.rows[i].node;
  EXPECT_TRUE(differs);
}

TEST(export_embeddings, weight_seed_changes_values) {
  std::vector<RoomGraph> gs = synth_graphs(3, 53);
  EmbeddingDump a = export_embeddings(ModelKind::tagcn, gs, 10000, 5);
  EmbeddingDump b = export_embeddings(ModelKind::tagcn, gs, 10000, 5);
  EmbeddingDump c = export_embeddings(ModelKind::tagcn, gs, 10000, 6);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].e, b.rows[i].e);
  bool differs = false;
  for (size_t i = 0; i < a.rows.size() && !differs; ++i)
    differs = a.rows[i].e != c.rows[i].e;
  EXPECT_TRUE(differs);
}

TEST(export_embeddings, input_validation) {
  std::vector<RoomGraph> gs = synth_graphs(2, 54);
  try {
    export_embeddings(ModelKind::mlp, {}, 10, 0);
    FAIL() << "expected E_EMPTY_DATA";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_data);
  }
  try {
    export_embeddings(ModelKind::mlp, gs, 0, 0);
    FAIL() << "expected E_BAD_CONFIG";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::bad_config);
  }
}

TEST(embeddings_csv, bitwise_round_trip) {
  std::vector<RoomGraph> gs = synth_graphs(5, 55);
  EmbeddingDump dump = export_embeddings(ModelKind::gat, gs, 10000, 9);
  std::string path = temp_path("embed_rt.csv");
  write_embeddings_csv(dump, path);
  EmbeddingDump back = read_embeddings_csv(path);

  ASSERT_EQ(back.dim, dump.dim);
  ASSERT_EQ(back.rows.size(), dump.rows.size());
  for (size_t i = 0; i < dump.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].plan_id, dump.rows[i].plan_id);
    EXPECT_EQ(back.rows[i].node, dump.rows[i].node);
    EXPECT_EQ(back.rows[i].label, dump.rows[i].label);
    EXPECT_EQ(back.rows[i].e, dump.rows[i].e);  // %.17g survives exactly
  }

  std::string text = slurp(path);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "plan_id,node,label,e0,e1,e2,e3,e4,e5,e6,e7,e8,e9,e10,e11,e12,e13,e14,e15");
}

TEST(embeddings_csv, schema_violations_rejected) {
  std::string path = temp_path("embed_bad.csv");

  std::ofstream(path) << "plan_id,node,label,x0,x1\np,0,1,0.5,0.5\n";
  try {
    read_embeddings_csv(path);
    FAIL() << "expected E_SCHEMA";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::schema);
  }

  std::ofstream(path) << "plan_id,node,label,e0,e1\np,0,1,0.5\n";  // short row
  EXPECT_THROW(read_embeddings_csv(path), Error);

  std::ofstream(path) << "plan_id,node,label,e0\np,zero,1,0.5\n";  // bad int
  EXPECT_THROW(read_embeddings_csv(path), Error);

  EXPECT_THROW(read_embeddings_csv(temp_path("missing_embed.csv")), Error);
}

TEST(tsne_csv, exact_layout_and_shape_check) {
  EmbeddingDump dump;
  dump.dim = 2;
  dump.rows.push_back({"plan_a", 0, 3, {0.0, 0.0}});
  dump.rows.push_back({"plan_a", 1, 5, {0.0, 0.0}});
  std::vector<double> coords{1.5, -2.0, 0.25, 4.0};
  std::string path = temp_path("tsne_out.csv");
  write_tsne_csv(dump, coords, path);
  EXPECT_EQ(slurp(path),
            "plan_id,node,label,x,y\n"
            "plan_a,0,3,1.5,-2\n"
            "plan_a,1,5,0.25,4\n");

  try {
    write_tsne_csv(dump, {1.0, 2.0}, path);  // 2 coords for 2 rows: wrong
    FAIL() << "expected E_SHAPE";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::shape);
  }
}

}  // namespace
}  // namespace floorgnn
