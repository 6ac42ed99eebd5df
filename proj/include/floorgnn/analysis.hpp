#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "floorgnn/graph.hpp"
#include "floorgnn/model.hpp"

namespace floorgnn {

struct EmbeddingRow {
  std::string plan_id;
  int node = 0;   // node index within its plan
  int label = 0;
  std::vector<double> e;  // hidden_dim values
};

struct EmbeddingDump {
  int dim = 0;
  std::vector<EmbeddingRow> rows;
};

// Node embeddings from an UNTRAINED model (init_model with `seed`), taken in
// graph order up to `cap` nodes. When sample_seed is set, a uniform sample of
// cap nodes replaces the prefix rule.
EmbeddingDump export_embeddings(ModelKind kind, const std::vector<RoomGraph>& graphs,
                                int cap = 10000, uint64_t seed = 0, int depth = 3,
                                std::optional<uint64_t> sample_seed = std::nullopt);

// header: plan_id,node,label,e0..e{dim-1}
void write_embeddings_csv(const EmbeddingDump& dump, const std::string& path);
EmbeddingDump read_embeddings_csv(const std::string& path);

// header: plan_id,node,label,x,y
void write_tsne_csv(const EmbeddingDump& dump, const std::vector<double>& coords,
                    const std::string& path);

}  // namespace floorgnn
