#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "floorgnn/graph.hpp"
#include "floorgnn/tensor.hpp"

namespace floorgnn {

enum class ModelKind { mlp, gcn, gat, sage, tagcn };

const char* kind_name(ModelKind k);
std::optional<ModelKind> parse_kind(const std::string& name);

// Shared architecture: in_dim -> depth hidden layers of hidden_dim with ReLU
// -> one output layer of the same kind with no activation.
struct ModelConfig {
  ModelKind kind = ModelKind::mlp;
  int depth = 3;       // hidden-layer count; output layer not included
  int hidden_dim = 16;
  int in_dim = kNumFeatures;
  int out_dim = 8;
  int tagcn_k = 3;     // polynomial filter hops
  int gat_heads = 1;   // > 1 averages heads
  double gat_slope = 0.2;
  uint64_t seed = 0;
};

struct Param {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::vector<double> value;
};

struct Layer {
  std::vector<Param> params;
};

struct Model {
  ModelConfig config;
  std::vector<Layer> layers;  // depth + 1 entries
};

// Glorot-uniform weights, zero biases, deterministic in cfg.seed.
Model init_model(const ModelConfig& cfg);

std::vector<Param*> trainable_params(Model& m);
std::vector<const Param*> trainable_params(const Model& m);

// Edge tables shared by the layer ops, built once per (batched) graph.
struct GraphStructure {
  int n = 0;
  // directed edges without self-loops, mean-aggregation coefficients 1/deg(dst)
  std::vector<int> nbr_dst, nbr_src;
  std::vector<double> nbr_mean_coef;
  // symmetric-normalized adjacency with self-loops: 1/sqrt(d_i d_j)
  std::vector<int> prop_dst, prop_src;
  std::vector<double> prop_coef;
  // directed edges with self-loops, for attention softmax segments
  std::vector<int> att_dst, att_src;
};

GraphStructure make_structure(int n, const std::vector<std::pair<int, int>>& edges);
GraphStructure make_structure(const BatchedGraph& g);
GraphStructure make_structure(const RoomGraph& g);

// One message-passing step per kind. h is N x F; weights map F -> F'.
// Biases are applied by the model stack, not by these ops.

// D^{-1/2} (A+I) D^{-1/2} h W
Tensor gcn_forward(Tape& t, const Tensor& h, const GraphStructure& gs, const Tensor& w);

// Single-head attention over the neighborhood with self-loop:
// e_ij = LeakyReLU(a^T [W h_i || W h_j]), alpha = segment softmax, out_i = sum alpha_ij W h_j.
Tensor gat_forward(Tape& t, const Tensor& h, const GraphStructure& gs, const Tensor& w,
                   const Tensor& a, double slope = 0.2);

struct GatAttention {
  Tensor out;
  std::vector<double> alpha;  // per directed edge incl. self-loops
  std::vector<int> dst, src;
};
GatAttention gat_forward_attention(Tape& t, const Tensor& h, const GraphStructure& gs,
                                   const Tensor& w, const Tensor& a, double slope = 0.2);

// W_self h_i + W_neigh mean_{j in N(i)} h_j; empty neighborhoods contribute zero.
Tensor sage_forward(Tape& t, const Tensor& h, const GraphStructure& gs,
                    const Tensor& w_self, const Tensor& w_neigh);

// sum_k M^k h W_k with M the self-looped symmetric-normalized adjacency, M^0 = I.
Tensor tagcn_forward(Tape& t, const Tensor& h, const GraphStructure& gs,
                     const std::vector<Tensor>& w_hops);

// Model parameters bound to a tape (leaves when trainable, constants otherwise).
struct BoundModel {
  const ModelConfig* config = nullptr;
  std::vector<std::vector<Tensor>> layers;
};

BoundModel bind_model(Tape& t, const Model& m, bool trainable);

Tensor bound_forward(Tape& t, const BoundModel& bm, const GraphStructure& gs, const Tensor& x);
Tensor bound_embeddings(Tape& t, const BoundModel& bm, const GraphStructure& gs, const Tensor& x);

// Value-only conveniences.
Tensor model_forward(const Model& m, const BatchedGraph& g);
Tensor model_forward(const Model& m, const RoomGraph& g);
// Activations after the last hidden layer (post-ReLU), N x hidden_dim.
Tensor node_embeddings(const Model& m, const BatchedGraph& g);
Tensor node_embeddings(const Model& m, const RoomGraph& g);

Tensor features_tensor(const BatchedGraph& g);
Tensor features_tensor(const RoomGraph& g);

}  // namespace floorgnn
