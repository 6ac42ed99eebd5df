#include "floorgnn/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "floorgnn/error.hpp"
#include "floorgnn/rng.hpp"

namespace floorgnn {

const char* kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::mlp: return "mlp";
    case ModelKind::gcn: return "gcn";
    case ModelKind::gat: return "gat";
    case ModelKind::sage: return "sage";
    case ModelKind::tagcn: return "tagcn";
  }
  return "?";
}

std::optional<ModelKind> parse_kind(const std::string& name) {
  if (name == "mlp") return ModelKind::mlp;
  if (name == "gcn") return ModelKind::gcn;
  if (name == "gat") return ModelKind::gat;
  if (name == "sage") return ModelKind::sage;
  if (name == "tagcn") return ModelKind::tagcn;
  return std::nullopt;
}

namespace {

Param glorot(Rng& rng, const std::string& name, int rows, int cols) {
  double limit = std::sqrt(6.0 / (rows + cols));
  Param p{name, rows, cols, std::vector<double>(static_cast<size_t>(rows) * cols)};
  for (double& v : p.value) v = rng.uniform(-limit, limit);
  return p;
}

Param zeros(const std::string& name, int rows, int cols) {
  return Param{name, rows, cols, std::vector<double>(static_cast<size_t>(rows) * cols, 0.0)};
}

}  // namespace

Model init_model(const ModelConfig& cfg) {
  if (cfg.depth < 1) fail(ErrorCode::bad_config, "depth must be >= 1");
  if (cfg.hidden_dim < 1 || cfg.in_dim < 1 || cfg.out_dim < 1)
    fail(ErrorCode::bad_config, "model dims must be positive");
  if (cfg.tagcn_k < 0) fail(ErrorCode::bad_config, "tagcn_k must be >= 0");
  if (cfg.gat_heads < 1) fail(ErrorCode::bad_config, "gat_heads must be >= 1");

  Rng rng(mix_seed(cfg.seed));
  Model m;
  m.config = cfg;
  m.layers.reserve(static_cast<size_t>(cfg.depth) + 1);
  for (int li = 0; li <= cfg.depth; ++li) {
    int in = li == 0 ? cfg.in_dim : cfg.hidden_dim;
    int out = li == cfg.depth ? cfg.out_dim : cfg.hidden_dim;
    std::string prefix = "layer" + std::to_string(li) + ".";
    Layer layer;
    switch (cfg.kind) {
      case ModelKind::mlp:
      case ModelKind::gcn:
        layer.params.push_back(glorot(rng, prefix + "W", in, out));
        break;
      case ModelKind::gat:
        for (int h = 0; h < cfg.gat_heads; ++h) {
          layer.params.push_back(glorot(rng, prefix + "W" + std::to_string(h), in, out));
          layer.params.push_back(
              glorot(rng, prefix + "a" + std::to_string(h), 2 * out, 1));
        }
        break;
      case ModelKind::sage:
        layer.params.push_back(glorot(rng, prefix + "W_self", in, out));
        layer.params.push_back(glorot(rng, prefix + "W_neigh", in, out));
        break;
      case ModelKind::tagcn:
        for (int k = 0; k <= cfg.tagcn_k; ++k)
          layer.params.push_back(glorot(rng, prefix + "W" + std::to_string(k), in, out));
        break;
    }
    layer.params.push_back(zeros(prefix + "b", 1, out));
    m.layers.push_back(std::move(layer));
  }
  return m;
}

std::vector<Param*> trainable_params(Model& m) {
  std::vector<Param*> out;
  for (Layer& l : m.layers)
    for (Param& p : l.params) out.push_back(&p);
  return out;
}

std::vector<const Param*> trainable_params(const Model& m) {
  std::vector<const Param*> out;
  for (const Layer& l : m.layers)
    for (const Param& p : l.params) out.push_back(&p);
  return out;
}

GraphStructure make_structure(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::pair<int, int>> undirected;
  undirected.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n)
      fail(ErrorCode::bad_index, "edge endpoint out of range");
    if (a == b) continue;  // self-loops are implicit in every kind that uses them
    undirected.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(undirected.begin(), undirected.end());
  undirected.erase(std::unique(undirected.begin(), undirected.end()), undirected.end());

  std::vector<int> deg(static_cast<size_t>(n), 0);
  for (const auto& [a, b] : undirected) {
    ++deg[a];
    ++deg[b];
  }

  GraphStructure gs;
  gs.n = n;
  for (const auto& [a, b] : undirected) {
    gs.nbr_dst.push_back(a);
    gs.nbr_src.push_back(b);
    gs.nbr_mean_coef.push_back(1.0 / deg[a]);
    gs.nbr_dst.push_back(b);
    gs.nbr_src.push_back(a);
    gs.nbr_mean_coef.push_back(1.0 / deg[b]);

    double coef = 1.0 / std::sqrt(static_cast<double>(deg[a] + 1) *
                                  static_cast<double>(deg[b] + 1));
    gs.prop_dst.push_back(a);
    gs.prop_src.push_back(b);
    gs.prop_coef.push_back(coef);
    gs.prop_dst.push_back(b);
    gs.prop_src.push_back(a);
    gs.prop_coef.push_back(coef);

    gs.att_dst.push_back(a);
    gs.att_src.push_back(b);
    gs.att_dst.push_back(b);
    gs.att_src.push_back(a);
  }
  for (int i = 0; i < n; ++i) {
    gs.prop_dst.push_back(i);
    gs.prop_src.push_back(i);
    gs.prop_coef.push_back(1.0 / (deg[i] + 1));
    gs.att_dst.push_back(i);
    gs.att_src.push_back(i);
  }
  return gs;
}

GraphStructure make_structure(const BatchedGraph& g) { return make_structure(g.n, g.edges); }
GraphStructure make_structure(const RoomGraph& g) { return make_structure(g.n, g.edges); }

Tensor gcn_forward(Tape& t, const Tensor& h, const GraphStructure& gs, const Tensor& w) {
  Tensor hw = t.matmul(h, w);
  return t.weighted_gather_sum(hw, gs.prop_dst, gs.prop_src, gs.prop_coef, gs.n);
}

GatAttention gat_forward_attention(Tape& t, const Tensor& h, const GraphStructure& gs,
                                   const Tensor& w, const Tensor& a, double slope) {
  Tensor wh = t.matmul(h, w);
  Tensor wh_dst = t.gather_rows(wh, gs.att_dst);
  Tensor wh_src = t.gather_rows(wh, gs.att_src);
  Tensor e = t.matmul(t.concat_cols(wh_dst, wh_src), a);
  e = t.leaky_relu(e, slope);

  // Subtract the per-destination max before exponentiating. The shift is a
  // constant off the tape; a row-constant offset does not change the softmax
  // value or its gradient, so the backward pass stays exact.
  int n_edges = e.rows;
  std::vector<double> seg_max(static_cast<size_t>(gs.n),
                              -std::numeric_limits<double>::infinity());
  for (int k = 0; k < n_edges; ++k)
    seg_max[gs.att_dst[k]] = std::max(seg_max[gs.att_dst[k]], e.data[k]);
  Tensor shift(n_edges, 1);
  for (int k = 0; k < n_edges; ++k) shift.data[k] = seg_max[gs.att_dst[k]];
  Tensor ex = t.exp(t.sub(e, shift));

  Tensor denom = t.segment_sum(ex, gs.att_dst, gs.n);
  Tensor alpha = t.div(ex, t.gather_rows(denom, gs.att_dst));
  Tensor out = t.segment_sum(t.row_scale(wh_src, alpha), gs.att_dst, gs.n);

  GatAttention res;
  res.out = std::move(out);
  res.alpha = alpha.data;
  res.dst = gs.att_dst;
  res.src = gs.att_src;
  return res;
}

Tensor gat_forward(Tape& t, const Tensor& h, const GraphStructure& gs, const Tensor& w,
                   const Tensor& a, double slope) {
  return gat_forward_attention(t, h, gs, w, a, slope).out;
}

Tensor sage_forward(Tape& t, const Tensor& h, const GraphStructure& gs,
                    const Tensor& w_self, const Tensor& w_neigh) {
  Tensor self = t.matmul(h, w_self);
  Tensor nmean = t.weighted_gather_sum(h, gs.nbr_dst, gs.nbr_src, gs.nbr_mean_coef, gs.n);
  return t.add(self, t.matmul(nmean, w_neigh));
}

Tensor tagcn_forward(Tape& t, const Tensor& h, const GraphStructure& gs,
                     const std::vector<Tensor>& w_hops) {
  if (w_hops.empty()) fail(ErrorCode::bad_config, "tagcn_forward: no hop weights");
  Tensor out = t.matmul(h, w_hops[0]);
  Tensor cur = h;
  for (size_t k = 1; k < w_hops.size(); ++k) {
    cur = t.weighted_gather_sum(cur, gs.prop_dst, gs.prop_src, gs.prop_coef, gs.n);
    out = t.add(out, t.matmul(cur, w_hops[k]));
  }
  return out;
}

BoundModel bind_model(Tape& t, const Model& m, bool trainable) {
  BoundModel bm;
  bm.config = &m.config;
  bm.layers.reserve(m.layers.size());
  for (const Layer& l : m.layers) {
    std::vector<Tensor> bound;
    bound.reserve(l.params.size());
    for (const Param& p : l.params) {
      Tensor v(p.rows, p.cols, p.value);
      bound.push_back(trainable ? t.leaf(v) : v);
    }
    bm.layers.push_back(std::move(bound));
  }
  return bm;
}

namespace {

Tensor apply_layer(Tape& t, const ModelConfig& cfg, const std::vector<Tensor>& params,
                   const GraphStructure& gs, const Tensor& h) {
  const Tensor& bias = params.back();
  switch (cfg.kind) {
    case ModelKind::mlp:
      return t.add_bias(t.matmul(h, params[0]), bias);
    case ModelKind::gcn:
      return t.add_bias(gcn_forward(t, h, gs, params[0]), bias);
    case ModelKind::gat: {
      Tensor acc;
      for (int head = 0; head < cfg.gat_heads; ++head) {
        Tensor o = gat_forward(t, h, gs, params[static_cast<size_t>(2) * head],
                               params[static_cast<size_t>(2) * head + 1], cfg.gat_slope);
        acc = head == 0 ? o : t.add(acc, o);
      }
      if (cfg.gat_heads > 1) acc = t.scalar_mul(acc, 1.0 / cfg.gat_heads);
      return t.add_bias(acc, bias);
    }
    case ModelKind::sage:
      return t.add_bias(sage_forward(t, h, gs, params[0], params[1]), bias);
    case ModelKind::tagcn: {
      std::vector<Tensor> hops(params.begin(), params.end() - 1);
      return t.add_bias(tagcn_forward(t, h, gs, hops), bias);
    }
  }
  fail(ErrorCode::bad_config, "unknown model kind");
}

Tensor run_stack(Tape& t, const BoundModel& bm, const GraphStructure& gs, const Tensor& x,
                 bool stop_at_embeddings) {
  const ModelConfig& cfg = *bm.config;
  if (x.cols != cfg.in_dim)
    fail(ErrorCode::shape, "input feature dim " + std::to_string(x.cols) +
                               " != model in_dim " + std::to_string(cfg.in_dim));
  Tensor h = x;
  for (int li = 0; li < cfg.depth; ++li)
    h = t.relu(apply_layer(t, cfg, bm.layers[li], gs, h));
  if (stop_at_embeddings) return h;
  return apply_layer(t, cfg, bm.layers[cfg.depth], gs, h);
}

}  // namespace

Tensor bound_forward(Tape& t, const BoundModel& bm, const GraphStructure& gs,
                     const Tensor& x) {
  return run_stack(t, bm, gs, x, false);
}

Tensor bound_embeddings(Tape& t, const BoundModel& bm, const GraphStructure& gs,
                        const Tensor& x) {
  return run_stack(t, bm, gs, x, true);
}

Tensor features_tensor(const BatchedGraph& g) {
  return Tensor(g.n, kNumFeatures, g.features);
}

Tensor features_tensor(const RoomGraph& g) {
  return Tensor(g.n, kNumFeatures, g.features);
}

namespace {

Tensor value_forward(const Model& m, int n, const std::vector<std::pair<int, int>>& edges,
                     const std::vector<double>& features, bool embeddings) {
  Tape scratch;  // constants only: no tape growth, no gradients
  BoundModel bm = bind_model(scratch, m, false);
  GraphStructure gs = make_structure(n, edges);
  Tensor x(n, kNumFeatures, features);
  return run_stack(scratch, bm, gs, x, embeddings);
}

}  // namespace

Tensor model_forward(const Model& m, const BatchedGraph& g) {
  return value_forward(m, g.n, g.edges, g.features, false);
}

Tensor model_forward(const Model& m, const RoomGraph& g) {
  return value_forward(m, g.n, g.edges, g.features, false);
}

Tensor node_embeddings(const Model& m, const BatchedGraph& g) {
  return value_forward(m, g.n, g.edges, g.features, true);
}

Tensor node_embeddings(const Model& m, const RoomGraph& g) {
  return value_forward(m, g.n, g.edges, g.features, true);
}

}  // namespace floorgnn
