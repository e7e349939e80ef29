#include "cliquesel/gatmlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cliquesel/csvio.hpp"
#include "cliquesel/errors.hpp"
#include "cliquesel/metrics.hpp"
#include "cliquesel/rng.hpp"

namespace cliquesel {

const char* structure_mode_name(StructureMode m) {
  switch (m) {
    case StructureMode::Attention: return "attention";
    case StructureMode::MeanAggregation: return "mean";
    case StructureMode::Off: return "off";
  }
  return "?";
}

const char* loss_mode_name(LossMode m) {
  return m == LossMode::SoftmaxCE ? "softmax_ce" : "sigmoid_bce";
}

namespace {

StructureMode structure_mode_from_name(const std::string& s) {
  if (s == "attention") return StructureMode::Attention;
  if (s == "mean") return StructureMode::MeanAggregation;
  if (s == "off") return StructureMode::Off;
  throw SchemaMismatch("unknown structure mode '" + s + "'");
}

LossMode loss_mode_from_name(const std::string& s) {
  if (s == "softmax_ce") return LossMode::SoftmaxCE;
  if (s == "sigmoid_bce") return LossMode::SigmoidBCE;
  throw SchemaMismatch("unknown loss mode '" + s + "'");
}

}  // namespace

nlohmann::json config_to_json(const TrainConfig& cfg) {
  return {{"lr", cfg.lr},
          {"weight_decay", cfg.weight_decay},
          {"hidden", cfg.hidden},
          {"heads", cfg.heads},
          {"dropout", cfg.dropout},
          {"leaky_slope", cfg.leaky_slope},
          {"batch_size", cfg.batch_size},
          {"max_epochs", cfg.max_epochs},
          {"patience", cfg.patience},
          {"val_fraction", cfg.val_fraction},
          {"seed", cfg.seed},
          {"loss", loss_mode_name(cfg.loss)},
          {"struct_mode", structure_mode_name(cfg.struct_mode)},
          {"stat_on", cfg.stat_on},
          {"num_classes", cfg.num_classes}};
}

TrainConfig config_from_json(const nlohmann::json& j) {
  TrainConfig cfg;
  try {
    cfg.lr = j.at("lr").get<double>();
    cfg.weight_decay = j.at("weight_decay").get<double>();
    cfg.hidden = j.at("hidden").get<int>();
    cfg.heads = j.at("heads").get<int>();
    cfg.dropout = j.at("dropout").get<double>();
    cfg.leaky_slope = j.at("leaky_slope").get<double>();
    cfg.batch_size = j.at("batch_size").get<int>();
    cfg.max_epochs = j.at("max_epochs").get<int>();
    cfg.patience = j.at("patience").get<int>();
    cfg.val_fraction = j.at("val_fraction").get<double>();
    cfg.seed = j.at("seed").get<uint64_t>();
    cfg.loss = loss_mode_from_name(j.at("loss").get<std::string>());
    cfg.struct_mode = structure_mode_from_name(j.at("struct_mode").get<std::string>());
    cfg.stat_on = j.at("stat_on").get<bool>();
    cfg.num_classes = j.at("num_classes").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaMismatch(std::string("train config: ") + e.what());
  }
  return cfg;
}

const char* ablation_name(Ablation a) {
  switch (a) {
    case Ablation::Full: return "GAT-MLP";
    case Ablation::MlpOnly: return "MLP-Only";
    case Ablation::GcnOnly: return "GCN-Only";
    case Ablation::GatOnly: return "GAT-Only";
  }
  return "?";
}

TrainConfig apply_ablation(TrainConfig cfg, Ablation a) {
  switch (a) {
    case Ablation::Full:
      cfg.struct_mode = StructureMode::Attention;
      cfg.stat_on = true;
      break;
    case Ablation::MlpOnly:
      cfg.struct_mode = StructureMode::Off;
      cfg.stat_on = true;
      break;
    case Ablation::GcnOnly:
      cfg.struct_mode = StructureMode::MeanAggregation;
      cfg.stat_on = false;
      break;
    case Ablation::GatOnly:
      cfg.struct_mode = StructureMode::Attention;
      cfg.stat_on = false;
      break;
  }
  return cfg;
}

GraphCsr GraphCsr::from_graph(const Graph& g) {
  if (g.node_count == 0) throw EmptyGraph("gat: graph has no nodes");
  GraphCsr c;
  c.n = g.node_count;
  c.offsets.resize(c.n + 1, 0);
  for (int u = 0; u < c.n; ++u) c.offsets[u + 1] = c.offsets[u] + static_cast<int>(g.adj[u].size()) + 1;
  c.nbrs.resize(c.offsets[c.n]);
  for (int u = 0; u < c.n; ++u) {
    int at = c.offsets[u];
    bool placed = false;
    for (int v : g.adj[u]) {  // adj sorted; slot the self-loop in order
      if (!placed && u < v) {
        c.nbrs[at++] = u;
        placed = true;
      }
      c.nbrs[at++] = v;
    }
    if (!placed) c.nbrs[at++] = u;
  }
  return c;
}

int ModelParams::fused_dim() const {
  return (struct_mode != StructureMode::Off ? hidden : 0) + (stat_on ? hidden : 0);
}

std::vector<ParamRef> param_refs(ModelParams& p) {
  std::vector<ParamRef> refs;
  if (p.struct_mode != StructureMode::Off) {
    for (int k = 0; k < p.gat1.heads; ++k) {
      refs.push_back({"gat1.h" + std::to_string(k) + ".W", &p.gat1.W[k]});
      if (!p.gat1.a.empty()) refs.push_back({"gat1.h" + std::to_string(k) + ".a", &p.gat1.a[k]});
    }
    refs.push_back({"gat2.W", &p.gat2.W[0]});
    if (!p.gat2.a.empty()) refs.push_back({"gat2.a", &p.gat2.a[0]});
  }
  if (p.stat_on) {
    refs.push_back({"mlp.W1", &p.mlp_w1});
    refs.push_back({"mlp.b1", &p.mlp_b1});
    refs.push_back({"mlp.W2", &p.mlp_w2});
    refs.push_back({"mlp.b2", &p.mlp_b2});
  }
  refs.push_back({"cls.W", &p.cls_w});
  refs.push_back({"cls.b", &p.cls_b});
  return refs;
}

namespace {

DenseMatrix init_uniform(int rows, int cols, int fan_in, Rng& rng) {
  DenseMatrix m(rows, cols);
  double bound = 1.0 / std::sqrt(static_cast<double>(std::max(1, fan_in)));
  for (double& v : m.data) v = rng.uniform(-bound, bound);
  return m;
}

GatLayerParams init_gat_layer(int heads, int in_dim, int head_dim, bool attention, Rng& rng) {
  GatLayerParams lp;
  lp.heads = heads;
  lp.in_dim = in_dim;
  lp.head_dim = head_dim;
  for (int k = 0; k < heads; ++k) {
    lp.W.push_back(init_uniform(in_dim, head_dim, in_dim, rng));
    if (attention) lp.a.push_back(init_uniform(2 * head_dim, 1, 2 * head_dim, rng));
  }
  return lp;
}

}  // namespace

ModelParams init_params(const TrainConfig& cfg) {
  if (cfg.struct_mode == StructureMode::Off && !cfg.stat_on)
    throw BothEncodersOff("model: at least one encoder must be active");
  if (cfg.hidden < 1 || cfg.heads < 1 || cfg.num_classes < 2)
    throw InvalidSpec("model: bad dimensions");
  ModelParams p;
  p.hidden = cfg.hidden;
  p.heads = cfg.heads;
  p.num_classes = cfg.num_classes;
  p.struct_mode = cfg.struct_mode;
  p.stat_on = cfg.stat_on;
  p.leaky_slope = cfg.leaky_slope;
  Rng rng(mix_seed(cfg.seed, 0xA11));
  bool attn = cfg.struct_mode == StructureMode::Attention;
  if (cfg.struct_mode != StructureMode::Off) {
    p.gat1 = init_gat_layer(cfg.heads, 2, cfg.hidden, attn, rng);
    p.gat2 = init_gat_layer(1, cfg.heads * cfg.hidden, cfg.hidden, attn, rng);
  }
  if (cfg.stat_on) {
    p.mlp_w1 = init_uniform(12, cfg.hidden, 12, rng);
    p.mlp_b1 = DenseMatrix(1, cfg.hidden);
    p.mlp_w2 = init_uniform(cfg.hidden, cfg.hidden, cfg.hidden, rng);
    p.mlp_b2 = DenseMatrix(1, cfg.hidden);
  }
  p.cls_w = init_uniform(p.fused_dim(), cfg.num_classes, p.fused_dim(), rng);
  p.cls_b = DenseMatrix(1, cfg.num_classes);
  return p;
}

ModelParams zeros_like(const ModelParams& p) {
  ModelParams z = p;
  std::vector<ParamRef> refs = param_refs(z);
  for (ParamRef& r : refs) std::fill(r.mat->data.begin(), r.mat->data.end(), 0.0);
  return z;
}

InstanceInput prepare_input(const Graph& g, const std::array<double, 12>& gfeat,
                            const ZScoreNormalizer& norm) {
  InstanceInput in;
  in.csr = GraphCsr::from_graph(g);
  auto [mm, x0] = minmax_fit_apply(node_features(g));
  in.x0 = std::move(x0);
  in.zfeat = norm.apply_row(gfeat.data());
  return in;
}

// --- attention layer -----------------------------------------------------

namespace {

double lrelu(double x, double slope) { return x > 0.0 ? x : slope * x; }

void gat_layer_forward(const GatLayerParams& lp, StructureMode mode, double slope,
                       const GraphCsr& csr, const DenseMatrix& x, GatLayerCache& c) {
  x.require_shape(csr.n, lp.in_dim, "gat forward input");
  int n = csr.n, d = lp.head_dim, ne = static_cast<int>(csr.nbrs.size());
  c.P.assign(lp.heads, DenseMatrix());
  c.score.assign(lp.heads, {});
  c.alpha.assign(lp.heads, {});
  c.out = DenseMatrix(n, lp.heads * d);
  for (int k = 0; k < lp.heads; ++k) {
    DenseMatrix& P = c.P[k];
    P = matmul(x, lp.W[k]);
    std::vector<double>& alpha = c.alpha[k];
    alpha.assign(ne, 0.0);
    if (mode == StructureMode::Attention) {
      const double* al = lp.a[k].data.data();
      const double* ar = al + d;
      std::vector<double> left(n), right(n);
      for (int u = 0; u < n; ++u) {
        const double* pu = P.row_ptr(u);
        double sl = 0.0, sr = 0.0;
        for (int j = 0; j < d; ++j) {
          sl += al[j] * pu[j];
          sr += ar[j] * pu[j];
        }
        left[u] = sl;
        right[u] = sr;
      }
      std::vector<double>& score = c.score[k];
      score.assign(ne, 0.0);
      for (int u = 0; u < n; ++u) {
        double emax = -std::numeric_limits<double>::infinity();
        for (int idx = csr.offsets[u]; idx < csr.offsets[u + 1]; ++idx) {
          score[idx] = left[u] + right[csr.nbrs[idx]];
          emax = std::max(emax, lrelu(score[idx], slope));
        }
        double z = 0.0;
        for (int idx = csr.offsets[u]; idx < csr.offsets[u + 1]; ++idx) {
          alpha[idx] = std::exp(lrelu(score[idx], slope) - emax);
          z += alpha[idx];
        }
        for (int idx = csr.offsets[u]; idx < csr.offsets[u + 1]; ++idx) alpha[idx] /= z;
      }
    } else {
      for (int u = 0; u < n; ++u) {
        double inv = 1.0 / static_cast<double>(csr.degree(u));
        for (int idx = csr.offsets[u]; idx < csr.offsets[u + 1]; ++idx) alpha[idx] = inv;
      }
    }
    for (int u = 0; u < n; ++u) {
      double* out = c.out.row_ptr(u) + static_cast<size_t>(k) * d;
      for (int idx = csr.offsets[u]; idx < csr.offsets[u + 1]; ++idx) {
        const double* pv = P.row_ptr(csr.nbrs[idx]);
        double w = alpha[idx];
        for (int j = 0; j < d; ++j) out[j] += w * pv[j];
      }
    }
  }
}

// dout has one block of head_dim columns per head. Accumulates parameter
// gradients into g and input gradients into dx (when dx is non-null).
void gat_layer_backward(const GatLayerParams& lp, StructureMode mode, double slope,
                        const GraphCsr& csr, const DenseMatrix& x, const GatLayerCache& c,
                        const DenseMatrix& dout, GatLayerParams& g, DenseMatrix* dx) {
  int n = csr.n, d = lp.head_dim, ne = static_cast<int>(csr.nbrs.size());
  for (int k = 0; k < lp.heads; ++k) {
    const DenseMatrix& P = c.P[k];
    const std::vector<double>& alpha = c.alpha[k];
    DenseMatrix dP(n, d);
    std::vector<double> dalpha(ne, 0.0);
    for (int u = 0; u < n; ++u) {
      const double* du = dout.row_ptr(u) + static_cast<size_t>(k) * d;
      for (int idx = csr.offsets[u]; idx < csr.offsets[u + 1]; ++idx) {
        int v = csr.nbrs[idx];
        const double* pv = P.row_ptr(v);
        double* dpv = dP.row_ptr(v);
        double acc = 0.0;
        double w = alpha[idx];
        for (int j = 0; j < d; ++j) {
          acc += du[j] * pv[j];
          dpv[j] += w * du[j];
        }
        dalpha[idx] = acc;
      }
    }
    if (mode == StructureMode::Attention) {
      const std::vector<double>& score = c.score[k];
      const double* al = lp.a[k].data.data();
      const double* ar = al + d;
      double* dal = g.a[k].data.data();
      double* dar = dal + d;
      std::vector<double> dright(n, 0.0);
      for (int u = 0; u < n; ++u) {
        double dot = 0.0;
        for (int idx = csr.offsets[u]; idx < csr.offsets[u + 1]; ++idx)
          dot += alpha[idx] * dalpha[idx];
        double dleft = 0.0;
        for (int idx = csr.offsets[u]; idx < csr.offsets[u + 1]; ++idx) {
          double de = alpha[idx] * (dalpha[idx] - dot);
          double ds = de * (score[idx] > 0.0 ? 1.0 : slope);
          dleft += ds;
          dright[csr.nbrs[idx]] += ds;
        }
        const double* pu = P.row_ptr(u);
        double* dpu = dP.row_ptr(u);
        for (int j = 0; j < d; ++j) {
          dal[j] += dleft * pu[j];
          dpu[j] += dleft * al[j];
        }
      }
      for (int v = 0; v < n; ++v) {
        if (dright[v] == 0.0) continue;
        const double* pv = P.row_ptr(v);
        double* dpv = dP.row_ptr(v);
        for (int j = 0; j < d; ++j) {
          dar[j] += dright[v] * pv[j];
          dpv[j] += dright[v] * ar[j];
        }
      }
    }
    // dW += x^T dP; dx += dP W^T
    DenseMatrix& dW = g.W[k];
    for (int u = 0; u < n; ++u) {
      const double* xu = x.row_ptr(u);
      const double* dpu = dP.row_ptr(u);
      for (int i = 0; i < lp.in_dim; ++i) {
        double xv = xu[i];
        if (xv == 0.0) continue;
        double* dwrow = dW.row_ptr(i);
        for (int j = 0; j < d; ++j) dwrow[j] += xv * dpu[j];
      }
    }
    if (dx) {
      const DenseMatrix& W = lp.W[k];
      for (int u = 0; u < n; ++u) {
        const double* dpu = dP.row_ptr(u);
        double* dxu = dx->row_ptr(u);
        for (int i = 0; i < lp.in_dim; ++i) {
          const double* wrow = W.row_ptr(i);
          double acc = 0.0;
          for (int j = 0; j < d; ++j) acc += dpu[j] * wrow[j];
          dxu[i] += acc;
        }
      }
    }
  }
}

double elu(double x) { return x > 0.0 ? x : std::expm1(x); }
double elu_grad(double x) { return x > 0.0 ? 1.0 : std::exp(x); }
double relu(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

void model_forward(const ModelParams& p, const InstanceInput& in, bool train_mode,
                   const std::vector<double>* drop_mask, InstanceCache& c) {
  int h = p.hidden;
  c.fused.clear();
  if (p.struct_mode != StructureMode::Off) {
    gat_layer_forward(p.gat1, p.struct_mode, p.leaky_slope, in.csr, in.x0, c.g1);
    c.h1 = c.g1.out;
    for (double& v : c.h1.data) v = elu(v);
    gat_layer_forward(p.gat2, p.struct_mode, p.leaky_slope, in.csr, c.h1, c.g2);
    c.z_struct.assign(h, 0.0);
    for (int u = 0; u < in.csr.n; ++u) {
      const double* row = c.g2.out.row_ptr(u);
      for (int j = 0; j < h; ++j) c.z_struct[j] += row[j];
    }
    for (double& v : c.z_struct) v /= static_cast<double>(in.csr.n);
    c.fused.insert(c.fused.end(), c.z_struct.begin(), c.z_struct.end());
  }
  if (p.stat_on) {
    if (in.zfeat.size() != 12) throw ShapeMismatch("stat encoder: expected 12 features");
    c.s1_pre.assign(h, 0.0);
    for (int i = 0; i < 12; ++i) {
      double xv = in.zfeat[i];
      if (xv == 0.0) continue;
      const double* w = p.mlp_w1.row_ptr(i);
      for (int j = 0; j < h; ++j) c.s1_pre[j] += xv * w[j];
    }
    for (int j = 0; j < h; ++j) c.s1_pre[j] += p.mlp_b1.data[j];
    c.s1_act.resize(h);
    for (int j = 0; j < h; ++j) c.s1_act[j] = relu(c.s1_pre[j]);
    c.s1_drop = c.s1_act;
    if (train_mode && drop_mask) {
      c.drop_mask = *drop_mask;
      for (int j = 0; j < h; ++j) c.s1_drop[j] *= c.drop_mask[j];
    } else {
      c.drop_mask.clear();
    }
    c.s2_pre.assign(h, 0.0);
    for (int i = 0; i < h; ++i) {
      double xv = c.s1_drop[i];
      if (xv == 0.0) continue;
      const double* w = p.mlp_w2.row_ptr(i);
      for (int j = 0; j < h; ++j) c.s2_pre[j] += xv * w[j];
    }
    for (int j = 0; j < h; ++j) c.s2_pre[j] += p.mlp_b2.data[j];
    c.z_stat.resize(h);
    for (int j = 0; j < h; ++j) c.z_stat[j] = relu(c.s2_pre[j]);
    c.fused.insert(c.fused.end(), c.z_stat.begin(), c.z_stat.end());
  }
  if (static_cast<int>(c.fused.size()) != p.fused_dim())
    throw ShapeMismatch("classifier: fused width mismatch");
  c.logits.assign(p.num_classes, 0.0);
  for (size_t i = 0; i < c.fused.size(); ++i) {
    double xv = c.fused[i];
    if (xv == 0.0) continue;
    const double* w = p.cls_w.row_ptr(static_cast<int>(i));
    for (int j = 0; j < p.num_classes; ++j) c.logits[j] += xv * w[j];
  }
  for (int j = 0; j < p.num_classes; ++j) c.logits[j] += p.cls_b.data[j];
}

double gat_loss(const std::vector<double>& logits, LossMode mode, int label,
                const std::array<int, kNumSolvers>& targets, std::vector<double>* dlogits) {
  int C = static_cast<int>(logits.size());
  if (dlogits) dlogits->assign(C, 0.0);
  if (mode == LossMode::SoftmaxCE) {
    if (label < 0 || label >= C) throw ModeMismatch("softmax loss: label out of range");
    double mx = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double l : logits) z += std::exp(l - mx);
    double loss = mx + std::log(z) - logits[label];
    if (dlogits) {
      for (int j = 0; j < C; ++j) (*dlogits)[j] = std::exp(logits[j] - mx) / z;
      (*dlogits)[label] -= 1.0;
    }
    return loss;
  }
  if (C != kNumSolvers) throw ModeMismatch("sigmoid loss: expected one logit per solver");
  double loss = 0.0;
  for (int j = 0; j < C; ++j) {
    double l = logits[j], t = static_cast<double>(targets[j]);
    loss += std::max(l, 0.0) - l * t + std::log1p(std::exp(-std::abs(l)));
    if (dlogits) (*dlogits)[j] = (1.0 / (1.0 + std::exp(-l)) - t) / C;
  }
  return loss / C;
}

void model_backward(const ModelParams& p, const InstanceInput& in, const InstanceCache& c,
                    const std::vector<double>& dlogits, ModelParams& g) {
  int h = p.hidden, C = p.num_classes;
  if (static_cast<int>(dlogits.size()) != C) throw ShapeMismatch("backward: dlogits width");
  int fd = p.fused_dim();
  std::vector<double> dfused(fd, 0.0);
  for (int i = 0; i < fd; ++i) {
    double xv = c.fused[i];
    double* gw = g.cls_w.row_ptr(i);
    const double* w = p.cls_w.row_ptr(i);
    double acc = 0.0;
    for (int j = 0; j < C; ++j) {
      gw[j] += xv * dlogits[j];
      acc += w[j] * dlogits[j];
    }
    dfused[i] = acc;
  }
  for (int j = 0; j < C; ++j) g.cls_b.data[j] += dlogits[j];

  int at = 0;
  if (p.struct_mode != StructureMode::Off) {
    DenseMatrix dout2(in.csr.n, h);
    double inv_n = 1.0 / static_cast<double>(in.csr.n);
    for (int u = 0; u < in.csr.n; ++u) {
      double* row = dout2.row_ptr(u);
      for (int j = 0; j < h; ++j) row[j] = dfused[at + j] * inv_n;
    }
    DenseMatrix dh1(in.csr.n, p.gat2.in_dim);
    gat_layer_backward(p.gat2, p.struct_mode, p.leaky_slope, in.csr, c.h1, c.g2, dout2, g.gat2,
                       &dh1);
    for (size_t i = 0; i < dh1.data.size(); ++i) dh1.data[i] *= elu_grad(c.g1.out.data[i]);
    gat_layer_backward(p.gat1, p.struct_mode, p.leaky_slope, in.csr, in.x0, c.g1, dh1, g.gat1,
                       nullptr);
    at += h;
  }
  if (p.stat_on) {
    std::vector<double> ds2(h);
    for (int j = 0; j < h; ++j) ds2[j] = c.s2_pre[j] > 0.0 ? dfused[at + j] : 0.0;
    for (int i = 0; i < h; ++i) {
      double xv = c.s1_drop[i];
      if (xv != 0.0) {
        double* gw = g.mlp_w2.row_ptr(i);
        for (int j = 0; j < h; ++j) gw[j] += xv * ds2[j];
      }
    }
    for (int j = 0; j < h; ++j) g.mlp_b2.data[j] += ds2[j];
    std::vector<double> ds1(h, 0.0);
    for (int i = 0; i < h; ++i) {
      const double* w = p.mlp_w2.row_ptr(i);
      double acc = 0.0;
      for (int j = 0; j < h; ++j) acc += w[j] * ds2[j];
      ds1[i] = acc;
    }
    if (!c.drop_mask.empty())
      for (int j = 0; j < h; ++j) ds1[j] *= c.drop_mask[j];
    for (int j = 0; j < h; ++j)
      if (c.s1_pre[j] <= 0.0) ds1[j] = 0.0;
    for (int i = 0; i < 12; ++i) {
      double xv = in.zfeat[i];
      if (xv == 0.0) continue;
      double* gw = g.mlp_w1.row_ptr(i);
      for (int j = 0; j < h; ++j) gw[j] += xv * ds1[j];
    }
    for (int j = 0; j < h; ++j) g.mlp_b1.data[j] += ds1[j];
  }
}

// --- training ------------------------------------------------------------

namespace {

struct AdamState {
  ModelParams m, v;
  long long t = 0;
};

void adam_step(ModelParams& p, const ModelParams& g, AdamState& st, const TrainConfig& cfg) {
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  ++st.t;
  double c1 = 1.0 - std::pow(b1, static_cast<double>(st.t));
  double c2 = 1.0 - std::pow(b2, static_cast<double>(st.t));
  std::vector<ParamRef> pr = param_refs(p);
  std::vector<ParamRef> gr = param_refs(const_cast<ModelParams&>(g));
  std::vector<ParamRef> mr = param_refs(st.m);
  std::vector<ParamRef> vr = param_refs(st.v);
  for (size_t b = 0; b < pr.size(); ++b) {
    std::vector<double>& pd = pr[b].mat->data;
    const std::vector<double>& gd = gr[b].mat->data;
    std::vector<double>& md = mr[b].mat->data;
    std::vector<double>& vd = vr[b].mat->data;
    for (size_t i = 0; i < pd.size(); ++i) {
      md[i] = b1 * md[i] + (1.0 - b1) * gd[i];
      vd[i] = b2 * vd[i] + (1.0 - b2) * gd[i] * gd[i];
      double step = cfg.lr * (md[i] / c1) / (std::sqrt(vd[i] / c2) + eps);
      pd[i] -= step + cfg.lr * cfg.weight_decay * pd[i];
    }
  }
}

struct ValMetrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

ValMetrics eval_instances(const ModelParams& p, const std::vector<InstanceInput>& inputs,
                          const std::vector<GatInstance>& data, const std::vector<size_t>& rows,
                          LossMode mode, int C) {
  ValMetrics vm;
  if (rows.empty()) return vm;
  if (mode == LossMode::SoftmaxCE) {
    std::vector<int> yt, yp;
    InstanceCache c;
    for (size_t i : rows) {
      model_forward(p, inputs[i], false, nullptr, c);
      int pred = 0;
      for (int j = 1; j < C; ++j)
        if (c.logits[j] > c.logits[pred]) pred = j;
      yt.push_back(data[i].label);
      yp.push_back(pred);
    }
    ConfusionMatrix cm = confusion(yt, yp, C);
    vm.accuracy = accuracy(cm);
    vm.macro_f1 = macro_f1(cm);
    return vm;
  }
  // one binary task per solver: mean accuracy, mean positive-class F1
  double acc_sum = 0.0, f1_sum = 0.0;
  std::vector<std::vector<int>> yt(kNumSolvers), yp(kNumSolvers);
  InstanceCache c;
  for (size_t i : rows) {
    model_forward(p, inputs[i], false, nullptr, c);
    for (int s = 0; s < kNumSolvers; ++s) {
      yt[s].push_back(data[i].targets[s]);
      yp[s].push_back(c.logits[s] > 0.0 ? 1 : 0);
    }
  }
  for (int s = 0; s < kNumSolvers; ++s) {
    ConfusionMatrix cm = confusion(yt[s], yp[s], 2);
    acc_sum += accuracy(cm);
    f1_sum += per_class_f1(cm)[1].f1;
  }
  vm.accuracy = acc_sum / kNumSolvers;
  vm.macro_f1 = f1_sum / kNumSolvers;
  return vm;
}

}  // namespace

TrainedModel train_gatmlp(const std::vector<GatInstance>& data, const TrainConfig& cfg) {
  if (data.empty()) throw EmptyData("train: no instances");
  if (cfg.batch_size < 1 || cfg.max_epochs < 1 || cfg.patience < 0)
    throw InvalidSpec("train: bad schedule");
  if (!(cfg.val_fraction >= 0.0 && cfg.val_fraction < 1.0))
    throw InvalidSpec("train: val_fraction must be in [0,1)");
  if (!(cfg.dropout >= 0.0 && cfg.dropout < 1.0))
    throw InvalidSpec("train: dropout must be in [0,1)");
  if (cfg.loss == LossMode::SoftmaxCE) {
    int lo = data[0].label;
    bool two = false;
    for (const GatInstance& d : data) two = two || d.label != lo;
    if (!two) throw SingleClass("train: single class in training data");
  } else {
    bool pos = false, neg = false;
    for (const GatInstance& d : data)
      for (int t : d.targets) (t ? pos : neg) = true;
    if (!pos || !neg) throw SingleClass("train: degenerate binary targets");
  }

  TrainedModel out;
  out.cfg = cfg;
  if (data.size() >= 2) {
    DenseMatrix F(static_cast<int>(data.size()), 12);
    for (size_t i = 0; i < data.size(); ++i)
      std::copy_n(data[i].gfeat.data(), 12, F.row_ptr(static_cast<int>(i)));
    out.norm = zscore_fit(F);
  } else {
    out.norm.mu.assign(12, 0.0);
    out.norm.sigma.assign(12, 1.0);
  }

  std::vector<InstanceInput> inputs(data.size());
  for (size_t i = 0; i < data.size(); ++i)
    inputs[i] = prepare_input(data[i].graph, data[i].gfeat, out.norm);

  // validation carve from the training data, seeded
  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng carve(mix_seed(cfg.seed, 0xCA));
  carve.shuffle(order);
  size_t n_val = static_cast<size_t>(std::floor(cfg.val_fraction * static_cast<double>(data.size())));
  if (n_val >= data.size()) n_val = data.size() - 1;
  std::vector<size_t> val_rows(order.begin(), order.begin() + n_val);
  std::vector<size_t> train_rows(order.begin() + n_val, order.end());
  if (train_rows.empty()) throw EmptyData("train: no rows left after validation carve");

  ModelParams params = init_params(cfg);
  AdamState adam{zeros_like(params), zeros_like(params), 0};

  ModelParams best = params;
  double best_macro = -1.0;
  int stale = 0;
  int h = cfg.hidden;
  bool use_dropout = cfg.stat_on && cfg.dropout > 0.0;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::vector<size_t> sched = train_rows;
    Rng shuf(mix_seed(cfg.seed, 0xE0000 + static_cast<uint64_t>(epoch)));
    shuf.shuffle(sched);
    Rng dropper(mix_seed(cfg.seed, 0xD0000 + static_cast<uint64_t>(epoch)));
    double loss_sum = 0.0;
    for (size_t start = 0; start < sched.size(); start += cfg.batch_size) {
      size_t bn = std::min(static_cast<size_t>(cfg.batch_size), sched.size() - start);
      // masks drawn serially in schedule order so threading cannot reorder draws
      std::vector<std::vector<double>> masks(bn);
      if (use_dropout) {
        for (size_t b = 0; b < bn; ++b) {
          masks[b].resize(h);
          for (int j = 0; j < h; ++j)
            masks[b][j] = dropper.uniform01() < cfg.dropout ? 0.0 : 1.0 / (1.0 - cfg.dropout);
        }
      }
      std::vector<InstanceCache> caches(bn);
      std::vector<ModelParams> slot_grads(bn, zeros_like(params));
      std::vector<double> losses(bn, 0.0);
#pragma omp parallel for schedule(dynamic)
      for (size_t b = 0; b < bn; ++b) {
        size_t i = sched[start + b];
        model_forward(params, inputs[i], true, use_dropout ? &masks[b] : nullptr, caches[b]);
        std::vector<double> dlogits;
        losses[b] = gat_loss(caches[b].logits, cfg.loss, data[i].label, data[i].targets, &dlogits);
        model_backward(params, inputs[i], caches[b], dlogits, slot_grads[b]);
      }
      ModelParams grads = zeros_like(params);
      std::vector<ParamRef> gr = param_refs(grads);
      double inv_b = 1.0 / static_cast<double>(bn);
      for (size_t b = 0; b < bn; ++b) {
        std::vector<ParamRef> sr = param_refs(slot_grads[b]);
        for (size_t r = 0; r < gr.size(); ++r)
          for (size_t i = 0; i < gr[r].mat->data.size(); ++i)
            gr[r].mat->data[i] += inv_b * sr[r].mat->data[i];
        loss_sum += losses[b];
      }
      adam_step(params, grads, adam, cfg);
    }
    EpochLog el;
    el.epoch = epoch;
    el.train_loss = loss_sum / static_cast<double>(train_rows.size());
    if (!val_rows.empty()) {
      ValMetrics vm = eval_instances(params, inputs, data, val_rows, cfg.loss, cfg.num_classes);
      el.val_accuracy = vm.accuracy;
      el.val_macro_f1 = vm.macro_f1;
      if (vm.macro_f1 > best_macro) {
        best_macro = vm.macro_f1;
        best = params;
        out.best_epoch = epoch;
        stale = 0;
      } else {
        ++stale;
      }
    } else {
      el.val_accuracy = std::numeric_limits<double>::quiet_NaN();
      el.val_macro_f1 = std::numeric_limits<double>::quiet_NaN();
    }
    out.log.push_back(el);
    if (!val_rows.empty() && stale > cfg.patience) break;
  }
  out.params = val_rows.empty() ? params : best;
  return out;
}

std::vector<double> model_logits(const TrainedModel& m, const Graph& g,
                                 const std::array<double, 12>& gfeat) {
  InstanceInput in = prepare_input(g, gfeat, m.norm);
  InstanceCache c;
  model_forward(m.params, in, false, nullptr, c);
  return c.logits;
}

int predict_class(const TrainedModel& m, const Graph& g, const std::array<double, 12>& gfeat) {
  std::vector<double> l = model_logits(m, g, gfeat);
  int best = 0;
  for (size_t j = 1; j < l.size(); ++j)
    if (l[j] > l[best]) best = static_cast<int>(j);
  return best;
}

std::vector<SolverId> predict_set(const TrainedModel& m, const Graph& g,
                                  const std::array<double, 12>& gfeat) {
  std::vector<double> l = model_logits(m, g, gfeat);
  std::vector<SolverId> out;
  int best = 0;
  for (int s = 0; s < kNumSolvers; ++s) {
    if (l[s] > 0.0) out.push_back(kAllSolvers[s]);
    if (l[s] > l[best]) best = s;
  }
  if (out.empty()) out.push_back(kAllSolvers[best]);
  return out;
}

std::string train_log_csv(const std::vector<EpochLog>& log) {
  std::string out = "epoch,train_loss,val_accuracy,val_macro_f1\n";
  for (const EpochLog& e : log) {
    out += csvio::format_int(e.epoch);
    out += ',';
    out += csvio::format_double(e.train_loss);
    out += ',';
    out += csvio::format_double(e.val_accuracy);
    out += ',';
    out += csvio::format_double(e.val_macro_f1);
    out += '\n';
  }
  return out;
}

nlohmann::json model_to_json(const TrainedModel& m) {
  ModelParams copy = m.params;
  nlohmann::json blocks;
  for (const ParamRef& r : param_refs(copy))
    blocks[r.name] = {{"rows", r.mat->rows}, {"cols", r.mat->cols}, {"data", r.mat->data}};
  return {{"format_version", 1},
          {"config", config_to_json(m.cfg)},
          {"normalizer", {{"mu", m.norm.mu}, {"sigma", m.norm.sigma}}},
          {"best_epoch", m.best_epoch},
          {"params", blocks}};
}

TrainedModel model_from_json(const nlohmann::json& j) {
  TrainedModel m;
  try {
    if (j.at("format_version").get<int>() != 1)
      throw SchemaMismatch("model: unsupported format version");
    m.cfg = config_from_json(j.at("config"));
    m.norm.mu = j.at("normalizer").at("mu").get<std::vector<double>>();
    m.norm.sigma = j.at("normalizer").at("sigma").get<std::vector<double>>();
    m.best_epoch = j.at("best_epoch").get<int>();
    m.params = init_params(m.cfg);
    const nlohmann::json& blocks = j.at("params");
    for (const ParamRef& r : param_refs(m.params)) {
      const nlohmann::json& b = blocks.at(r.name);
      if (b.at("rows").get<int>() != r.mat->rows || b.at("cols").get<int>() != r.mat->cols)
        throw SchemaMismatch("model: shape mismatch for block " + r.name);
      r.mat->data = b.at("data").get<std::vector<double>>();
      if (r.mat->data.size() != static_cast<size_t>(r.mat->rows) * r.mat->cols)
        throw SchemaMismatch("model: data length mismatch for block " + r.name);
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaMismatch(std::string("model: ") + e.what());
  }
  return m;
}

// --- gradient check ------------------------------------------------------

GradCheckResult gradient_check(uint64_t seed, const TrainConfig& cfg_in) {
  TrainConfig cfg = cfg_in;
  cfg.dropout = 0.0;
  cfg.seed = seed;
  Rng rng(mix_seed(seed, 0xFD));
  const int batch = 3;
  std::vector<GatInstance> data(batch);
  for (int b = 0; b < batch; ++b) {
    int n = 5 + static_cast<int>(rng.below(4));
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.bernoulli(0.5)) edges.emplace_back(u, v);
    data[b].graph = Graph::from_edges(n, edges);
    for (double& f : data[b].gfeat) f = rng.uniform(-1.0, 1.0);
    data[b].label = static_cast<int>(rng.below(static_cast<uint64_t>(cfg.num_classes)));
    for (int s = 0; s < kNumSolvers; ++s) data[b].targets[s] = rng.bernoulli(0.5) ? 1 : 0;
  }
  ZScoreNormalizer ident;
  ident.mu.assign(12, 0.0);
  ident.sigma.assign(12, 1.0);
  std::vector<InstanceInput> inputs;
  for (const GatInstance& d : data) inputs.push_back(prepare_input(d.graph, d.gfeat, ident));

  ModelParams params = init_params(cfg);
  auto batch_loss = [&]() {
    double total = 0.0;
    InstanceCache c;
    for (int b = 0; b < batch; ++b) {
      model_forward(params, inputs[b], false, nullptr, c);
      total += gat_loss(c.logits, cfg.loss, data[b].label, data[b].targets, nullptr);
    }
    return total / batch;
  };

  ModelParams grads = zeros_like(params);
  {
    InstanceCache c;
    std::vector<double> dlogits;
    for (int b = 0; b < batch; ++b) {
      model_forward(params, inputs[b], false, nullptr, c);
      gat_loss(c.logits, cfg.loss, data[b].label, data[b].targets, &dlogits);
      for (double& d : dlogits) d /= batch;
      model_backward(params, inputs[b], c, dlogits, grads);
    }
  }

  GradCheckResult res;
  const double step = 1e-5;
  std::vector<ParamRef> pr = param_refs(params);
  std::vector<ParamRef> gr = param_refs(grads);
  for (size_t blk = 0; blk < pr.size(); ++blk) {
    double diff2 = 0.0, a2 = 0.0, f2 = 0.0;
    for (size_t i = 0; i < pr[blk].mat->data.size(); ++i) {
      double& w = pr[blk].mat->data[i];
      double keep = w;
      w = keep + step;
      double up = batch_loss();
      w = keep - step;
      double down = batch_loss();
      w = keep;
      double fd = (up - down) / (2.0 * step);
      double an = gr[blk].mat->data[i];
      diff2 += (an - fd) * (an - fd);
      a2 += an * an;
      f2 += fd * fd;
    }
    double denom = std::sqrt(a2) + std::sqrt(f2);
    double rel = denom < 1e-8 ? 0.0 : std::sqrt(diff2) / denom;
    res.per_block.emplace_back(pr[blk].name, rel);
    res.max_rel_err = std::max(res.max_rel_err, rel);
  }
  return res;
}

}  // namespace cliquesel
