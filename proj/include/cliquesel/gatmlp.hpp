#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cliquesel/features.hpp"
#include "cliquesel/graph.hpp"
#include "cliquesel/mat.hpp"
#include "cliquesel/solvers.hpp"

namespace cliquesel {

enum class StructureMode { Attention, MeanAggregation, Off };
enum class LossMode { SoftmaxCE, SigmoidBCE };

const char* structure_mode_name(StructureMode m);
const char* loss_mode_name(LossMode m);

struct TrainConfig {
  double lr = 1e-3;
  double weight_decay = 1e-4;
  int hidden = 32;
  int heads = 4;
  double dropout = 0.5;
  double leaky_slope = 0.2;
  int batch_size = 16;
  int max_epochs = 50;
  int patience = 10;
  double val_fraction = 0.1;
  uint64_t seed = 0;
  LossMode loss = LossMode::SoftmaxCE;
  StructureMode struct_mode = StructureMode::Attention;
  bool stat_on = true;
  int num_classes = 4;
};

nlohmann::json config_to_json(const TrainConfig& cfg);
TrainConfig config_from_json(const nlohmann::json& j);

// Encoder ablations: full model, statistical-only, mean aggregation, structural-only.
enum class Ablation { Full, MlpOnly, GcnOnly, GatOnly };
const char* ablation_name(Ablation a);
TrainConfig apply_ablation(TrainConfig cfg, Ablation a);

// Neighborhoods with self-loops, CSR layout, ids ascending per row.
struct GraphCsr {
  int n = 0;
  std::vector<int> offsets;
  std::vector<int> nbrs;

  static GraphCsr from_graph(const Graph& g);
  int degree(int u) const { return offsets[u + 1] - offsets[u]; }
};

struct GatLayerParams {
  int heads = 1;
  int in_dim = 0;
  int head_dim = 0;
  std::vector<DenseMatrix> W;  // per head, in_dim x head_dim
  std::vector<DenseMatrix> a;  // per head, 2*head_dim x 1; empty in mean mode
};

struct ModelParams {
  int hidden = 0;
  int heads = 0;
  int num_classes = 0;
  StructureMode struct_mode = StructureMode::Attention;
  bool stat_on = true;
  double leaky_slope = 0.2;
  GatLayerParams gat1, gat2;
  DenseMatrix mlp_w1, mlp_b1, mlp_w2, mlp_b2;
  DenseMatrix cls_w, cls_b;

  int fused_dim() const;
};

struct ParamRef {
  std::string name;
  DenseMatrix* mat;
};
std::vector<ParamRef> param_refs(ModelParams& p);

// Active blocks sized per cfg; uniform fan-in init, zero biases.
ModelParams init_params(const TrainConfig& cfg);      // throws BothEncodersOff
ModelParams zeros_like(const ModelParams& p);

// One training example. label feeds softmax-CE; targets feed sigmoid-BCE.
struct GatInstance {
  std::string id;
  Graph graph;
  std::array<double, 12> gfeat{};
  int label = 0;
  std::array<int, kNumSolvers> targets{};
};

// Precomputed per-instance inputs: CSR, min-max normalized node features,
// z-scored global features.
struct InstanceInput {
  GraphCsr csr;
  DenseMatrix x0;
  std::vector<double> zfeat;
};
InstanceInput prepare_input(const Graph& g, const std::array<double, 12>& gfeat,
                            const ZScoreNormalizer& norm);

struct GatLayerCache {
  std::vector<DenseMatrix> P;             // per head, n x head_dim
  std::vector<std::vector<double>> score;  // per head, raw pre-LeakyReLU, edge-aligned
  std::vector<std::vector<double>> alpha;  // per head, edge-aligned
  DenseMatrix out;
};

struct InstanceCache {
  GatLayerCache g1, g2;
  DenseMatrix h1;  // ELU(g1.out)
  std::vector<double> z_struct;
  std::vector<double> s1_pre, s1_act, s1_drop, s2_pre, z_stat;
  std::vector<double> drop_mask;  // inverted-dropout multipliers, empty in eval
  std::vector<double> fused;
  std::vector<double> logits;
};

// Full forward pass; drop_mask (length hidden) only consulted in train mode.
void model_forward(const ModelParams& p, const InstanceInput& in, bool train_mode,
                   const std::vector<double>* drop_mask, InstanceCache& c);

double gat_loss(const std::vector<double>& logits, LossMode mode, int label,
                const std::array<int, kNumSolvers>& targets, std::vector<double>* dlogits);

// Accumulates exact gradients for one instance into g (same shapes as p).
void model_backward(const ModelParams& p, const InstanceInput& in, const InstanceCache& c,
                    const std::vector<double>& dlogits, ModelParams& g);

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;  // NaN when no validation split
  double val_macro_f1 = 0.0;
};

struct TrainedModel {
  ModelParams params;
  ZScoreNormalizer norm;
  TrainConfig cfg;
  std::vector<EpochLog> log;
  int best_epoch = -1;  // epoch of the returned checkpoint, -1 = final
};

// AdamW with decoupled weight decay; early stopping on validation Macro-F1
// restores the best checkpoint. Deterministic under cfg.seed.
TrainedModel train_gatmlp(const std::vector<GatInstance>& data, const TrainConfig& cfg);

std::vector<double> model_logits(const TrainedModel& m, const Graph& g,
                                 const std::array<double, 12>& gfeat);
int predict_class(const TrainedModel& m, const Graph& g, const std::array<double, 12>& gfeat);
std::vector<SolverId> predict_set(const TrainedModel& m, const Graph& g,
                                  const std::array<double, 12>& gfeat);

std::string train_log_csv(const std::vector<EpochLog>& log);

nlohmann::json model_to_json(const TrainedModel& m);
TrainedModel model_from_json(const nlohmann::json& j);

struct GradCheckResult {
  double max_rel_err = 0.0;
  std::vector<std::pair<std::string, double>> per_block;
};

// Central finite differences over every active parameter block on a small
// random batch; dropout forced off.
GradCheckResult gradient_check(uint64_t seed, const TrainConfig& cfg);

}  // namespace cliquesel
