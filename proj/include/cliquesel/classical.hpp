#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cliquesel/features.hpp"
#include "cliquesel/mat.hpp"
#include "cliquesel/solvers.hpp"

namespace cliquesel {

enum class ModelFamily { DecisionTree, RandomForest, Knn, LinearSvm };

const char* family_tag(ModelFamily f);  // "dt", "rf", "knn", "svm"
std::optional<ModelFamily> family_from_tag(const std::string& tag);

// One bag of knobs for all four families; each family reads its own subset.
struct HyperParams {
  int max_depth = -1;  // -1 = unlimited
  int min_samples_leaf = 1;
  int n_trees = 100;
  int features_per_split = 0;  // 0 = round(sqrt(F))
  bool bootstrap = true;
  int k = 5;
  double C = 1.0;
  int svm_epochs = 2000;
  uint64_t seed = 0;
};

// --- decision tree -------------------------------------------------------

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1, right = -1;
  std::vector<long long> counts;  // class histogram of the training rows here
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  int num_classes = 0;
  HyperParams hp;
};

double gini(const std::vector<long long>& counts);

// Greedy CART on Gini impurity. Splits are midpoints between consecutive
// distinct values (x <= t goes left) and must strictly reduce weighted
// impurity. Ties prefer the lower feature index, then the lower threshold.
TreeModel fit_tree(const DenseMatrix& X, const std::vector<int>& y, const HyperParams& hp,
                   int num_classes = 0);

int predict_tree(const TreeModel& m, const double* x);
std::vector<double> tree_class_scores(const TreeModel& m, const double* x);

// Per-feature total weighted Gini decrease, normalized to sum 1 (all zero
// when the tree never split).
std::vector<double> tree_feature_importance(const TreeModel& m, int num_features);

// --- random forest -------------------------------------------------------

struct ForestModel {
  std::vector<TreeModel> trees;
  int num_classes = 0;
  HyperParams hp;
};

ForestModel fit_forest(const DenseMatrix& X, const std::vector<int>& y, const HyperParams& hp,
                       int num_classes = 0);

int predict_forest(const ForestModel& m, const double* x);  // majority vote
std::vector<double> forest_class_scores(const ForestModel& m, const double* x);

// Mean of per-tree normalized importances over trees that split at all.
std::vector<double> forest_feature_importance(const ForestModel& m, int num_features);

// --- k nearest neighbors -------------------------------------------------

struct KnnModel {
  DenseMatrix X;  // expected pre-normalized
  std::vector<int> y;
  int num_classes = 0;
  HyperParams hp;
};

KnnModel fit_knn(const DenseMatrix& X, const std::vector<int>& y, const HyperParams& hp,
                 int num_classes = 0);

int predict_knn(const KnnModel& m, const double* x);
std::vector<double> knn_class_scores(const KnnModel& m, const double* x);  // vote shares

// --- linear svm ----------------------------------------------------------

struct LinearSvmModel {
  DenseMatrix W;  // num_classes x F, one-vs-rest
  std::vector<double> b;
  int num_classes = 0;
  HyperParams hp;
};

// Deterministic full-batch subgradient descent on the L2-regularized hinge
// loss, one binary problem per class. Inputs should be pre-normalized.
LinearSvmModel fit_svm(const DenseMatrix& X, const std::vector<int>& y, const HyperParams& hp,
                       int num_classes = 0);

int predict_svm(const LinearSvmModel& m, const double* x);
std::vector<double> svm_class_scores(const LinearSvmModel& m, const double* x);

// --- unified classifier --------------------------------------------------

// Owns the family model plus the z-score normalizer fitted on raw training
// features, so callers always pass raw feature rows.
class Classifier {
 public:
  Classifier() = default;
  Classifier(ModelFamily family, HyperParams hp) : family_(family), hp_(hp) {}

  void fit(const DenseMatrix& X_raw, const std::vector<int>& y, int num_classes = 0);
  int predict(const double* x_raw) const;
  std::vector<int> predict_batch(const DenseMatrix& X_raw) const;
  std::vector<double> class_scores(const double* x_raw) const;

  ModelFamily family() const { return family_; }
  const HyperParams& hp() const { return hp_; }
  int num_classes() const { return num_classes_; }
  bool fitted() const { return fitted_; }
  std::vector<double> feature_importance() const;  // dt and rf only

  nlohmann::json to_json() const;
  static Classifier from_json(const nlohmann::json& j);

 private:
  ModelFamily family_ = ModelFamily::DecisionTree;
  HyperParams hp_;
  int num_classes_ = 0;
  bool fitted_ = false;
  ZScoreNormalizer norm_;
  TreeModel tree_;
  ForestModel forest_;
  KnnModel knn_;
  LinearSvmModel svm_;
};

// --- cross-validation ----------------------------------------------------

struct GridSearchResult {
  HyperParams best;
  std::vector<std::pair<HyperParams, double>> scores;  // mean CV accuracy per config
  uint64_t fold_seed = 0;
};

// fold id per row; per-class round-robin so class fold counts differ by <= 1.
std::vector<int> stratified_folds(const std::vector<int>& y, int folds, uint64_t seed);

GridSearchResult cross_validate_grid(const DenseMatrix& X, const std::vector<int>& y,
                                     ModelFamily family, const std::vector<HyperParams>& grid,
                                     int folds, uint64_t seed);

std::vector<HyperParams> default_grid(ModelFamily family, uint64_t seed);

// --- method 3 ------------------------------------------------------------

// Four independent binary models; the multi-label prediction is every solver
// whose model says positive, falling back to the best positive score when
// all four say negative.
struct Method3Model {
  std::array<Classifier, kNumSolvers> models;

  std::vector<SolverId> predict_set(const double* x_raw) const;
  nlohmann::json to_json() const;
  static Method3Model from_json(const nlohmann::json& j);
};

Method3Model fit_method3(const DenseMatrix& X_raw, const std::array<std::vector<int>, kNumSolvers>& targets,
                         ModelFamily family, const HyperParams& hp);

}  // namespace cliquesel
