#include "cliquesel/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cliquesel/errors.hpp"
#include "cliquesel/rng.hpp"

namespace cliquesel {

const char* family_tag(ModelFamily f) {
  switch (f) {
    case ModelFamily::DecisionTree: return "dt";
    case ModelFamily::RandomForest: return "rf";
    case ModelFamily::Knn: return "knn";
    case ModelFamily::LinearSvm: return "svm";
  }
  return "?";
}

std::optional<ModelFamily> family_from_tag(const std::string& tag) {
  if (tag == "dt") return ModelFamily::DecisionTree;
  if (tag == "rf") return ModelFamily::RandomForest;
  if (tag == "knn") return ModelFamily::Knn;
  if (tag == "svm") return ModelFamily::LinearSvm;
  return std::nullopt;
}

namespace {

int infer_classes(const std::vector<int>& y, int num_classes) {
  int hi = 0;
  for (int c : y) {
    if (c < 0) throw LabelOutOfRange("fit: negative class label");
    hi = std::max(hi, c + 1);
  }
  if (num_classes == 0) return hi;
  if (hi > num_classes) throw LabelOutOfRange("fit: label exceeds num_classes");
  return num_classes;
}

void validate_xy(const DenseMatrix& X, const std::vector<int>& y) {
  if (X.rows == 0) throw EmptyData("fit: no training rows");
  if (static_cast<size_t>(X.rows) != y.size())
    throw LengthMismatch("fit: row count and label count differ");
  for (double v : X.data)
    if (!std::isfinite(v)) throw NonFiniteFeature("fit: non-finite feature value");
}

}  // namespace

double gini(const std::vector<long long>& counts) {
  long long n = std::accumulate(counts.begin(), counts.end(), 0LL);
  if (n == 0) return 0.0;
  double acc = 0.0;
  for (long long c : counts) {
    double p = static_cast<double>(c) / static_cast<double>(n);
    acc += p * p;
  }
  return 1.0 - acc;
}

// --- decision tree -------------------------------------------------------

namespace {

struct TreeBuilder {
  const DenseMatrix& X;
  const std::vector<int>& y;
  const HyperParams& hp;
  int num_classes;
  int mtry;   // features considered per split; 0 = all
  Rng* rng;   // only used when mtry > 0
  std::vector<TreeNode> nodes;

  int build(std::vector<int>& idx, int depth) {
    std::vector<long long> counts(num_classes, 0);
    for (int i : idx) ++counts[y[i]];
    int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[id].counts = counts;

    long long n = static_cast<long long>(idx.size());
    bool pure = *std::max_element(counts.begin(), counts.end()) == n;
    bool depth_capped = hp.max_depth >= 0 && depth >= hp.max_depth;
    if (pure || depth_capped || n < 2 * static_cast<long long>(hp.min_samples_leaf) || n < 2)
      return id;

    std::vector<int> feats;
    if (mtry > 0 && mtry < X.cols) {
      std::vector<int> pool(X.cols);
      std::iota(pool.begin(), pool.end(), 0);
      for (int i = 0; i < mtry; ++i) {
        size_t j = i + static_cast<size_t>(rng->below(pool.size() - i));
        std::swap(pool[i], pool[j]);
      }
      feats.assign(pool.begin(), pool.begin() + mtry);
      std::sort(feats.begin(), feats.end());
    } else {
      feats.resize(X.cols);
      std::iota(feats.begin(), feats.end(), 0);
    }

    double parent_weighted = gini(counts) * static_cast<double>(n);
    double best_weighted = parent_weighted - 1e-12;
    int best_feat = -1;
    double best_thresh = 0.0;

    std::vector<std::pair<double, int>> vals(idx.size());
    std::vector<long long> left(num_classes);
    for (int f : feats) {
      for (size_t i = 0; i < idx.size(); ++i) vals[i] = {X.at(idx[i], f), y[idx[i]]};
      std::sort(vals.begin(), vals.end());
      std::fill(left.begin(), left.end(), 0);
      for (size_t i = 0; i + 1 < vals.size(); ++i) {
        ++left[vals[i].second];
        if (vals[i + 1].first <= vals[i].first) continue;
        long long nl = static_cast<long long>(i) + 1, nr = n - nl;
        if (nl < hp.min_samples_leaf || nr < hp.min_samples_leaf) continue;
        std::vector<long long> right(num_classes);
        for (int c = 0; c < num_classes; ++c) right[c] = counts[c] - left[c];
        double w = gini(left) * static_cast<double>(nl) + gini(right) * static_cast<double>(nr);
        if (w < best_weighted) {
          best_weighted = w;
          best_feat = f;
          best_thresh = vals[i].first + 0.5 * (vals[i + 1].first - vals[i].first);
        }
      }
    }
    if (best_feat < 0) return id;

    std::vector<int> idx_l, idx_r;
    for (int i : idx)
      (X.at(i, best_feat) <= best_thresh ? idx_l : idx_r).push_back(i);
    int l = build(idx_l, depth + 1);
    int r = build(idx_r, depth + 1);
    nodes[id].feature = best_feat;
    nodes[id].threshold = best_thresh;
    nodes[id].left = l;
    nodes[id].right = r;
    return id;
  }
};

TreeModel fit_tree_impl(const DenseMatrix& X, const std::vector<int>& y, const HyperParams& hp,
                        int num_classes, const std::vector<int>& rows, int mtry, Rng* rng) {
  TreeBuilder b{X, y, hp, num_classes, mtry, rng, {}};
  std::vector<int> idx = rows;
  b.build(idx, 0);
  TreeModel m;
  m.nodes = std::move(b.nodes);
  m.num_classes = num_classes;
  m.hp = hp;
  return m;
}

}  // namespace

TreeModel fit_tree(const DenseMatrix& X, const std::vector<int>& y, const HyperParams& hp,
                   int num_classes) {
  validate_xy(X, y);
  num_classes = infer_classes(y, num_classes);
  std::vector<int> rows(X.rows);
  std::iota(rows.begin(), rows.end(), 0);
  return fit_tree_impl(X, y, hp, num_classes, rows, 0, nullptr);
}

namespace {

const TreeNode& descend(const TreeModel& m, const double* x) {
  int at = 0;
  while (m.nodes[at].feature >= 0)
    at = x[m.nodes[at].feature] <= m.nodes[at].threshold ? m.nodes[at].left : m.nodes[at].right;
  return m.nodes[at];
}

int argmax_lowest(const std::vector<double>& v) {
  int best = 0;
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = static_cast<int>(i);
  return best;
}

}  // namespace

int predict_tree(const TreeModel& m, const double* x) {
  const TreeNode& leaf = descend(m, x);
  int best = 0;
  for (int c = 1; c < m.num_classes; ++c)
    if (leaf.counts[c] > leaf.counts[best]) best = c;
  return best;
}

std::vector<double> tree_class_scores(const TreeModel& m, const double* x) {
  const TreeNode& leaf = descend(m, x);
  long long n = std::accumulate(leaf.counts.begin(), leaf.counts.end(), 0LL);
  std::vector<double> out(m.num_classes, 0.0);
  for (int c = 0; c < m.num_classes; ++c)
    out[c] = n > 0 ? static_cast<double>(leaf.counts[c]) / static_cast<double>(n) : 0.0;
  return out;
}

std::vector<double> tree_feature_importance(const TreeModel& m, int num_features) {
  std::vector<double> imp(num_features, 0.0);
  for (const TreeNode& node : m.nodes) {
    if (node.feature < 0) continue;
    const TreeNode& l = m.nodes[node.left];
    const TreeNode& r = m.nodes[node.right];
    long long n = std::accumulate(node.counts.begin(), node.counts.end(), 0LL);
    long long nl = std::accumulate(l.counts.begin(), l.counts.end(), 0LL);
    long long nr = n - nl;
    double dec = gini(node.counts) * static_cast<double>(n) -
                 gini(l.counts) * static_cast<double>(nl) -
                 gini(r.counts) * static_cast<double>(nr);
    imp[node.feature] += dec;
  }
  double total = std::accumulate(imp.begin(), imp.end(), 0.0);
  if (total > 0.0)
    for (double& v : imp) v /= total;
  return imp;
}

// --- random forest -------------------------------------------------------

ForestModel fit_forest(const DenseMatrix& X, const std::vector<int>& y, const HyperParams& hp,
                       int num_classes) {
  validate_xy(X, y);
  if (hp.n_trees < 1) throw InvalidSpec("fit_forest: need at least one tree");
  num_classes = infer_classes(y, num_classes);
  int mtry = hp.features_per_split > 0
                 ? hp.features_per_split
                 : static_cast<int>(std::lround(std::sqrt(static_cast<double>(X.cols))));
  mtry = std::clamp(mtry, 1, X.cols);
  ForestModel m;
  m.num_classes = num_classes;
  m.hp = hp;
  m.trees.resize(hp.n_trees);
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < hp.n_trees; ++t) {
    Rng rng(mix_seed(hp.seed, static_cast<uint64_t>(t)));
    std::vector<int> rows(X.rows);
    if (hp.bootstrap) {
      for (int i = 0; i < X.rows; ++i)
        rows[i] = static_cast<int>(rng.below(static_cast<uint64_t>(X.rows)));
      std::sort(rows.begin(), rows.end());
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    int tree_mtry = (hp.bootstrap || hp.features_per_split > 0) ? mtry : 0;
    m.trees[t] = fit_tree_impl(X, y, hp, num_classes, rows, tree_mtry, &rng);
  }
  return m;
}

int predict_forest(const ForestModel& m, const double* x) {
  std::vector<int> votes(m.num_classes, 0);
  for (const TreeModel& t : m.trees) ++votes[predict_tree(t, x)];
  int best = 0;
  for (int c = 1; c < m.num_classes; ++c)
    if (votes[c] > votes[best]) best = c;
  return best;
}

std::vector<double> forest_class_scores(const ForestModel& m, const double* x) {
  std::vector<double> acc(m.num_classes, 0.0);
  for (const TreeModel& t : m.trees) {
    std::vector<double> s = tree_class_scores(t, x);
    for (int c = 0; c < m.num_classes; ++c) acc[c] += s[c];
  }
  for (double& v : acc) v /= static_cast<double>(m.trees.size());
  return acc;
}

std::vector<double> forest_feature_importance(const ForestModel& m, int num_features) {
  if (m.trees.empty()) throw UnfitModel("forest_feature_importance: model not fitted");
  std::vector<double> acc(num_features, 0.0);
  int splitting = 0;
  for (const TreeModel& t : m.trees) {
    std::vector<double> imp = tree_feature_importance(t, num_features);
    double s = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (s <= 0.0) continue;
    ++splitting;
    for (int f = 0; f < num_features; ++f) acc[f] += imp[f];
  }
  if (splitting > 0)
    for (double& v : acc) v /= static_cast<double>(splitting);
  return acc;
}

// --- k nearest neighbors -------------------------------------------------

KnnModel fit_knn(const DenseMatrix& X, const std::vector<int>& y, const HyperParams& hp,
                 int num_classes) {
  validate_xy(X, y);
  if (hp.k < 1) throw InvalidSpec("fit_knn: k must be >= 1");
  if (hp.k > X.rows) throw KTooLarge("fit_knn: k exceeds training size");
  KnnModel m;
  m.X = X;
  m.y = y;
  m.num_classes = infer_classes(y, num_classes);
  m.hp = hp;
  return m;
}

std::vector<double> knn_class_scores(const KnnModel& m, const double* x) {
  std::vector<std::pair<double, int>> dist(m.X.rows);
  for (int i = 0; i < m.X.rows; ++i) {
    const double* row = m.X.row_ptr(i);
    double d2 = 0.0;
    for (int f = 0; f < m.X.cols; ++f) {
      double d = row[f] - x[f];
      d2 += d * d;
    }
    dist[i] = {d2, i};  // index as tie-break
  }
  std::sort(dist.begin(), dist.end());
  std::vector<double> votes(m.num_classes, 0.0);
  for (int i = 0; i < m.hp.k; ++i) votes[m.y[dist[i].second]] += 1.0;
  for (double& v : votes) v /= static_cast<double>(m.hp.k);
  return votes;
}

int predict_knn(const KnnModel& m, const double* x) { return argmax_lowest(knn_class_scores(m, x)); }

// --- linear svm ----------------------------------------------------------

LinearSvmModel fit_svm(const DenseMatrix& X, const std::vector<int>& y, const HyperParams& hp,
                       int num_classes) {
  validate_xy(X, y);
  num_classes = infer_classes(y, num_classes);
  std::vector<char> present(num_classes, 0);
  for (int c : y) present[c] = 1;
  if (std::count(present.begin(), present.end(), 1) < 2)
    throw SingleClass("fit_svm: need at least two classes present");
  if (!(hp.C > 0.0)) throw InvalidSpec("fit_svm: C must be positive");

  int n = X.rows, F = X.cols;
  LinearSvmModel m;
  m.num_classes = num_classes;
  m.hp = hp;
  m.W = DenseMatrix(num_classes, F);
  m.b.assign(num_classes, 0.0);
  std::vector<double> grad(F);
  for (int c = 0; c < num_classes; ++c) {
    double* w = m.W.row_ptr(c);
    double& b = m.b[c];
    for (int t = 0; t < hp.svm_epochs; ++t) {
      double eta = 0.1 / (1.0 + static_cast<double>(t) / 50.0);
      std::fill(grad.begin(), grad.end(), 0.0);
      double gb = 0.0;
      for (int i = 0; i < n; ++i) {
        double yi = y[i] == c ? 1.0 : -1.0;
        const double* xi = X.row_ptr(i);
        double margin = b;
        for (int f = 0; f < F; ++f) margin += w[f] * xi[f];
        if (yi * margin < 1.0) {
          for (int f = 0; f < F; ++f) grad[f] -= yi * xi[f];
          gb -= yi;
        }
      }
      double inv_cn = 1.0 / (hp.C * static_cast<double>(n));
      for (int f = 0; f < F; ++f) w[f] -= eta * (w[f] * inv_cn + grad[f] / n);
      b -= eta * gb / n;
    }
  }
  return m;
}

std::vector<double> svm_class_scores(const LinearSvmModel& m, const double* x) {
  std::vector<double> out(m.num_classes, 0.0);
  for (int c = 0; c < m.num_classes; ++c) {
    const double* w = m.W.row_ptr(c);
    double s = m.b[c];
    for (int f = 0; f < m.W.cols; ++f) s += w[f] * x[f];
    out[c] = s;
  }
  return out;
}

int predict_svm(const LinearSvmModel& m, const double* x) {
  return argmax_lowest(svm_class_scores(m, x));
}

// --- unified classifier --------------------------------------------------

void Classifier::fit(const DenseMatrix& X_raw, const std::vector<int>& y, int num_classes) {
  validate_xy(X_raw, y);
  num_classes_ = infer_classes(y, num_classes);
  if (X_raw.rows >= 2) {
    norm_ = zscore_fit(X_raw);
  } else {
    norm_.mu.assign(X_raw.cols, 0.0);
    norm_.sigma.assign(X_raw.cols, 1.0);
  }
  DenseMatrix X = norm_.apply(X_raw);
  switch (family_) {
    case ModelFamily::DecisionTree: tree_ = fit_tree(X, y, hp_, num_classes_); break;
    case ModelFamily::RandomForest: forest_ = fit_forest(X, y, hp_, num_classes_); break;
    case ModelFamily::Knn: knn_ = fit_knn(X, y, hp_, num_classes_); break;
    case ModelFamily::LinearSvm: svm_ = fit_svm(X, y, hp_, num_classes_); break;
  }
  fitted_ = true;
}

std::vector<double> Classifier::class_scores(const double* x_raw) const {
  if (!fitted_) throw UnfitModel("classifier: predict before fit");
  std::vector<double> x = norm_.apply_row(x_raw);
  switch (family_) {
    case ModelFamily::DecisionTree: return tree_class_scores(tree_, x.data());
    case ModelFamily::RandomForest: return forest_class_scores(forest_, x.data());
    case ModelFamily::Knn: return knn_class_scores(knn_, x.data());
    case ModelFamily::LinearSvm: return svm_class_scores(svm_, x.data());
  }
  throw InvalidSpec("classifier: unknown family");
}

int Classifier::predict(const double* x_raw) const {
  if (!fitted_) throw UnfitModel("classifier: predict before fit");
  std::vector<double> x = norm_.apply_row(x_raw);
  switch (family_) {
    case ModelFamily::DecisionTree: return predict_tree(tree_, x.data());
    case ModelFamily::RandomForest: return predict_forest(forest_, x.data());
    case ModelFamily::Knn: return predict_knn(knn_, x.data());
    case ModelFamily::LinearSvm: return predict_svm(svm_, x.data());
  }
  throw InvalidSpec("classifier: unknown family");
}

std::vector<int> Classifier::predict_batch(const DenseMatrix& X_raw) const {
  std::vector<int> out(X_raw.rows);
  for (int i = 0; i < X_raw.rows; ++i) out[i] = predict(X_raw.row_ptr(i));
  return out;
}

std::vector<double> Classifier::feature_importance() const {
  if (!fitted_) throw UnfitModel("feature_importance: model not fitted");
  int nf = static_cast<int>(norm_.mu.size());
  if (family_ == ModelFamily::DecisionTree) return tree_feature_importance(tree_, nf);
  if (family_ == ModelFamily::RandomForest) return forest_feature_importance(forest_, nf);
  throw InvalidSpec("feature_importance: only defined for dt and rf");
}

namespace {

nlohmann::json hp_to_json(const HyperParams& hp) {
  return {{"max_depth", hp.max_depth},
          {"min_samples_leaf", hp.min_samples_leaf},
          {"n_trees", hp.n_trees},
          {"features_per_split", hp.features_per_split},
          {"bootstrap", hp.bootstrap},
          {"k", hp.k},
          {"C", hp.C},
          {"svm_epochs", hp.svm_epochs},
          {"seed", hp.seed}};
}

HyperParams hp_from_json(const nlohmann::json& j) {
  HyperParams hp;
  hp.max_depth = j.at("max_depth").get<int>();
  hp.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  hp.n_trees = j.at("n_trees").get<int>();
  hp.features_per_split = j.at("features_per_split").get<int>();
  hp.bootstrap = j.at("bootstrap").get<bool>();
  hp.k = j.at("k").get<int>();
  hp.C = j.at("C").get<double>();
  hp.svm_epochs = j.at("svm_epochs").get<int>();
  hp.seed = j.at("seed").get<uint64_t>();
  return hp;
}

nlohmann::json tree_to_json(const TreeModel& m) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const TreeNode& n : m.nodes)
    nodes.push_back({{"feature", n.feature},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"counts", n.counts}});
  return {{"num_classes", m.num_classes}, {"nodes", nodes}};
}

TreeModel tree_from_json(const nlohmann::json& j, const HyperParams& hp) {
  TreeModel m;
  m.num_classes = j.at("num_classes").get<int>();
  m.hp = hp;
  for (const nlohmann::json& nj : j.at("nodes")) {
    TreeNode n;
    n.feature = nj.at("feature").get<int>();
    n.threshold = nj.at("threshold").get<double>();
    n.left = nj.at("left").get<int>();
    n.right = nj.at("right").get<int>();
    n.counts = nj.at("counts").get<std::vector<long long>>();
    m.nodes.push_back(std::move(n));
  }
  if (m.nodes.empty()) throw SchemaMismatch("tree: empty node list");
  return m;
}

nlohmann::json matrix_to_json(const DenseMatrix& m) {
  return {{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

DenseMatrix matrix_from_json(const nlohmann::json& j) {
  DenseMatrix m(j.at("rows").get<int>(), j.at("cols").get<int>());
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != static_cast<size_t>(m.rows) * m.cols)
    throw SchemaMismatch("matrix: data length does not match shape");
  return m;
}

}  // namespace

nlohmann::json Classifier::to_json() const {
  if (!fitted_) throw UnfitModel("to_json: model not fitted");
  nlohmann::json params;
  switch (family_) {
    case ModelFamily::DecisionTree: params = tree_to_json(tree_); break;
    case ModelFamily::RandomForest: {
      nlohmann::json trees = nlohmann::json::array();
      for (const TreeModel& t : forest_.trees) trees.push_back(tree_to_json(t));
      params = {{"num_classes", forest_.num_classes}, {"trees", trees}};
      break;
    }
    case ModelFamily::Knn:
      params = {{"num_classes", knn_.num_classes}, {"X", matrix_to_json(knn_.X)}, {"y", knn_.y}};
      break;
    case ModelFamily::LinearSvm:
      params = {{"num_classes", svm_.num_classes}, {"W", matrix_to_json(svm_.W)}, {"b", svm_.b}};
      break;
  }
  return {{"format_version", 1},
          {"family", family_tag(family_)},
          {"num_classes", num_classes_},
          {"hyperparameters", hp_to_json(hp_)},
          {"normalizer", {{"mu", norm_.mu}, {"sigma", norm_.sigma}}},
          {"parameters", params}};
}

Classifier Classifier::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<int>() != 1)
      throw SchemaMismatch("classifier: unsupported format version");
    std::optional<ModelFamily> fam = family_from_tag(j.at("family").get<std::string>());
    if (!fam) throw SchemaMismatch("classifier: unknown family tag");
    Classifier c(*fam, hp_from_json(j.at("hyperparameters")));
    c.num_classes_ = j.at("num_classes").get<int>();
    c.norm_.mu = j.at("normalizer").at("mu").get<std::vector<double>>();
    c.norm_.sigma = j.at("normalizer").at("sigma").get<std::vector<double>>();
    const nlohmann::json& params = j.at("parameters");
    switch (*fam) {
      case ModelFamily::DecisionTree: c.tree_ = tree_from_json(params, c.hp_); break;
      case ModelFamily::RandomForest: {
        c.forest_.num_classes = params.at("num_classes").get<int>();
        c.forest_.hp = c.hp_;
        for (const nlohmann::json& tj : params.at("trees"))
          c.forest_.trees.push_back(tree_from_json(tj, c.hp_));
        if (c.forest_.trees.empty()) throw SchemaMismatch("forest: no trees");
        break;
      }
      case ModelFamily::Knn: {
        c.knn_.num_classes = params.at("num_classes").get<int>();
        c.knn_.X = matrix_from_json(params.at("X"));
        c.knn_.y = params.at("y").get<std::vector<int>>();
        c.knn_.hp = c.hp_;
        if (c.knn_.y.size() != static_cast<size_t>(c.knn_.X.rows))
          throw SchemaMismatch("knn: label count does not match rows");
        break;
      }
      case ModelFamily::LinearSvm: {
        c.svm_.num_classes = params.at("num_classes").get<int>();
        c.svm_.W = matrix_from_json(params.at("W"));
        c.svm_.b = params.at("b").get<std::vector<double>>();
        c.svm_.hp = c.hp_;
        break;
      }
    }
    c.fitted_ = true;
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaMismatch(std::string("classifier: ") + e.what());
  }
}

// --- cross-validation ----------------------------------------------------

std::vector<int> stratified_folds(const std::vector<int>& y, int folds, uint64_t seed) {
  if (folds < 2) throw InvalidSpec("stratified_folds: need at least 2 folds");
  int num_classes = 0;
  for (int c : y) num_classes = std::max(num_classes, c + 1);
  std::vector<int> fold(y.size(), -1);
  size_t global = 0;
  for (int c = 0; c < num_classes; ++c) {
    std::vector<size_t> rows;
    for (size_t i = 0; i < y.size(); ++i)
      if (y[i] == c) rows.push_back(i);
    Rng rng(mix_seed(seed, 7000 + static_cast<uint64_t>(c)));
    rng.shuffle(rows);
    for (size_t i : rows) fold[i] = static_cast<int>(global++ % folds);
  }
  return fold;
}

GridSearchResult cross_validate_grid(const DenseMatrix& X, const std::vector<int>& y,
                                     ModelFamily family, const std::vector<HyperParams>& grid,
                                     int folds, uint64_t seed) {
  if (X.rows < folds) throw TooFewInstances("cross_validate_grid: fewer rows than folds");
  if (grid.empty()) throw InvalidSpec("cross_validate_grid: empty grid");
  validate_xy(X, y);
  int num_classes = infer_classes(y, 0);
  std::vector<int> fold = stratified_folds(y, folds, seed);

  GridSearchResult res;
  res.fold_seed = seed;
  double best_score = -1.0;
  for (size_t cfg = 0; cfg < grid.size(); ++cfg) {
    double acc_sum = 0.0;
    int acc_folds = 0;
    bool failed = false;
    for (int f = 0; f < folds && !failed; ++f) {
      std::vector<int> tr_rows, ev_rows;
      for (int i = 0; i < X.rows; ++i) (fold[i] == f ? ev_rows : tr_rows).push_back(i);
      if (ev_rows.empty()) continue;
      DenseMatrix Xtr(static_cast<int>(tr_rows.size()), X.cols);
      std::vector<int> ytr(tr_rows.size());
      for (size_t i = 0; i < tr_rows.size(); ++i) {
        std::copy_n(X.row_ptr(tr_rows[i]), X.cols, Xtr.row_ptr(static_cast<int>(i)));
        ytr[i] = y[tr_rows[i]];
      }
      HyperParams hp = grid[cfg];
      hp.seed = mix_seed(seed, cfg * 16 + static_cast<uint64_t>(f));
      Classifier model(family, hp);
      try {
        model.fit(Xtr, ytr, num_classes);
      } catch (const Error&) {
        failed = true;  // configuration unusable on this data, e.g. k too large
        break;
      }
      int correct = 0;
      for (int i : ev_rows)
        if (model.predict(X.row_ptr(i)) == y[i]) ++correct;
      acc_sum += static_cast<double>(correct) / static_cast<double>(ev_rows.size());
      ++acc_folds;
    }
    double mean = (failed || acc_folds == 0) ? -1.0 : acc_sum / acc_folds;
    res.scores.emplace_back(grid[cfg], mean);
    if (mean > best_score) {
      best_score = mean;
      res.best = grid[cfg];
    }
  }
  if (best_score < 0.0) throw EmptyResult("cross_validate_grid: no configuration trained");
  return res;
}

std::vector<HyperParams> default_grid(ModelFamily family, uint64_t seed) {
  std::vector<HyperParams> grid;
  HyperParams base;
  base.seed = seed;
  switch (family) {
    case ModelFamily::DecisionTree:
      for (int depth : {3, 5, 8, -1})
        for (int leaf : {1, 3, 5}) {
          HyperParams hp = base;
          hp.max_depth = depth;
          hp.min_samples_leaf = leaf;
          grid.push_back(hp);
        }
      break;
    case ModelFamily::RandomForest:
      for (int trees : {50, 100, 200}) {
        HyperParams hp = base;
        hp.n_trees = trees;
        grid.push_back(hp);
      }
      break;
    case ModelFamily::Knn:
      for (int k : {1, 3, 5, 7}) {
        HyperParams hp = base;
        hp.k = k;
        grid.push_back(hp);
      }
      break;
    case ModelFamily::LinearSvm:
      for (double C : {0.1, 1.0, 10.0}) {
        HyperParams hp = base;
        hp.C = C;
        grid.push_back(hp);
      }
      break;
  }
  return grid;
}

// --- method 3 ------------------------------------------------------------

Method3Model fit_method3(const DenseMatrix& X_raw,
                         const std::array<std::vector<int>, kNumSolvers>& targets,
                         ModelFamily family, const HyperParams& hp) {
  Method3Model m;
  for (int s = 0; s < kNumSolvers; ++s) {
    if (targets[s].size() != static_cast<size_t>(X_raw.rows))
      throw LengthMismatch("fit_method3: target length does not match rows");
    HyperParams hs = hp;
    hs.seed = mix_seed(hp.seed, 40 + static_cast<uint64_t>(s));
    m.models[s] = Classifier(family, hs);
    m.models[s].fit(X_raw, targets[s], 2);
  }
  return m;
}

std::vector<SolverId> Method3Model::predict_set(const double* x_raw) const {
  std::vector<SolverId> out;
  double best_score = -1e300;
  int best_solver = 0;
  for (int s = 0; s < kNumSolvers; ++s) {
    std::vector<double> sc = models[s].class_scores(x_raw);
    double positive = sc[1] - sc[0];
    if (models[s].predict(x_raw) == 1) out.push_back(kAllSolvers[s]);
    if (positive > best_score) {
      best_score = positive;
      best_solver = s;
    }
  }
  if (out.empty()) out.push_back(kAllSolvers[best_solver]);
  return out;
}

nlohmann::json Method3Model::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const Classifier& c : models) arr.push_back(c.to_json());
  return {{"format_version", 1}, {"kind", "method3"}, {"models", arr}};
}

Method3Model Method3Model::from_json(const nlohmann::json& j) {
  try {
    if (j.at("kind").get<std::string>() != "method3")
      throw SchemaMismatch("method3: wrong document kind");
    const nlohmann::json& arr = j.at("models");
    if (arr.size() != kNumSolvers) throw SchemaMismatch("method3: expected four models");
    Method3Model m;
    for (int s = 0; s < kNumSolvers; ++s) m.models[s] = Classifier::from_json(arr[s]);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaMismatch(std::string("method3: ") + e.what());
  }
}

}  // namespace cliquesel
