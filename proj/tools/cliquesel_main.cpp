// cliquesel: instance-aware algorithm selection for maximum clique.
// Subcommands cover the whole pipeline: gen-corpus -> features -> solve ->
// label -> build -> train -> evaluate -> report, plus predict and gradcheck.

#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cliquesel/csvio.hpp"
#include "cliquesel/pipeline.hpp"

namespace fs = std::filesystem;
using namespace cliquesel;

namespace {

constexpr const char* kToolVersion = "0.1.0";

// exit codes: 0 success, 1 partial (some inputs skipped), 2 fatal
constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kFatal = 2;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaMismatch(path.string() + ": " + e.what());
  }
}

// Sidecar manifest written next to every data file: seeds, budgets and
// versions, but never timestamps, so reruns stay byte-identical.
void write_manifest(const fs::path& data_path, nlohmann::json extra) {
  extra["tool_version"] = kToolVersion;
  extra["format_version"] = 1;
  write_json(data_path.string() + ".manifest.json", extra);
}

// Expands arguments into graph files: directories contribute their *.clq
// entries in sorted order, plain files pass through.
std::vector<fs::path> expand_graph_inputs(const std::vector<std::string>& args,
                                          int* missing = nullptr) {
  std::vector<fs::path> files;
  for (const std::string& a : args) {
    fs::path p(a);
    if (fs::is_directory(p)) {
      std::vector<fs::path> inside;
      for (const auto& e : fs::directory_iterator(p))
        if (e.is_regular_file() && e.path().extension() == ".clq") inside.push_back(e.path());
      std::sort(inside.begin(), inside.end());
      files.insert(files.end(), inside.begin(), inside.end());
    } else if (fs::is_regular_file(p)) {
      files.push_back(p);
    } else {
      std::cerr << "warning: no such input: " << a << "\n";
      if (missing) ++*missing;
    }
  }
  return files;
}

int set_jobs(int jobs) {
  if (jobs > 0) omp_set_num_threads(jobs);
  return jobs;
}

// --- gen-corpus -------------------------------------------------------------

int cmd_gen_corpus(const std::string& out_dir, uint64_t seed, int count,
                   const std::string& spec_file) {
  std::vector<CorpusSpec> specs;
  if (!spec_file.empty()) {
    nlohmann::json j = read_json(spec_file);
    if (!j.is_array()) throw SchemaMismatch("spec file: expected a JSON array");
    for (const nlohmann::json& s : j) specs.push_back(spec_from_json(s));
  } else {
    specs = default_corpus_specs(seed);
    if (count > 0)
      for (CorpusSpec& s : specs) s.count = count;
  }
  fs::path graphs = fs::path(out_dir) / "graphs";
  std::error_code ec;
  fs::create_directories(graphs, ec);
  if (ec) throw IoError("cannot create " + graphs.string());
  nlohmann::json inst_meta = nlohmann::json::array();
  int total = 0;
  for (const CorpusSpec& s : specs) {
    for (const GeneratedGraph& g : corpus_generate(s)) {
      write_dimacs_clq_file(g.graph, (graphs / (g.instance_id + ".clq")).string());
      inst_meta.push_back({{"instance_id", g.instance_id},
                           {"family", family_name(g.family)},
                           {"meta", g.meta}});
      ++total;
    }
  }
  nlohmann::json spec_json = nlohmann::json::array();
  for (const CorpusSpec& s : specs) spec_json.push_back(spec_to_json(s));
  write_json(fs::path(out_dir) / "corpus_manifest.json",
             {{"tool_version", kToolVersion},
              {"format_version", 1},
              {"seed", seed},
              {"specs", spec_json},
              {"instances", inst_meta}});
  std::cout << "generated " << total << " graphs under " << graphs.string() << "\n";
  return kOk;
}

// --- features ----------------------------------------------------------------

int cmd_features(const std::vector<std::string>& inputs, const std::string& out) {
  int missing = 0;
  std::vector<fs::path> files = expand_graph_inputs(inputs, &missing);
  if (files.empty()) throw NoInputs("features: no graph files found");
  std::vector<FeatureRow> rows;
  int skipped = missing;
  for (const fs::path& f : files) {
    try {
      Graph g = parse_dimacs_clq_file(f.string());
      rows.push_back({f.stem().string(), extract_global(g).as_vector()});
    } catch (const Error& e) {
      std::cerr << "warning: skipping " << f.string() << ": " << e.what() << "\n";
      ++skipped;
    }
  }
  if (rows.empty()) throw NoInputs("features: every input failed to parse");
  write_text(out, feature_table_csv(rows));
  write_manifest(out, {{"command", "features"},
                       {"inputs", files.size()},
                       {"rows", rows.size()},
                       {"skipped", skipped}});
  std::cout << "wrote " << rows.size() << " feature rows to " << out << "\n";
  return skipped > 0 ? kPartial : kOk;
}

// --- solve --------------------------------------------------------------------

int cmd_solve(const std::vector<std::string>& inputs, const std::string& out, double time_limit,
              long long node_limit, int jobs) {
  int missing = 0;
  std::vector<fs::path> files = expand_graph_inputs(inputs, &missing);
  if (files.empty()) throw NoInputs("solve: no graph files found");
  Budget budget{time_limit, node_limit > 0 ? std::optional<long long>(node_limit) : std::nullopt};

  std::vector<OutcomeRow> existing;
  if (fs::exists(out)) existing = outcome_table_from_csv(read_text(out));
  std::vector<std::string> done_list = completed_instances(existing);
  std::map<std::string, bool> done;
  for (const std::string& id : done_list) done[id] = true;

  struct Pending {
    std::string id;
    Graph graph;
  };
  std::vector<Pending> pending;
  int skipped = missing;
  for (const fs::path& f : files) {
    std::string id = f.stem().string();
    if (done.count(id)) continue;
    try {
      pending.push_back({id, parse_dimacs_clq_file(f.string())});
    } catch (const Error& e) {
      std::cerr << "warning: skipping " << f.string() << ": " << e.what() << "\n";
      ++skipped;
    }
  }

  std::vector<std::vector<OutcomeRow>> fresh(pending.size());
  set_jobs(jobs);
#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < pending.size(); ++i)
    fresh[i] = outcome_rows(pending[i].id, run_portfolio(pending[i].graph, budget));

  std::vector<OutcomeRow> all = existing;
  for (const std::vector<OutcomeRow>& rows : fresh) all.insert(all.end(), rows.begin(), rows.end());
  std::sort(all.begin(), all.end(), [](const OutcomeRow& a, const OutcomeRow& b) {
    return a.instance_id != b.instance_id ? a.instance_id < b.instance_id : a.solver < b.solver;
  });
  write_text(out, outcome_table_csv(all));
  nlohmann::json budget_json = {{"time_limit_s", time_limit}};
  if (node_limit > 0) budget_json["node_limit"] = node_limit;
  write_manifest(out, {{"command", "solve"},
                       {"budget", budget_json},
                       {"instances", completed_instances(all).size()},
                       {"resumed", done_list.size()},
                       {"solved_now", pending.size()},
                       {"skipped", skipped}});
  std::cout << "solved " << pending.size() << " instances (" << done_list.size()
            << " already present) -> " << out << "\n";
  return skipped > 0 ? kPartial : kOk;
}

// --- label ---------------------------------------------------------------------

int cmd_label(const std::string& features_csv, const std::string& outcomes_csv,
              const std::string& out, double tie_epsilon, const std::string& graph_dir) {
  std::vector<FeatureRow> feats = feature_table_from_csv(read_text(features_csv));
  std::vector<OutcomeRow> outs = outcome_table_from_csv(read_text(outcomes_csv));
  BuildStats stats;
  std::vector<LabeledInstance> labeled = build_labeled(feats, outs, tie_epsilon, graph_dir, &stats);
  if (labeled.empty()) throw EmptyResult("label: no labeled instances survive the filters");
  save_labeled_csv(labeled, out);
  write_manifest(out, {{"command", "label"},
                       {"tie_epsilon_s", tie_epsilon},
                       {"graph_dir", graph_dir},
                       {"labeled", stats.labeled},
                       {"dropped_unsolved", stats.dropped_unsolved},
                       {"dropped_trivial", stats.dropped_trivial},
                       {"dropped_incomplete", stats.dropped_incomplete}});
  std::cout << "labeled " << stats.labeled << " instances (dropped: " << stats.dropped_unsolved
            << " unsolved, " << stats.dropped_trivial << " trivial, " << stats.dropped_incomplete
            << " incomplete) -> " << out << "\n";
  return kOk;
}

// --- build ----------------------------------------------------------------------

DatasetVariant parse_variant(const std::string& v) {
  if (v == "m1") return DatasetVariant::Method1;
  if (v == "m2") return DatasetVariant::Method2;
  if (v == "m3") return DatasetVariant::Method3;
  throw InvalidSpec("unknown variant '" + v + "' (expected m1, m2 or m3)");
}

DatasetVariant manifest_variant(const DatasetManifest& m) {
  if (m.variant == "Method1") return DatasetVariant::Method1;
  if (m.variant == "Method2") return DatasetVariant::Method2;
  if (m.variant == "Method3") return DatasetVariant::Method3;
  throw VariantMismatch("dataset variant '" + m.variant + "' cannot be trained on; run build");
}

int cmd_build(const std::string& labeled_csv, const std::string& out_dir,
              const std::string& variant_arg, double ratio, uint64_t seed,
              const std::string& graph_dir, double tie_epsilon, double budget_s) {
  DatasetVariant variant = parse_variant(variant_arg);
  std::vector<LabeledInstance> raw = load_labeled_csv(labeled_csv, graph_dir);
  std::vector<LabeledInstance> rows;
  switch (variant) {
    case DatasetVariant::Method1: rows = apply_method1(raw); break;
    case DatasetVariant::Method2: rows = apply_method2(raw); break;
    case DatasetVariant::Method3: rows = apply_method3(raw).instances; break;
  }
  SplitData split = train_test_split(rows, ratio, seed);
  Dataset ds;
  ds.manifest.variant = variant_name(variant);
  ds.manifest.seed = seed;
  ds.manifest.ratio = ratio;
  ds.manifest.budget_s = budget_s;
  ds.manifest.tie_epsilon_s = tie_epsilon;
  ds.manifest.graph_dir = graph_dir;
  ds.train = split.train;
  ds.test = split.test;
  save_dataset(ds, out_dir);
  if (variant == DatasetVariant::Method3) {
    // one binary-target file per solver, covering both splits
    for (int s = 0; s < kNumSolvers; ++s) {
      std::string csv = "instance_id,split,target\n";
      for (const auto& [rows_ptr, tag] :
           {std::pair{&ds.train, "train"}, std::pair{&ds.test, "test"}}) {
        for (const LabeledInstance& inst : *rows_ptr) {
          csv += inst.instance_id;
          csv += ',';
          csv += tag;
          csv += ',';
          csv += winner_targets(inst)[s] ? '1' : '0';
          csv += '\n';
        }
      }
      write_text(fs::path(out_dir) / ("m3_" + std::string(solver_name(kAllSolvers[s])) + ".csv"),
                 csv);
    }
  }
  std::cout << "built " << variant_name(variant) << " dataset: " << ds.train.size() << " train / "
            << ds.test.size() << " test -> " << out_dir << "\n";
  return kOk;
}

// --- train ----------------------------------------------------------------------

struct GatFlags {
  int epochs = 50;
  int hidden = 32;
  int heads = 4;
  int batch = 16;
  int patience = 10;
  double dropout = 0.5;
  double lr = 1e-3;
  double weight_decay = 1e-4;
  double val_fraction = 0.1;
  std::string ablation = "full";
};

Ablation parse_ablation(const std::string& a) {
  if (a == "full") return Ablation::Full;
  if (a == "mlp") return Ablation::MlpOnly;
  if (a == "gcn") return Ablation::GcnOnly;
  if (a == "gat") return Ablation::GatOnly;
  throw InvalidSpec("unknown ablation '" + a + "' (expected full, mlp, gcn or gat)");
}

int cmd_train(const std::string& data_dir, const std::string& model_arg, const std::string& out,
              uint64_t seed, bool grid, int jobs, const GatFlags& gf, const std::string& log_path) {
  set_jobs(jobs);
  Dataset ds = load_dataset(data_dir);
  DatasetVariant variant = manifest_variant(ds.manifest);
  if (ds.train.empty()) throw EmptyData("train: dataset has no training rows");

  if (model_arg == "gat") {
    TrainConfig cfg;
    cfg.seed = seed;
    cfg.max_epochs = gf.epochs;
    cfg.hidden = gf.hidden;
    cfg.heads = gf.heads;
    cfg.batch_size = gf.batch;
    cfg.patience = gf.patience;
    cfg.dropout = gf.dropout;
    cfg.lr = gf.lr;
    cfg.weight_decay = gf.weight_decay;
    cfg.val_fraction = gf.val_fraction;
    cfg.loss = variant == DatasetVariant::Method3 ? LossMode::SigmoidBCE : LossMode::SoftmaxCE;
    cfg = apply_ablation(cfg, parse_ablation(gf.ablation));
    std::vector<GatInstance> data = gat_instances(ds.train, variant, graph_ref_loader());
    TrainedModel m = train_gatmlp(data, cfg);
    write_json(out, model_to_json(m));
    std::string log_out = log_path.empty() ? out + ".log.csv" : log_path;
    write_text(log_out, train_log_csv(m.log));
    std::cout << "trained gat (" << ablation_name(parse_ablation(gf.ablation)) << ") for "
              << m.log.size() << " epochs";
    if (m.best_epoch > 0) std::cout << ", best epoch " << m.best_epoch;
    std::cout << " -> " << out << "\n";
    return kOk;
  }

  std::optional<ModelFamily> family = family_from_tag(model_arg);
  if (!family) throw InvalidSpec("unknown model '" + model_arg + "'");
  DenseMatrix X = feature_matrix(ds.train);
  if (variant == DatasetVariant::Method3) {
    Method3Data md = apply_method3(ds.train);
    HyperParams hp;
    hp.seed = seed;
    Method3Model m = fit_method3(X, md.targets, *family, hp);
    write_json(out, m.to_json());
    std::cout << "trained " << model_arg << " (4 binary heads) -> " << out << "\n";
    return kOk;
  }
  std::vector<int> y = label_vector(ds.train);
  HyperParams hp;
  hp.seed = seed;
  if (grid) {
    GridSearchResult gs = cross_validate_grid(X, y, *family, default_grid(*family, seed), 5, seed);
    hp = gs.best;
    std::cout << "grid search over " << gs.scores.size() << " configs\n";
  }
  Classifier clf(*family, hp);
  clf.fit(X, y, kNumSolvers);
  write_json(out, clf.to_json());
  std::cout << "trained " << model_arg << " on " << ds.train.size() << " rows -> " << out << "\n";
  return kOk;
}

// --- evaluate / predict / report --------------------------------------------------

nlohmann::json metric_report_json(const MetricReport& r) {
  nlohmann::json per_class = nlohmann::json::array();
  for (size_t c = 0; c < r.per_class.size(); ++c)
    per_class.push_back({{"precision", r.per_class[c].precision},
                         {"recall", r.per_class[c].recall},
                         {"f1", r.per_class[c].f1},
                         {"support", r.support[c]}});
  return {{"accuracy", r.accuracy},
          {"macro_f1", r.macro_f1},
          {"weighted_f1", r.weighted_f1},
          {"total", r.total},
          {"per_class", per_class}};
}

enum class ModelKind { Classical, Method3Bundle, Gat };

ModelKind sniff_model(const nlohmann::json& j) {
  if (j.contains("config")) return ModelKind::Gat;
  if (j.contains("models")) return ModelKind::Method3Bundle;
  if (j.contains("family")) return ModelKind::Classical;
  throw SchemaMismatch("model file: unrecognized layout");
}

int cmd_evaluate(const std::string& data_dir, const std::string& model_path,
                 const std::string& out, const std::string& json_out, std::string name) {
  Dataset ds = load_dataset(data_dir);
  DatasetVariant variant = manifest_variant(ds.manifest);
  if (ds.test.empty()) throw EmptyData("evaluate: dataset has no test rows");
  nlohmann::json mj = read_json(model_path);
  if (name.empty()) name = fs::path(model_path).stem().string();

  VariantEval ev;
  switch (sniff_model(mj)) {
    case ModelKind::Classical:
      ev = evaluate_variant(Classifier::from_json(mj), ds.test, variant);
      break;
    case ModelKind::Method3Bundle:
      ev = evaluate_variant(Method3Model::from_json(mj), ds.test, variant);
      break;
    case ModelKind::Gat:
      ev = evaluate_variant(model_from_json(mj), ds.test, variant, graph_ref_loader());
      break;
  }
  std::vector<ReportLine> lines = {report_line(name, ds.manifest.variant, ev)};
  write_text(out, report_table_csv(lines));
  if (!json_out.empty()) {
    nlohmann::json detail = {{"model", name},
                             {"variant", ds.manifest.variant},
                             {"overall", metric_report_json(ev.overall)}};
    if (!ev.per_label.empty()) {
      nlohmann::json pl = nlohmann::json::array();
      for (int s = 0; s < kNumSolvers; ++s)
        pl.push_back({{"solver", solver_name(kAllSolvers[s])},
                      {"report", metric_report_json(ev.per_label[s])}});
      detail["per_label"] = pl;
    }
    write_json(json_out, detail);
  }
  std::cout << name << " on " << ds.manifest.variant << ": accuracy "
            << csvio::format_double(ev.overall.accuracy) << ", macro F1 "
            << csvio::format_double(ev.overall.macro_f1) << ", weighted F1 "
            << csvio::format_double(ev.overall.weighted_f1) << "\n";
  return kOk;
}

int cmd_predict(const std::string& model_path, const std::string& graph_path) {
  nlohmann::json mj = read_json(model_path);
  Graph g = parse_dimacs_clq_file(graph_path);
  std::array<double, 12> x = extract_global(g).as_vector();
  std::vector<std::string> names;
  switch (sniff_model(mj)) {
    case ModelKind::Classical: {
      Classifier clf = Classifier::from_json(mj);
      names.push_back(solver_name(kAllSolvers[clf.predict(x.data())]));
      break;
    }
    case ModelKind::Method3Bundle: {
      Method3Model m = Method3Model::from_json(mj);
      for (SolverId s : m.predict_set(x.data())) names.push_back(solver_name(s));
      break;
    }
    case ModelKind::Gat: {
      TrainedModel m = model_from_json(mj);
      if (m.cfg.loss == LossMode::SigmoidBCE) {
        for (SolverId s : predict_set(m, g, x)) names.push_back(solver_name(s));
      } else {
        names.push_back(solver_name(kAllSolvers[predict_class(m, g, x)]));
      }
      break;
    }
  }
  for (size_t i = 0; i < names.size(); ++i) std::cout << (i ? " " : "") << names[i];
  std::cout << "\n";
  return kOk;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out,
               const std::string& json_out) {
  if (inputs.empty()) throw NoInputs("report: no input reports");
  std::vector<ReportLine> merged;
  for (const std::string& in : inputs) {
    std::vector<ReportLine> lines = report_table_from_csv(read_text(in));
    merged.insert(merged.end(), lines.begin(), lines.end());
  }
  write_text(out, report_table_csv(merged));
  if (!json_out.empty()) write_json(json_out, report_plot_json(merged));
  std::cout << "merged " << merged.size() << " report lines -> " << out << "\n";
  return kOk;
}

int cmd_gradcheck(uint64_t seed, int seeds, const std::string& loss, const std::string& mode,
                  bool stat_off) {
  TrainConfig cfg;
  cfg.loss = loss == "bce" ? LossMode::SigmoidBCE : LossMode::SoftmaxCE;
  if (mode == "mean")
    cfg.struct_mode = StructureMode::MeanAggregation;
  else if (mode == "off")
    cfg.struct_mode = StructureMode::Off;
  cfg.stat_on = !stat_off;
  double worst = 0.0;
  for (int i = 0; i < seeds; ++i) {
    GradCheckResult r = gradient_check(seed + static_cast<uint64_t>(i), cfg);
    worst = std::max(worst, r.max_rel_err);
    std::cout << "seed " << seed + static_cast<uint64_t>(i) << ": max rel err "
              << csvio::format_double(r.max_rel_err) << "\n";
  }
  std::cout << "worst: " << csvio::format_double(worst) << (worst < 1e-4 ? " (ok)" : " (FAIL)")
            << "\n";
  return worst < 1e-4 ? kOk : kPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"instance-aware algorithm selection for the maximum clique problem"};
  app.require_subcommand(1);
  app.fallthrough();  // --seed/--jobs may appear after the subcommand name
  app.set_version_flag("--version", kToolVersion);

  uint64_t seed = 0;
  int jobs = 0;
  app.add_option("--seed", seed, "global random seed")->capture_default_str();
  app.add_option("--jobs", jobs, "worker thread bound (0 = library default)");

  // gen-corpus
  auto* gen = app.add_subcommand("gen-corpus", "generate a synthetic graph corpus");
  std::string gen_out = "corpus";
  int gen_count = 0;
  std::string gen_spec;
  gen->add_option("--out", gen_out, "output directory")->capture_default_str();
  gen->add_option("--count", gen_count, "instances per family (overrides defaults)");
  gen->add_option("--spec", gen_spec, "JSON file with an array of generator specs");

  // features
  auto* feat = app.add_subcommand("features", "extract structural features from graphs");
  std::vector<std::string> feat_in;
  std::string feat_out = "features.csv";
  feat->add_option("inputs", feat_in, "graph files or directories")->required();
  feat->add_option("--out", feat_out, "output CSV")->capture_default_str();

  // solve
  auto* solve = app.add_subcommand("solve", "run the four-solver portfolio per graph");
  std::vector<std::string> solve_in;
  std::string solve_out = "outcomes.csv";
  double time_limit = 10.0;
  long long node_limit = 0;
  solve->add_option("inputs", solve_in, "graph files or directories")->required();
  solve->add_option("--out", solve_out, "output CSV (resumable)")->capture_default_str();
  solve->add_option("--time-limit", time_limit, "per-run budget in seconds")->capture_default_str();
  solve->add_option("--node-limit", node_limit, "optional per-run node budget");

  // label
  auto* label = app.add_subcommand("label", "join features with outcomes into labeled instances");
  std::string lab_features, lab_outcomes, lab_out = "labeled.csv", lab_graph_dir;
  double tie_epsilon = 0.05;
  label->add_option("--features", lab_features, "feature CSV")->required();
  label->add_option("--outcomes", lab_outcomes, "outcome CSV")->required();
  label->add_option("--out", lab_out, "output CSV")->capture_default_str();
  label->add_option("--tie-epsilon", tie_epsilon, "runtime tie window in seconds")
      ->capture_default_str();
  label->add_option("--graph-dir", lab_graph_dir, "directory holding <id>.clq graphs");

  // build
  auto* build = app.add_subcommand("build", "apply a dataset variant and split train/test");
  std::string b_labeled, b_out = "dataset", b_variant = "m2", b_graph_dir;
  double b_ratio = 0.8, b_tie = 0.05, b_budget = 0.0;
  build->add_option("--labeled", b_labeled, "labeled CSV from the label step")->required();
  build->add_option("--out", b_out, "output dataset directory")->capture_default_str();
  build->add_option("--variant", b_variant, "m1, m2 or m3")->capture_default_str();
  build->add_option("--ratio", b_ratio, "train fraction")->capture_default_str();
  build->add_option("--graph-dir", b_graph_dir, "directory holding <id>.clq graphs");
  build->add_option("--tie-epsilon", b_tie, "tie window recorded in the manifest")
      ->capture_default_str();
  build->add_option("--budget", b_budget, "solver budget recorded in the manifest");

  // train
  auto* train = app.add_subcommand("train", "fit a selector on a built dataset");
  std::string t_data, t_model = "rf", t_out = "model.json", t_log;
  bool t_grid = false;
  GatFlags gf;
  train->add_option("--data", t_data, "dataset directory from the build step")->required();
  train->add_option("--model", t_model, "dt, rf, knn, svm or gat")->capture_default_str();
  train->add_option("--out", t_out, "model JSON path")->capture_default_str();
  train->add_flag("--grid", t_grid, "cross-validated grid search (classical models)");
  train->add_option("--log", t_log, "training-log CSV path (gat; default <out>.log.csv)");
  train->add_option("--epochs", gf.epochs, "gat: max epochs")->capture_default_str();
  train->add_option("--hidden", gf.hidden, "gat: hidden width")->capture_default_str();
  train->add_option("--heads", gf.heads, "gat: attention heads in layer 1")->capture_default_str();
  train->add_option("--batch", gf.batch, "gat: batch size")->capture_default_str();
  train->add_option("--patience", gf.patience, "gat: early-stop patience")->capture_default_str();
  train->add_option("--dropout", gf.dropout, "gat: dropout rate")->capture_default_str();
  train->add_option("--lr", gf.lr, "gat: learning rate")->capture_default_str();
  train->add_option("--weight-decay", gf.weight_decay, "gat: decoupled weight decay")
      ->capture_default_str();
  train->add_option("--val-fraction", gf.val_fraction, "gat: validation carve")
      ->capture_default_str();
  train->add_option("--ablation", gf.ablation, "gat: full, mlp, gcn or gat")
      ->capture_default_str();

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "score a trained model on the test split");
  std::string e_data, e_model, e_out = "report.csv", e_json, e_name;
  eval->add_option("--data", e_data, "dataset directory")->required();
  eval->add_option("--model", e_model, "model JSON")->required();
  eval->add_option("--out", e_out, "report CSV")->capture_default_str();
  eval->add_option("--json", e_json, "detailed JSON report path");
  eval->add_option("--name", e_name, "model name in the report (default: file stem)");

  // predict
  auto* pred = app.add_subcommand("predict", "predict the best solver(s) for one graph");
  std::string p_model, p_graph;
  pred->add_option("--model", p_model, "model JSON")->required();
  pred->add_option("graph", p_graph, "DIMACS .clq file")->required();

  // report
  auto* rep = app.add_subcommand("report", "merge evaluation reports into one table");
  std::vector<std::string> r_in;
  std::string r_out = "report.csv", r_json;
  rep->add_option("inputs", r_in, "report CSV files")->required();
  rep->add_option("--out", r_out, "merged CSV")->capture_default_str();
  rep->add_option("--json", r_json, "plot-data JSON path");

  // gradcheck
  auto* gc = app.add_subcommand("gradcheck", "finite-difference check of the GAT-MLP gradients");
  int gc_seeds = 10;
  std::string gc_loss = "ce", gc_mode = "attention";
  bool gc_stat_off = false;
  gc->add_option("--seeds", gc_seeds, "number of seeds")->capture_default_str();
  gc->add_option("--loss", gc_loss, "ce or bce")->capture_default_str();
  gc->add_option("--mode", gc_mode, "attention, mean or off")->capture_default_str();
  gc->add_flag("--stat-off", gc_stat_off, "disable the statistical encoder");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_corpus(gen_out, seed, gen_count, gen_spec);
    if (feat->parsed()) return cmd_features(feat_in, feat_out);
    if (solve->parsed()) return cmd_solve(solve_in, solve_out, time_limit, node_limit, jobs);
    if (label->parsed()) return cmd_label(lab_features, lab_outcomes, lab_out, tie_epsilon,
                                          lab_graph_dir);
    if (build->parsed())
      return cmd_build(b_labeled, b_out, b_variant, b_ratio, seed, b_graph_dir, b_tie, b_budget);
    if (train->parsed()) return cmd_train(t_data, t_model, t_out, seed, t_grid, jobs, gf, t_log);
    if (eval->parsed()) return cmd_evaluate(e_data, e_model, e_out, e_json, e_name);
    if (pred->parsed()) return cmd_predict(p_model, p_graph);
    if (rep->parsed()) return cmd_report(r_in, r_out, r_json);
    if (gc->parsed()) return cmd_gradcheck(seed ? seed : 1, gc_seeds, gc_loss, gc_mode,
                                           gc_stat_off);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFatal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFatal;
  }
  return kFatal;
}
