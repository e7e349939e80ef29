#include "cliquesel/pipeline.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "cliquesel/csvio.hpp"
#include "cliquesel/errors.hpp"

namespace cliquesel {

// --- feature table ---------------------------------------------------------

std::string feature_table_csv(const std::vector<FeatureRow>& rows) {
  std::string out = "instance_id";
  for (const std::string& c : GlobalFeatures::column_names()) {
    out += ',';
    out += c;
  }
  out += '\n';
  for (const FeatureRow& r : rows) {
    out += r.instance_id;
    for (double v : r.values) {
      out += ',';
      out += csvio::format_double(v);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  size_t at = 0;
  while (at < text.size()) {
    size_t nl = text.find('\n', at);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(at, nl - at);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
    at = nl + 1;
  }
  return lines;
}

}  // namespace

std::vector<FeatureRow> feature_table_from_csv(const std::string& text) {
  std::vector<std::string> lines = csv_lines(text);
  if (lines.empty()) throw SchemaMismatch("feature table: missing header");
  std::vector<FeatureRow> rows;
  std::string expect = "instance_id";
  for (const std::string& c : GlobalFeatures::column_names()) expect += "," + c;
  if (lines[0] != expect) throw SchemaMismatch("feature table: unexpected header");
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> f = csvio::split_fields(lines[i]);
    if (f.size() != 13) throw SchemaMismatch("feature table: expected 13 fields");
    FeatureRow r;
    r.instance_id = f[0];
    for (int c = 0; c < 12; ++c) r.values[c] = csvio::parse_double(f[c + 1], "feature value");
    rows.push_back(std::move(r));
  }
  return rows;
}

// --- solver outcome table ----------------------------------------------------

std::string outcome_table_csv(const std::vector<OutcomeRow>& rows) {
  std::string out = "instance_id,solver,size,wall_time_s,status\n";
  for (const OutcomeRow& r : rows) {
    out += r.instance_id;
    out += ',';
    out += solver_name(r.solver);
    out += ',';
    out += csvio::format_int(r.size);
    out += ',';
    out += csvio::format_double(r.wall_time_s);
    out += ',';
    out += status_name(r.status);
    out += '\n';
  }
  return out;
}

std::vector<OutcomeRow> outcome_table_from_csv(const std::string& text) {
  std::vector<std::string> lines = csv_lines(text);
  if (lines.empty()) throw SchemaMismatch("outcome table: missing header");
  if (lines[0] != "instance_id,solver,size,wall_time_s,status")
    throw SchemaMismatch("outcome table: unexpected header");
  std::vector<OutcomeRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> f = csvio::split_fields(lines[i]);
    if (f.size() != 5) throw SchemaMismatch("outcome table: expected 5 fields");
    OutcomeRow r;
    r.instance_id = f[0];
    std::optional<SolverId> sid = solver_from_name(f[1]);
    if (!sid) throw SchemaMismatch("outcome table: unknown solver '" + f[1] + "'");
    r.solver = *sid;
    r.size = static_cast<int>(csvio::parse_int(f[2], "clique size"));
    r.wall_time_s = csvio::parse_double(f[3], "wall time");
    if (f[4] == "Exact")
      r.status = SolveStatus::Exact;
    else if (f[4] == "TimedOut")
      r.status = SolveStatus::TimedOut;
    else
      throw SchemaMismatch("outcome table: unknown status '" + f[4] + "'");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<OutcomeRow> outcome_rows(const std::string& instance_id,
                                     const std::vector<SolveOutcome>& outcomes) {
  std::vector<OutcomeRow> rows;
  for (const SolveOutcome& o : outcomes)
    rows.push_back({instance_id, o.solver, o.size, o.wall_time_s, o.status});
  return rows;
}

std::vector<std::string> completed_instances(const std::vector<OutcomeRow>& rows) {
  std::map<std::string, unsigned> seen;
  for (const OutcomeRow& r : rows) seen[r.instance_id] |= 1u << static_cast<int>(r.solver);
  std::vector<std::string> done;
  for (const auto& [id, mask] : seen)
    if (mask == (1u << kNumSolvers) - 1) done.push_back(id);
  return done;
}

// --- labeling join -----------------------------------------------------------

std::vector<LabeledInstance> build_labeled(const std::vector<FeatureRow>& features,
                                           const std::vector<OutcomeRow>& outcomes,
                                           double tie_epsilon_s, const std::string& graph_dir,
                                           BuildStats* stats) {
  std::map<std::string, std::vector<SolveOutcome>> by_id;
  for (const OutcomeRow& r : outcomes)
    by_id[r.instance_id].push_back({r.solver, {}, r.size, r.wall_time_s, r.status});
  BuildStats st;
  std::vector<LabeledInstance> out;
  for (const FeatureRow& fr : features) {
    auto it = by_id.find(fr.instance_id);
    if (it == by_id.end() || it->second.size() != kNumSolvers) {
      ++st.dropped_incomplete;
      continue;
    }
    std::vector<SolveOutcome>& runs = it->second;
    std::sort(runs.begin(), runs.end(),
              [](const SolveOutcome& a, const SolveOutcome& b) { return a.solver < b.solver; });
    bool distinct = true;
    for (size_t i = 1; i < runs.size(); ++i) distinct = distinct && runs[i - 1].solver != runs[i].solver;
    if (!distinct) {
      ++st.dropped_incomplete;
      continue;
    }
    if (is_trivial_case(runs)) {
      ++st.dropped_trivial;
      continue;
    }
    LabeledInstance inst;
    inst.instance_id = fr.instance_id;
    inst.features = fr.values;
    inst.graph_ref = graph_dir.empty() ? fr.instance_id + ".clq"
                                       : graph_dir + "/" + fr.instance_id + ".clq";
    try {
      inst.winners = label_instance(runs, tie_epsilon_s);
    } catch (const AllUnsolved&) {
      ++st.dropped_unsolved;
      continue;
    }
    ++st.labeled;
    out.push_back(std::move(inst));
  }
  if (stats) *stats = st;
  return out;
}

// --- variant views -----------------------------------------------------------

int single_label(const LabeledInstance& inst) {
  if (inst.winners.size() != 1)
    throw VariantMismatch("instance " + inst.instance_id + " carries " +
                          std::to_string(inst.winners.size()) + " winners; expected one");
  return static_cast<int>(inst.winners[0]);
}

std::array<int, kNumSolvers> winner_targets(const LabeledInstance& inst) {
  std::array<int, kNumSolvers> t{};
  for (SolverId s : inst.winners) t[static_cast<int>(s)] = 1;
  return t;
}

DenseMatrix feature_matrix(const std::vector<LabeledInstance>& v) {
  DenseMatrix m(static_cast<int>(v.size()), 12);
  for (size_t i = 0; i < v.size(); ++i)
    std::copy(v[i].features.begin(), v[i].features.end(), m.row_ptr(static_cast<int>(i)));
  return m;
}

std::vector<int> label_vector(const std::vector<LabeledInstance>& v) {
  std::vector<int> y;
  y.reserve(v.size());
  for (const LabeledInstance& inst : v) y.push_back(single_label(inst));
  return y;
}

// --- evaluation --------------------------------------------------------------

VariantEval eval_multiclass(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  VariantEval ev;
  ev.overall = report_from_confusion(confusion(y_true, y_pred, kNumSolvers));
  return ev;
}

VariantEval eval_binary_tasks(const std::vector<std::array<int, kNumSolvers>>& t_true,
                              const std::vector<std::array<int, kNumSolvers>>& t_pred) {
  if (t_true.size() != t_pred.size()) throw LengthMismatch("binary tasks: row count differs");
  VariantEval ev;
  // Overall report treats the four positive classes as the "classes": support
  // is the positive count per task, F1 the positive-class F1, accuracy the
  // mean binary accuracy. Equal supports make weighted and macro coincide.
  ev.overall.per_class.resize(kNumSolvers);
  ev.overall.support.resize(kNumSolvers);
  double acc_sum = 0.0;
  long long n_sum = 0;
  for (int s = 0; s < kNumSolvers; ++s) {
    std::vector<int> yt, yp;
    yt.reserve(t_true.size());
    yp.reserve(t_true.size());
    for (size_t i = 0; i < t_true.size(); ++i) {
      yt.push_back(t_true[i][s]);
      yp.push_back(t_pred[i][s]);
    }
    ConfusionMatrix cm = confusion(yt, yp, 2);
    MetricReport rep = report_from_confusion(cm);
    ev.per_label.push_back(rep);
    acc_sum += rep.accuracy;
    ev.overall.per_class[s] = rep.per_class[1];
    ev.overall.support[s] = rep.support[1];
    n_sum += rep.support[1];
  }
  ev.overall.total = n_sum;
  ev.overall.accuracy = acc_sum / kNumSolvers;
  double macro = 0.0, weighted = 0.0;
  for (int s = 0; s < kNumSolvers; ++s) {
    macro += ev.overall.per_class[s].f1;
    if (n_sum > 0)
      weighted += ev.overall.per_class[s].f1 * static_cast<double>(ev.overall.support[s]) /
                  static_cast<double>(n_sum);
  }
  ev.overall.macro_f1 = macro / kNumSolvers;
  ev.overall.weighted_f1 = weighted;
  return ev;
}

GraphLoader graph_ref_loader() {
  return [](const LabeledInstance& inst) { return parse_dimacs_clq_file(inst.graph_ref); };
}

VariantEval evaluate_variant(const Classifier& model, const std::vector<LabeledInstance>& test,
                             DatasetVariant variant) {
  if (variant == DatasetVariant::Method3)
    throw VariantMismatch("multiclass classifier cannot evaluate Method3 data");
  std::vector<int> yt = label_vector(test), yp;
  yp.reserve(test.size());
  for (const LabeledInstance& inst : test) yp.push_back(model.predict(inst.features.data()));
  return eval_multiclass(yt, yp);
}

VariantEval evaluate_variant(const Method3Model& model, const std::vector<LabeledInstance>& test,
                             DatasetVariant variant) {
  if (variant != DatasetVariant::Method3)
    throw VariantMismatch("Method3 bundle requires Method3 data");
  std::vector<std::array<int, kNumSolvers>> tt, tp;
  for (const LabeledInstance& inst : test) {
    tt.push_back(winner_targets(inst));
    std::array<int, kNumSolvers> pred{};
    for (int s = 0; s < kNumSolvers; ++s) pred[s] = model.models[s].predict(inst.features.data());
    tp.push_back(pred);
  }
  return eval_binary_tasks(tt, tp);
}

VariantEval evaluate_variant(const TrainedModel& model, const std::vector<LabeledInstance>& test,
                             DatasetVariant variant, const GraphLoader& load) {
  if (variant == DatasetVariant::Method3) {
    if (model.cfg.loss != LossMode::SigmoidBCE)
      throw VariantMismatch("Method3 evaluation needs a sigmoid-loss model");
    std::vector<std::array<int, kNumSolvers>> tt, tp;
    for (const LabeledInstance& inst : test) {
      tt.push_back(winner_targets(inst));
      std::vector<double> l = model_logits(model, load(inst), inst.features);
      std::array<int, kNumSolvers> pred{};
      for (int s = 0; s < kNumSolvers; ++s) pred[s] = l[s] > 0.0 ? 1 : 0;
      tp.push_back(pred);
    }
    return eval_binary_tasks(tt, tp);
  }
  if (model.cfg.loss != LossMode::SoftmaxCE)
    throw VariantMismatch("multiclass evaluation needs a softmax-loss model");
  std::vector<int> yt = label_vector(test), yp;
  for (const LabeledInstance& inst : test)
    yp.push_back(predict_class(model, load(inst), inst.features));
  return eval_multiclass(yt, yp);
}

std::vector<GatInstance> gat_instances(const std::vector<LabeledInstance>& v,
                                       DatasetVariant variant, const GraphLoader& load) {
  std::vector<GatInstance> out;
  out.reserve(v.size());
  for (const LabeledInstance& inst : v) {
    GatInstance gi;
    gi.id = inst.instance_id;
    gi.graph = load(inst);
    gi.gfeat = inst.features;
    gi.targets = winner_targets(inst);
    gi.label = variant == DatasetVariant::Method3 ? -1 : single_label(inst);
    out.push_back(std::move(gi));
  }
  return out;
}

// --- comparison report ---------------------------------------------------------

ReportLine report_line(const std::string& model, const std::string& variant,
                       const VariantEval& ev) {
  return {model, variant, ev.overall.accuracy, ev.overall.macro_f1, ev.overall.weighted_f1};
}

std::string report_table_csv(const std::vector<ReportLine>& lines) {
  std::string out = "model,variant,accuracy,macro_f1,weighted_f1\n";
  for (const ReportLine& l : lines) {
    out += l.model;
    out += ',';
    out += l.variant;
    out += ',';
    out += csvio::format_double(l.accuracy);
    out += ',';
    out += csvio::format_double(l.macro_f1);
    out += ',';
    out += csvio::format_double(l.weighted_f1);
    out += '\n';
  }
  return out;
}

std::vector<ReportLine> report_table_from_csv(const std::string& text) {
  std::vector<std::string> lines = csv_lines(text);
  if (lines.empty() || lines[0] != "model,variant,accuracy,macro_f1,weighted_f1")
    throw SchemaMismatch("report table: unexpected header");
  std::vector<ReportLine> out;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> f = csvio::split_fields(lines[i]);
    if (f.size() != 5) throw SchemaMismatch("report table: expected 5 fields");
    out.push_back({f[0], f[1], csvio::parse_double(f[2], "accuracy"),
                   csvio::parse_double(f[3], "macro F1"), csvio::parse_double(f[4], "weighted F1")});
  }
  return out;
}

nlohmann::json report_plot_json(const std::vector<ReportLine>& lines) {
  nlohmann::json series = nlohmann::json::array();
  for (const ReportLine& l : lines)
    series.push_back({{"model", l.model},
                      {"variant", l.variant},
                      {"accuracy", l.accuracy},
                      {"macro_f1", l.macro_f1},
                      {"weighted_f1", l.weighted_f1}});
  return {{"format_version", 1}, {"metrics", {"accuracy", "macro_f1", "weighted_f1"}},
          {"series", series}};
}

}  // namespace cliquesel
