#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "cliquesel/classical.hpp"
#include "cliquesel/dataset.hpp"
#include "cliquesel/gatmlp.hpp"
#include "cliquesel/metrics.hpp"

namespace cliquesel {

// Orchestration glue shared by the CLI and the tests: flat feature / outcome
// tables, the join that labels instances, variant-aware evaluation, and the
// comparison report emitted at the end of a run.

// --- feature table ---------------------------------------------------------

struct FeatureRow {
  std::string instance_id;
  std::array<double, 12> values{};

  bool operator==(const FeatureRow&) const = default;
};

std::string feature_table_csv(const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> feature_table_from_csv(const std::string& text);

// --- solver outcome table ----------------------------------------------------

struct OutcomeRow {
  std::string instance_id;
  SolverId solver = SolverId::ColorBB;
  int size = 0;
  double wall_time_s = 0.0;
  SolveStatus status = SolveStatus::Exact;

  bool operator==(const OutcomeRow&) const = default;
};

std::string outcome_table_csv(const std::vector<OutcomeRow>& rows);
std::vector<OutcomeRow> outcome_table_from_csv(const std::string& text);

// One row per portfolio member, in SolverId order.
std::vector<OutcomeRow> outcome_rows(const std::string& instance_id,
                                     const std::vector<SolveOutcome>& outcomes);

// Instance ids with a complete set of solver rows; used to resume solving.
std::vector<std::string> completed_instances(const std::vector<OutcomeRow>& rows);

// --- labeling join -----------------------------------------------------------

struct BuildStats {
  int labeled = 0;
  int dropped_unsolved = 0;  // no solver finished within budget
  int dropped_trivial = 0;   // every solver finished in under a millisecond
  int dropped_incomplete = 0;  // missing solver rows or missing features
};

// Joins features with outcomes by instance id and applies the raw labeling
// rules (ties, trivial filter, unsolved drops). graph_dir seeds graph_ref.
std::vector<LabeledInstance> build_labeled(const std::vector<FeatureRow>& features,
                                           const std::vector<OutcomeRow>& outcomes,
                                           double tie_epsilon_s, const std::string& graph_dir,
                                           BuildStats* stats = nullptr);

// --- variant views -----------------------------------------------------------

// Single-winner label for Method1/Method2 rows; throws VariantMismatch if the
// instance still carries a tie.
int single_label(const LabeledInstance& inst);
std::array<int, kNumSolvers> winner_targets(const LabeledInstance& inst);

DenseMatrix feature_matrix(const std::vector<LabeledInstance>& v);
std::vector<int> label_vector(const std::vector<LabeledInstance>& v);

// --- evaluation --------------------------------------------------------------

struct VariantEval {
  MetricReport overall;
  // Method3 only: one binary report per solver, SolverId order.
  std::vector<MetricReport> per_label;
};

VariantEval eval_multiclass(const std::vector<int>& y_true, const std::vector<int>& y_pred);
VariantEval eval_binary_tasks(const std::vector<std::array<int, kNumSolvers>>& t_true,
                              const std::vector<std::array<int, kNumSolvers>>& t_pred);

using GraphLoader = std::function<Graph(const LabeledInstance&)>;
GraphLoader graph_ref_loader();  // parses inst.graph_ref as a DIMACS file

// Variant-aware evaluation; VariantMismatch when the model kind cannot serve
// the variant (classical multiclass on m3, Method3 bundle on m1/m2, GAT loss
// mode disagreeing with the variant).
VariantEval evaluate_variant(const Classifier& model, const std::vector<LabeledInstance>& test,
                             DatasetVariant variant);
VariantEval evaluate_variant(const Method3Model& model, const std::vector<LabeledInstance>& test,
                             DatasetVariant variant);
VariantEval evaluate_variant(const TrainedModel& model, const std::vector<LabeledInstance>& test,
                             DatasetVariant variant, const GraphLoader& load);

// GAT training rows for a variant (loads each graph once).
std::vector<GatInstance> gat_instances(const std::vector<LabeledInstance>& v,
                                       DatasetVariant variant, const GraphLoader& load);

// --- comparison report ---------------------------------------------------------

struct ReportLine {
  std::string model;
  std::string variant;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;

  bool operator==(const ReportLine&) const = default;
};

ReportLine report_line(const std::string& model, const std::string& variant,
                       const VariantEval& ev);
std::string report_table_csv(const std::vector<ReportLine>& lines);
std::vector<ReportLine> report_table_from_csv(const std::string& text);
nlohmann::json report_plot_json(const std::vector<ReportLine>& lines);

}  // namespace cliquesel
