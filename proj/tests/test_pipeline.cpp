#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "cliquesel/pipeline.hpp"
#include "cliquesel/rng.hpp"
#include "support/builders.hpp"

using namespace cliquesel;

namespace {

FeatureRow frow(const std::string& id, double head) {
  FeatureRow r;
  r.instance_id = id;
  for (int c = 0; c < 12; ++c) r.values[c] = head + 0.125 * c;
  return r;
}

OutcomeRow orow(const std::string& id, SolverId s, int size, double t,
                SolveStatus st = SolveStatus::Exact) {
  return {id, s, size, t, st};
}

// Four rows for one instance, same clique size, given wall times.
std::vector<OutcomeRow> four(const std::string& id, int size, std::array<double, 4> t) {
  std::vector<OutcomeRow> rows;
  for (int s = 0; s < kNumSolvers; ++s) rows.push_back(orow(id, kAllSolvers[s], size, t[s]));
  return rows;
}

LabeledInstance linst(const std::string& id, double head, std::vector<SolverId> winners) {
  LabeledInstance inst;
  inst.instance_id = id;
  inst.features = frow(id, head).values;
  inst.winners = std::move(winners);
  return inst;
}

std::array<std::vector<int>, kNumSolvers> target_columns(const std::vector<LabeledInstance>& v) {
  std::array<std::vector<int>, kNumSolvers> cols;
  for (const LabeledInstance& inst : v) {
    std::array<int, kNumSolvers> t = winner_targets(inst);
    for (int s = 0; s < kNumSolvers; ++s) cols[s].push_back(t[s]);
  }
  return cols;
}

}  // namespace

TEST_CASE("feature table round trips and rejects foreign headers") {
  std::vector<FeatureRow> rows = {frow("g0001", -2.5), frow("g0002", 0.0)};
  rows[1].values[5] = -0.33333333333333331;  // assortativity-like repeating fraction
  std::string csv = feature_table_csv(rows);
  CHECK(feature_table_from_csv(csv) == rows);
  CHECK(csv.substr(0, 12) == "instance_id,");

  CHECK_THROWS_AS(feature_table_from_csv(""), SchemaMismatch);
  CHECK_THROWS_AS(feature_table_from_csv("id,n_nodes\n"), SchemaMismatch);
  std::string truncated = csv.substr(0, csv.find('\n') + 1) + "g0003,1,2\n";
  CHECK_THROWS_AS(feature_table_from_csv(truncated), SchemaMismatch);

  // CRLF input parses to the same rows.
  std::string crlf;
  for (char c : csv) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  CHECK(feature_table_from_csv(crlf) == rows);
}

TEST_CASE("outcome table round trips and validates enums") {
  std::vector<OutcomeRow> rows = four("a", 7, {0.5, 1.25, 0.75, 2.0});
  rows.push_back(orow("b", SolverId::ColorBB, 3, 0.001, SolveStatus::TimedOut));
  std::string csv = outcome_table_csv(rows);
  CHECK(outcome_table_from_csv(csv) == rows);

  CHECK_THROWS_AS(outcome_table_from_csv(""), SchemaMismatch);
  CHECK_THROWS_AS(outcome_table_from_csv("instance_id,solver,size\n"), SchemaMismatch);
  std::string hdr = "instance_id,solver,size,wall_time_s,status\n";
  CHECK_THROWS_AS(outcome_table_from_csv(hdr + "a,NoSuchBB,3,0.5,Exact\n"), SchemaMismatch);
  CHECK_THROWS_AS(outcome_table_from_csv(hdr + "a,ColorBB,3,0.5,Done\n"), SchemaMismatch);
  CHECK_THROWS_AS(outcome_table_from_csv(hdr + "a,ColorBB,3,0.5\n"), SchemaMismatch);
}

TEST_CASE("outcome_rows preserves the portfolio order") {
  std::vector<SolveOutcome> outs;
  for (int s = kNumSolvers - 1; s >= 0; --s)
    outs.push_back({kAllSolvers[s], {0, 1}, 2, 0.1 * s, SolveStatus::Exact});
  std::vector<OutcomeRow> rows = outcome_rows("x", outs);
  REQUIRE(rows.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(rows[i].instance_id == "x");
    CHECK(rows[i].solver == outs[i].solver);  // same order as given, not re-sorted
  }
}

TEST_CASE("completed_instances requires all four solver rows") {
  std::vector<OutcomeRow> rows = four("full", 5, {1, 1, 1, 1});
  rows.push_back(orow("partial", SolverId::ColorBB, 4, 0.2));
  rows.push_back(orow("partial", SolverId::DegenBB, 4, 0.2));
  // duplicates of one solver never complete a set
  rows.push_back(orow("dup", SolverId::DynOrderBB, 4, 0.2));
  rows.push_back(orow("dup", SolverId::DynOrderBB, 4, 0.3));
  CHECK(completed_instances(rows) == std::vector<std::string>{"full"});
  CHECK(completed_instances({}).empty());
}

TEST_CASE("build_labeled joins, drops, and counts") {
  std::vector<FeatureRow> feats = {frow("win", 1.0), frow("nofeat_pair", 2.0),
                                   frow("short", 3.0), frow("dup", 4.0),
                                   frow("quick", 5.0), frow("stuck", 6.0)};
  std::vector<OutcomeRow> outs = four("win", 9, {0.004, 0.01, 0.02, 0.05});
  // "nofeat_pair" has no outcomes at all; "short" is missing one solver.
  outs.push_back(orow("short", SolverId::ColorBB, 4, 0.01));
  outs.push_back(orow("short", SolverId::DegenBB, 4, 0.01));
  outs.push_back(orow("short", SolverId::DynOrderBB, 4, 0.01));
  // "dup" has four rows but repeats a solver.
  auto dup = four("dup", 4, {0.01, 0.01, 0.01, 0.01});
  dup[1].solver = SolverId::ColorBB;
  outs.insert(outs.end(), dup.begin(), dup.end());
  // "quick" finishes everywhere under a millisecond.
  auto quick = four("quick", 3, {1e-4, 2e-4, 3e-4, 9e-4});
  outs.insert(outs.end(), quick.begin(), quick.end());
  // "stuck" never finishes.
  auto stuck = four("stuck", 2, {10, 10, 10, 10});
  for (OutcomeRow& r : stuck) r.status = SolveStatus::TimedOut;
  outs.insert(outs.end(), stuck.begin(), stuck.end());
  // an outcome with no matching features contributes nothing
  outs.push_back(orow("orphan", SolverId::ColorBB, 4, 0.02));

  BuildStats st;
  std::vector<LabeledInstance> got = build_labeled(feats, outs, 0.0, "graphs", &st);
  REQUIRE(got.size() == 1);
  CHECK(got[0].instance_id == "win");
  CHECK(got[0].features == feats[0].values);
  CHECK(got[0].graph_ref == "graphs/win.clq");
  CHECK(got[0].winners == std::vector<SolverId>{SolverId::ColorBB});
  CHECK(st.labeled == 1);
  CHECK(st.dropped_incomplete == 3);  // nofeat_pair, short, dup
  CHECK(st.dropped_trivial == 1);
  CHECK(st.dropped_unsolved == 1);

  std::vector<LabeledInstance> bare =
      build_labeled({feats[0]}, four("win", 9, {0.004, 0.01, 0.02, 0.05}), 0.0, "", nullptr);
  REQUIRE(bare.size() == 1);
  CHECK(bare[0].graph_ref == "win.clq");
}

TEST_CASE("tie epsilon widens the winner set during the join") {
  std::vector<FeatureRow> feats = {frow("t", 0.0)};
  std::vector<OutcomeRow> outs = four("t", 6, {1.0, 1.04, 2.0, 3.0});
  std::vector<LabeledInstance> tight = build_labeled(feats, outs, 0.0, "", nullptr);
  std::vector<LabeledInstance> loose = build_labeled(feats, outs, 0.05, "", nullptr);
  CHECK(tight[0].winners == std::vector<SolverId>{SolverId::ColorBB});
  CHECK(loose[0].winners == std::vector<SolverId>{SolverId::ColorBB, SolverId::DegenBB});
}

TEST_CASE("single_label and winner_targets expose the winner set") {
  LabeledInstance one = linst("a", 0.0, {SolverId::DynOrderBB});
  CHECK(single_label(one) == 2);
  CHECK(winner_targets(one) == std::array<int, 4>{0, 0, 1, 0});

  LabeledInstance tie = linst("b", 0.0, {SolverId::ColorBB, SolverId::PartitionBoundBB});
  CHECK_THROWS_AS(single_label(tie), VariantMismatch);
  CHECK(winner_targets(tie) == std::array<int, 4>{1, 0, 0, 1});

  std::vector<LabeledInstance> v = {one, linst("c", 1.0, {SolverId::ColorBB})};
  CHECK(label_vector(v) == std::vector<int>{2, 0});
  DenseMatrix m = feature_matrix(v);
  CHECK(m.rows == 2);
  CHECK(m.cols == 12);
  CHECK(m.at(1, 3) == v[1].features[3]);
}

TEST_CASE("eval_multiclass mirrors the metric module") {
  std::vector<int> yt = {0, 1, 2, 3, 0, 1, 2, 3};
  std::vector<int> yp = {0, 1, 2, 3, 0, 1, 3, 2};
  VariantEval ev = eval_multiclass(yt, yp);
  MetricReport want = report_from_confusion(confusion(yt, yp, kNumSolvers));
  CHECK(ev.overall.accuracy == want.accuracy);
  CHECK(ev.overall.macro_f1 == want.macro_f1);
  CHECK(ev.overall.weighted_f1 == want.weighted_f1);
  CHECK(ev.per_label.empty());
}

TEST_CASE("eval_binary_tasks averages per-solver binary reports") {
  // Eight rows; every solver column has exactly two positives.
  std::vector<std::array<int, 4>> t_true;
  for (int i = 0; i < 8; ++i) {
    std::array<int, 4> row{};
    row[i / 2] = 1;
    t_true.push_back(row);
  }
  VariantEval perfect = eval_binary_tasks(t_true, t_true);
  CHECK(perfect.overall.accuracy == 1.0);
  CHECK(perfect.overall.macro_f1 == 1.0);
  CHECK(perfect.overall.total == 8);
  REQUIRE(perfect.per_label.size() == 4);
  for (const MetricReport& r : perfect.per_label) CHECK(r.accuracy == 1.0);

  // Flip both predictions in the first column: task 0 accuracy drops to 6/8.
  std::vector<std::array<int, 4>> t_pred = t_true;
  t_pred[0][0] = 0;
  t_pred[2][0] = 1;
  VariantEval ev = eval_binary_tasks(t_true, t_pred);
  CHECK(ev.overall.accuracy == doctest::Approx((0.75 + 3.0) / 4.0).epsilon(1e-12));
  CHECK(ev.per_label[0].accuracy == doctest::Approx(0.75).epsilon(1e-12));
  // Supports stay equal across tasks, so weighted and macro F1 agree exactly.
  CHECK(ev.overall.weighted_f1 == ev.overall.macro_f1);

  CHECK_THROWS_AS(eval_binary_tasks(t_true, {}), LengthMismatch);
}

TEST_CASE("variant-aware evaluation rejects mismatched model kinds") {
  std::vector<LabeledInstance> m2 = {linst("a", -1.0, {SolverId::ColorBB}),
                                     linst("b", 1.0, {SolverId::DegenBB}),
                                     linst("c", -1.2, {SolverId::ColorBB}),
                                     linst("d", 1.2, {SolverId::DegenBB})};
  DenseMatrix X = feature_matrix(m2);
  std::vector<int> y = label_vector(m2);

  HyperParams hp;
  hp.max_depth = 3;
  Classifier clf(ModelFamily::DecisionTree, hp);
  clf.fit(X, y, kNumSolvers);
  CHECK_THROWS_AS(evaluate_variant(clf, m2, DatasetVariant::Method3), VariantMismatch);

  Method3Model m3m = fit_method3(X, target_columns(m2), ModelFamily::DecisionTree, hp);
  CHECK_THROWS_AS(evaluate_variant(m3m, m2, DatasetVariant::Method2), VariantMismatch);

  GraphLoader toy_loader = [](const LabeledInstance&) { return builders::complete(4); };
  TrainConfig cfg;
  cfg.hidden = 4;
  cfg.heads = 1;
  cfg.dropout = 0.0;
  cfg.val_fraction = 0.0;
  cfg.max_epochs = 1;
  std::vector<GatInstance> gi = gat_instances(m2, DatasetVariant::Method2, toy_loader);
  TrainedModel gm = train_gatmlp(gi, cfg);
  CHECK_THROWS_AS(evaluate_variant(gm, m2, DatasetVariant::Method3, toy_loader), VariantMismatch);
  cfg.loss = LossMode::SigmoidBCE;
  TrainedModel bm = train_gatmlp(gat_instances(m2, DatasetVariant::Method3, toy_loader), cfg);
  CHECK_THROWS_AS(evaluate_variant(bm, m2, DatasetVariant::Method2, toy_loader), VariantMismatch);
}

TEST_CASE("a separable classical model evaluates perfectly on method2 data") {
  std::vector<LabeledInstance> data;
  for (int i = 0; i < 10; ++i) {
    bool neg = i % 2 == 0;
    LabeledInstance inst =
        linst("i" + std::to_string(i), neg ? -2.0 - i : 2.0 + i,
              {neg ? SolverId::ColorBB : SolverId::PartitionBoundBB});
    data.push_back(inst);
  }
  HyperParams hp;
  hp.max_depth = 4;
  Classifier clf(ModelFamily::DecisionTree, hp);
  clf.fit(feature_matrix(data), label_vector(data), kNumSolvers);
  VariantEval ev = evaluate_variant(clf, data, DatasetVariant::Method2);
  CHECK(ev.overall.accuracy == 1.0);
  CHECK(ev.per_label.empty());

  Method3Model m3m =
      fit_method3(feature_matrix(data), target_columns(data), ModelFamily::DecisionTree, hp);
  VariantEval ev3 = evaluate_variant(m3m, data, DatasetVariant::Method3);
  CHECK(ev3.overall.accuracy == 1.0);
  CHECK(ev3.per_label.size() == 4);
}

TEST_CASE("gat_instances maps variants to labels and targets") {
  std::vector<LabeledInstance> v = {linst("a", 0.5, {SolverId::DegenBB}),
                                    linst("b", -0.5, {SolverId::ColorBB, SolverId::DegenBB})};
  GraphLoader load = [](const LabeledInstance& inst) {
    return inst.instance_id == "a" ? builders::complete(5) : builders::cycle(6);
  };
  std::vector<GatInstance> m3 = gat_instances(v, DatasetVariant::Method3, load);
  REQUIRE(m3.size() == 2);
  CHECK(m3[0].label == -1);
  CHECK(m3[0].targets == std::array<int, 4>{0, 1, 0, 0});
  CHECK(m3[1].targets == std::array<int, 4>{1, 1, 0, 0});
  CHECK(m3[0].graph == builders::complete(5));
  CHECK(m3[0].gfeat == v[0].features);

  std::vector<LabeledInstance> singles = {v[0]};
  std::vector<GatInstance> m2 = gat_instances(singles, DatasetVariant::Method2, load);
  CHECK(m2[0].label == 1);
  // multi-winner rows cannot produce a single label
  CHECK_THROWS_AS(gat_instances(v, DatasetVariant::Method2, load), VariantMismatch);
}

TEST_CASE("a gat model trained on separable toys evaluates perfectly") {
  std::vector<LabeledInstance> data;
  for (int i = 0; i < 8; ++i) {
    bool dense = i % 2 == 0;
    LabeledInstance inst = linst(dense ? "d" + std::to_string(i) : "s" + std::to_string(i),
                                 dense ? 3.0 + i : -3.0 - i,
                                 {dense ? SolverId::ColorBB : SolverId::DegenBB});
    data.push_back(inst);
  }
  GraphLoader load = [](const LabeledInstance& inst) {
    return inst.instance_id[0] == 'd' ? builders::complete(6) : builders::star(5);
  };
  TrainConfig cfg;
  cfg.hidden = 8;
  cfg.heads = 2;
  cfg.dropout = 0.0;
  cfg.val_fraction = 0.0;
  cfg.lr = 0.02;
  cfg.max_epochs = 150;
  cfg.seed = 21;
  TrainedModel gm = train_gatmlp(gat_instances(data, DatasetVariant::Method2, load), cfg);
  VariantEval ev = evaluate_variant(gm, data, DatasetVariant::Method2, load);
  CHECK(ev.overall.accuracy == 1.0);
}

TEST_CASE("report lines serialize and feed the plot payload") {
  VariantEval ev;
  ev.overall.accuracy = 0.875;
  ev.overall.macro_f1 = 0.8;
  ev.overall.weighted_f1 = 0.825;
  ReportLine line = report_line("random_forest", "m2", ev);
  CHECK(line.model == "random_forest");
  CHECK(line.accuracy == 0.875);

  std::vector<ReportLine> lines = {line,
                                   {"gat_mlp", "m1", 0.5, 0.25, 1.0 / 3.0},
                                   {"knn", "m3", 0.0, 0.0, 0.0}};
  std::string csv = report_table_csv(lines);
  CHECK(report_table_from_csv(csv) == lines);
  CHECK_THROWS_AS(report_table_from_csv("model,variant,accuracy\n"), SchemaMismatch);
  CHECK_THROWS_AS(report_table_from_csv(""), SchemaMismatch);

  nlohmann::json plot = report_plot_json(lines);
  CHECK(plot.at("format_version").get<int>() == 1);
  CHECK(plot.at("metrics").size() == 3);
  REQUIRE(plot.at("series").size() == 3);
  CHECK(plot.at("series")[1].at("model").get<std::string>() == "gat_mlp");
  CHECK(plot.at("series")[0].at("accuracy").get<double>() == 0.875);
}
