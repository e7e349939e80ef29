#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cliquesel/features.hpp"
#include "cliquesel/graph.hpp"
#include "cliquesel/rng.hpp"
#include "cliquesel/solvers.hpp"

namespace cliquesel {

// One labeled row. Features are the 12 global statistics in column order;
// winners is the non-empty, ascending set of solvers tied as best.
struct LabeledInstance {
  std::string instance_id;
  std::array<double, 12> features{};
  std::string graph_ref;  // path of the instance graph, empty if not materialized
  std::vector<SolverId> winners;

  bool operator==(const LabeledInstance&) const = default;
};

enum class DatasetVariant { Method1, Method2, Method3 };

const char* variant_name(DatasetVariant v);
DatasetVariant variant_from_name(const std::string& name);  // throws SchemaMismatch

// Winner rule: only Exact outcomes can win. Among them (their sizes all agree
// on omega), winners are those within tie_epsilon of the fastest. Throws
// AllUnsolved when no solver finished, which drops the instance.
std::vector<SolverId> label_instance(const std::vector<SolveOutcome>& outcomes,
                                     double tie_epsilon_s);

// All four solvers Exact in under a millisecond: the label would be timing
// noise, so such graphs are filtered from the corpus.
bool is_trivial_case(const std::vector<SolveOutcome>& outcomes);

// Multi-label handling. Method1 splits an instance with k winners into k
// single-winner rows; Method2 drops multi-label instances; Method3 keeps all
// rows and derives four binary target vectors, one per solver.
std::vector<LabeledInstance> apply_method1(const std::vector<LabeledInstance>& data);
std::vector<LabeledInstance> apply_method2(const std::vector<LabeledInstance>& data);

struct Method3Data {
  std::vector<LabeledInstance> instances;
  std::array<std::vector<int>, kNumSolvers> targets;  // 0/1 per row, per solver
};
Method3Data apply_method3(const std::vector<LabeledInstance>& data);

struct Split {
  std::vector<size_t> train;
  std::vector<size_t> test;
  uint64_t seed = 0;
};

// Seeded uniform permutation, then floor(ratio*n) prefix as train.
Split split_indices(size_t n, double ratio, uint64_t seed);

struct SplitData {
  std::vector<LabeledInstance> train;
  std::vector<LabeledInstance> test;
  uint64_t seed = 0;
};
SplitData train_test_split(const std::vector<LabeledInstance>& data, double ratio, uint64_t seed);

// --- corpus generation -------------------------------------------------

enum class GraphFamily { ErdosRenyi, PreferentialAttachment, PlantedClique };

const char* family_name(GraphFamily f);

struct CorpusSpec {
  GraphFamily family = GraphFamily::ErdosRenyi;
  int n_min = 20, n_max = 100;
  double p_min = 0.1, p_max = 0.5;  // edge probability (ER, planted background)
  int m_min = 2, m_max = 5;         // attachment edges per node (preferential)
  int k_min = 6, k_max = 12;        // planted clique size
  int count = 1;
  uint64_t seed = 0;
  std::string name_prefix;
  long long max_edges = 0;  // 0 = uncapped; otherwise ER probability is capped
};

struct GeneratedGraph {
  std::string instance_id;
  Graph graph;
  GraphFamily family = GraphFamily::ErdosRenyi;
  nlohmann::json meta;  // drawn parameters; planted size when applicable
};

Graph gen_erdos_renyi(int n, double p, Rng& rng);
Graph gen_barabasi_albert(int n, int m, Rng& rng);
Graph gen_planted_clique(int n, double p, int k, Rng& rng, std::vector<int>* planted = nullptr);

void validate_spec(const CorpusSpec& spec);  // throws InvalidSpec
std::vector<GeneratedGraph> corpus_generate(const CorpusSpec& spec);

// Desk-scale default: 300 graphs, one third per family, spanning
// n in [20, 2000] and density in [0.01, 0.95] across the corpus.
std::vector<CorpusSpec> default_corpus_specs(uint64_t seed);

nlohmann::json spec_to_json(const CorpusSpec& spec);
CorpusSpec spec_from_json(const nlohmann::json& j);  // throws SchemaMismatch

// --- persistence -------------------------------------------------------

struct DatasetManifest {
  std::string variant;  // "raw", "Method1", "Method2" or "Method3"
  uint64_t seed = 0;
  double ratio = 0.8;
  double budget_s = 0.0;
  double tie_epsilon_s = 0.0;
  nlohmann::json generator_specs = nlohmann::json::array();
  std::string graph_dir;  // instance graphs live at graph_dir/<id>.clq
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<LabeledInstance> train;
  std::vector<LabeledInstance> test;
};

// Directory layout: train.csv, test.csv, manifest.json. CSV schema:
// instance_id, the 12 feature columns, winners (semicolon-joined names).
void save_dataset(const Dataset& ds, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

// Single labeled-instance CSV (same schema as train.csv/test.csv).
void save_labeled_csv(const std::vector<LabeledInstance>& rows,
                      const std::filesystem::path& path);
std::vector<LabeledInstance> load_labeled_csv(const std::filesystem::path& path,
                                              const std::string& graph_dir);

std::string winners_to_string(const std::vector<SolverId>& winners);
std::vector<SolverId> winners_from_string(const std::string& s);  // throws SchemaMismatch

std::filesystem::path instance_graph_path(const DatasetManifest& m, const std::string& id);

}  // namespace cliquesel
