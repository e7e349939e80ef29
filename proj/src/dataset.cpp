#include "cliquesel/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "cliquesel/csvio.hpp"
#include "cliquesel/errors.hpp"

namespace cliquesel {

const char* variant_name(DatasetVariant v) {
  switch (v) {
    case DatasetVariant::Method1: return "Method1";
    case DatasetVariant::Method2: return "Method2";
    case DatasetVariant::Method3: return "Method3";
  }
  return "?";
}

DatasetVariant variant_from_name(const std::string& name) {
  if (name == "Method1") return DatasetVariant::Method1;
  if (name == "Method2") return DatasetVariant::Method2;
  if (name == "Method3") return DatasetVariant::Method3;
  throw SchemaMismatch("unknown dataset variant '" + name + "'");
}

std::vector<SolverId> label_instance(const std::vector<SolveOutcome>& outcomes,
                                     double tie_epsilon_s) {
  if (outcomes.size() != static_cast<size_t>(kNumSolvers))
    throw InvalidSpec("label_instance: expected one outcome per solver");
  if (tie_epsilon_s < 0.0) throw InvalidSpec("label_instance: tie epsilon must be >= 0");
  int best_size = -1;
  for (const SolveOutcome& o : outcomes)
    if (o.status == SolveStatus::Exact && o.size > best_size) best_size = o.size;
  if (best_size < 1) throw AllUnsolved("label_instance: no solver finished");
  double min_time = std::numeric_limits<double>::infinity();
  for (const SolveOutcome& o : outcomes)
    if (o.status == SolveStatus::Exact && o.size == best_size)
      min_time = std::min(min_time, o.wall_time_s);
  std::vector<SolverId> winners;
  for (const SolveOutcome& o : outcomes)
    if (o.status == SolveStatus::Exact && o.size == best_size &&
        o.wall_time_s <= min_time + tie_epsilon_s)
      winners.push_back(o.solver);
  std::sort(winners.begin(), winners.end());
  return winners;
}

bool is_trivial_case(const std::vector<SolveOutcome>& outcomes) {
  for (const SolveOutcome& o : outcomes)
    if (o.status != SolveStatus::Exact || o.wall_time_s >= 1e-3) return false;
  return !outcomes.empty();
}

std::vector<LabeledInstance> apply_method1(const std::vector<LabeledInstance>& data) {
  std::vector<LabeledInstance> out;
  for (const LabeledInstance& inst : data)
    for (SolverId w : inst.winners) {
      LabeledInstance row = inst;
      row.winners = {w};
      out.push_back(std::move(row));
    }
  return out;
}

std::vector<LabeledInstance> apply_method2(const std::vector<LabeledInstance>& data) {
  std::vector<LabeledInstance> out;
  for (const LabeledInstance& inst : data)
    if (inst.winners.size() == 1) out.push_back(inst);
  if (out.empty() && !data.empty())
    throw EmptyResult("apply_method2: every instance is multi-label");
  return out;
}

Method3Data apply_method3(const std::vector<LabeledInstance>& data) {
  Method3Data out;
  out.instances = data;
  for (int s = 0; s < kNumSolvers; ++s) out.targets[s].resize(data.size(), 0);
  for (size_t i = 0; i < data.size(); ++i)
    for (SolverId w : data[i].winners) out.targets[static_cast<int>(w)][i] = 1;
  return out;
}

Split split_indices(size_t n, double ratio, uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidSpec("split: ratio must be in (0,1)");
  if (n < 2) throw TooFewInstances("split: need at least 2 instances");
  Rng rng(mix_seed(seed, 0x5117));
  std::vector<size_t> perm = rng.permutation(n);
  size_t n_train = static_cast<size_t>(std::floor(ratio * static_cast<double>(n)));
  Split sp;
  sp.seed = seed;
  for (size_t i = 0; i < n; ++i) (i < n_train ? sp.train : sp.test).push_back(perm[i]);
  return sp;
}

SplitData train_test_split(const std::vector<LabeledInstance>& data, double ratio, uint64_t seed) {
  Split sp = split_indices(data.size(), ratio, seed);
  SplitData out;
  out.seed = seed;
  for (size_t i : sp.train) out.train.push_back(data[i]);
  for (size_t i : sp.test) out.test.push_back(data[i]);
  return out;
}

// --- corpus generation -------------------------------------------------

const char* family_name(GraphFamily f) {
  switch (f) {
    case GraphFamily::ErdosRenyi: return "erdos_renyi";
    case GraphFamily::PreferentialAttachment: return "preferential_attachment";
    case GraphFamily::PlantedClique: return "planted_clique";
  }
  return "?";
}

namespace {

GraphFamily family_from_name(const std::string& name) {
  if (name == "erdos_renyi") return GraphFamily::ErdosRenyi;
  if (name == "preferential_attachment") return GraphFamily::PreferentialAttachment;
  if (name == "planted_clique") return GraphFamily::PlantedClique;
  throw SchemaMismatch("unknown graph family '" + name + "'");
}

}  // namespace

Graph gen_erdos_renyi(int n, double p, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

Graph gen_barabasi_albert(int n, int m, Rng& rng) {
  m = std::min(m, n - 1);
  std::vector<std::pair<int, int>> edges;
  int seed_size = std::min(m + 1, n);
  for (int u = 0; u < seed_size; ++u)
    for (int v = u + 1; v < seed_size; ++v) edges.emplace_back(u, v);
  // endpoints doubles as the degree-proportional sampling pool
  std::vector<int> endpoints;
  for (auto [u, v] : edges) {
    endpoints.push_back(u);
    endpoints.push_back(v);
  }
  std::vector<int> picked;
  for (int v = seed_size; v < n; ++v) {
    picked.clear();
    while (static_cast<int>(picked.size()) < m) {
      int t = endpoints[rng.below(endpoints.size())];
      if (std::find(picked.begin(), picked.end(), t) == picked.end()) picked.push_back(t);
    }
    for (int t : picked) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph::from_edges(n, edges);
}

Graph gen_planted_clique(int n, double p, int k, Rng& rng, std::vector<int>* planted) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
  std::vector<size_t> perm = rng.permutation(static_cast<size_t>(n));
  std::vector<int> members;
  for (int i = 0; i < k; ++i) members.push_back(static_cast<int>(perm[i]));
  std::sort(members.begin(), members.end());
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) edges.emplace_back(members[i], members[j]);
  if (planted) *planted = members;
  return Graph::from_edges(n, edges);
}

void validate_spec(const CorpusSpec& spec) {
  if (spec.count < 1) throw InvalidSpec("corpus: count must be >= 1");
  if (spec.n_min < 2 || spec.n_min > spec.n_max) throw InvalidSpec("corpus: bad node range");
  if (spec.family != GraphFamily::PreferentialAttachment) {
    // p = 1 is allowed: it deterministically yields complete graphs.
    if (!(spec.p_min > 0.0 && spec.p_min <= spec.p_max && spec.p_max <= 1.0))
      throw InvalidSpec("corpus: density range must lie inside (0,1]");
  }
  if (spec.family == GraphFamily::PreferentialAttachment) {
    if (spec.m_min < 1 || spec.m_min > spec.m_max) throw InvalidSpec("corpus: bad attachment range");
  }
  if (spec.family == GraphFamily::PlantedClique) {
    if (spec.k_min < 2 || spec.k_min > spec.k_max || spec.k_max > spec.n_min)
      throw InvalidSpec("corpus: planted size range must fit the smallest graph");
  }
  if (spec.max_edges < 0) throw InvalidSpec("corpus: max_edges must be >= 0");
}

std::vector<GeneratedGraph> corpus_generate(const CorpusSpec& spec) {
  validate_spec(spec);
  std::vector<GeneratedGraph> out;
  out.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i) {
    Rng rng(mix_seed(spec.seed, static_cast<uint64_t>(i)));
    GeneratedGraph g;
    g.family = spec.family;
    char idbuf[32];
    std::snprintf(idbuf, sizeof(idbuf), "%04d", i);
    g.instance_id = spec.name_prefix + idbuf;
    int n = rng.uniform_int(spec.n_min, spec.n_max);
    switch (spec.family) {
      case GraphFamily::ErdosRenyi: {
        double p = rng.uniform(spec.p_min, spec.p_max);
        if (spec.max_edges > 0) {
          double pairs = 0.5 * static_cast<double>(n) * (n - 1);
          p = std::min(p, static_cast<double>(spec.max_edges) / pairs);
        }
        g.graph = gen_erdos_renyi(n, p, rng);
        g.meta = {{"family", family_name(spec.family)}, {"n", n}, {"p", p}};
        break;
      }
      case GraphFamily::PreferentialAttachment: {
        int m = rng.uniform_int(spec.m_min, spec.m_max);
        g.graph = gen_barabasi_albert(n, m, rng);
        g.meta = {{"family", family_name(spec.family)}, {"n", n}, {"m", m}};
        break;
      }
      case GraphFamily::PlantedClique: {
        double p = rng.uniform(spec.p_min, spec.p_max);
        int k_hi = std::min(spec.k_max, n);
        int k = rng.uniform_int(std::min(spec.k_min, k_hi), k_hi);
        std::vector<int> members;
        g.graph = gen_planted_clique(n, p, k, rng, &members);
        g.meta = {{"family", family_name(spec.family)},
                  {"n", n},
                  {"p", p},
                  {"planted_k", k},
                  {"planted", members}};
        break;
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<CorpusSpec> default_corpus_specs(uint64_t seed) {
  CorpusSpec er;
  er.family = GraphFamily::ErdosRenyi;
  er.n_min = 20;
  er.n_max = 2000;
  er.p_min = 0.01;
  er.p_max = 0.95;
  er.max_edges = 150000;  // keeps the dense tail of the range tractable
  er.count = 100;
  er.seed = mix_seed(seed, 101);
  er.name_prefix = "er_";

  CorpusSpec pa;
  pa.family = GraphFamily::PreferentialAttachment;
  pa.n_min = 100;
  pa.n_max = 2000;
  pa.m_min = 2;
  pa.m_max = 10;
  pa.count = 100;
  pa.seed = mix_seed(seed, 202);
  pa.name_prefix = "pa_";

  CorpusSpec pl;
  pl.family = GraphFamily::PlantedClique;
  pl.n_min = 40;
  pl.n_max = 600;
  pl.p_min = 0.05;
  pl.p_max = 0.3;
  pl.k_min = 8;
  pl.k_max = 30;
  pl.count = 100;
  pl.seed = mix_seed(seed, 303);
  pl.name_prefix = "pl_";

  return {er, pa, pl};
}

nlohmann::json spec_to_json(const CorpusSpec& spec) {
  return {{"family", family_name(spec.family)},
          {"n_min", spec.n_min},
          {"n_max", spec.n_max},
          {"p_min", spec.p_min},
          {"p_max", spec.p_max},
          {"m_min", spec.m_min},
          {"m_max", spec.m_max},
          {"k_min", spec.k_min},
          {"k_max", spec.k_max},
          {"count", spec.count},
          {"seed", spec.seed},
          {"name_prefix", spec.name_prefix},
          {"max_edges", spec.max_edges}};
}

CorpusSpec spec_from_json(const nlohmann::json& j) {
  // Only the family is mandatory; unnamed ranges keep their struct defaults so
  // hand-written spec files can omit keys that do not apply to the family.
  CorpusSpec s;
  try {
    s.family = family_from_name(j.at("family").get<std::string>());
    s.n_min = j.value("n_min", s.n_min);
    s.n_max = j.value("n_max", s.n_max);
    s.p_min = j.value("p_min", s.p_min);
    s.p_max = j.value("p_max", s.p_max);
    s.m_min = j.value("m_min", s.m_min);
    s.m_max = j.value("m_max", s.m_max);
    s.k_min = j.value("k_min", s.k_min);
    s.k_max = j.value("k_max", s.k_max);
    s.count = j.value("count", s.count);
    s.seed = j.value("seed", s.seed);
    s.name_prefix = j.value("name_prefix", s.name_prefix);
    s.max_edges = j.value("max_edges", s.max_edges);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaMismatch(std::string("corpus spec: ") + e.what());
  }
  return s;
}

// --- persistence -------------------------------------------------------

std::string winners_to_string(const std::vector<SolverId>& winners) {
  std::vector<std::string> names;
  for (SolverId w : winners) names.emplace_back(solver_name(w));
  return csvio::join(names, ';');
}

std::vector<SolverId> winners_from_string(const std::string& s) {
  std::vector<SolverId> out;
  for (const std::string& name : csvio::split_fields(s, ';')) {
    std::optional<SolverId> id = solver_from_name(name);
    if (!id) throw SchemaMismatch("unknown solver name '" + name + "'");
    out.push_back(*id);
  }
  if (out.empty()) throw SchemaMismatch("empty winner set");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::string dataset_header() {
  std::vector<std::string> cols;
  cols.emplace_back("instance_id");
  for (const std::string& c : GlobalFeatures::column_names()) cols.push_back(c);
  cols.emplace_back("winners");
  return csvio::join(cols, ',');
}

void write_rows(const std::filesystem::path& path, const std::vector<LabeledInstance>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << dataset_header() << "\n";
  for (const LabeledInstance& inst : rows) {
    std::vector<std::string> fields;
    fields.push_back(inst.instance_id);
    for (double x : inst.features) fields.push_back(csvio::format_double(x));
    fields.push_back(winners_to_string(inst.winners));
    out << csvio::join(fields, ',') << "\n";
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<LabeledInstance> read_rows(const std::filesystem::path& path,
                                       const DatasetManifest& manifest) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw SchemaMismatch(path.string() + ": missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != dataset_header()) throw SchemaMismatch(path.string() + ": unexpected header");
  std::vector<LabeledInstance> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = csvio::split_fields(line);
    if (fields.size() != 14)
      throw SchemaMismatch(path.string() + ": expected 14 columns, got " +
                           std::to_string(fields.size()));
    LabeledInstance inst;
    inst.instance_id = fields[0];
    for (int i = 0; i < 12; ++i) inst.features[i] = csvio::parse_double(fields[1 + i], "feature");
    inst.winners = winners_from_string(fields[13]);
    if (!manifest.graph_dir.empty())
      inst.graph_ref = instance_graph_path(manifest, inst.instance_id).string();
    rows.push_back(std::move(inst));
  }
  return rows;
}

}  // namespace

void save_labeled_csv(const std::vector<LabeledInstance>& rows,
                      const std::filesystem::path& path) {
  write_rows(path, rows);
}

std::vector<LabeledInstance> load_labeled_csv(const std::filesystem::path& path,
                                              const std::string& graph_dir) {
  DatasetManifest m;
  m.graph_dir = graph_dir;
  return read_rows(path, m);
}

std::filesystem::path instance_graph_path(const DatasetManifest& m, const std::string& id) {
  return std::filesystem::path(m.graph_dir) / (id + ".clq");
}

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());
  write_rows(dir / "train.csv", ds.train);
  write_rows(dir / "test.csv", ds.test);
  nlohmann::json j = {{"variant", ds.manifest.variant},
                      {"seed", ds.manifest.seed},
                      {"ratio", ds.manifest.ratio},
                      {"budget_s", ds.manifest.budget_s},
                      {"tie_epsilon_s", ds.manifest.tie_epsilon_s},
                      {"generator_specs", ds.manifest.generator_specs},
                      {"graph_dir", ds.manifest.graph_dir}};
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
  out << j.dump(2) << "\n";
}

Dataset load_dataset(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json", std::ios::binary);
  if (!in) throw IoError("cannot read " + (dir / "manifest.json").string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaMismatch(std::string("manifest: ") + e.what());
  }
  Dataset ds;
  try {
    ds.manifest.variant = j.at("variant").get<std::string>();
    ds.manifest.seed = j.at("seed").get<uint64_t>();
    ds.manifest.ratio = j.at("ratio").get<double>();
    ds.manifest.budget_s = j.at("budget_s").get<double>();
    ds.manifest.tie_epsilon_s = j.at("tie_epsilon_s").get<double>();
    ds.manifest.generator_specs = j.at("generator_specs");
    ds.manifest.graph_dir = j.at("graph_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaMismatch(std::string("manifest: ") + e.what());
  }
  if (ds.manifest.variant != "raw" && ds.manifest.variant != "Method1" &&
      ds.manifest.variant != "Method2" && ds.manifest.variant != "Method3")
    throw SchemaMismatch("manifest: unknown variant '" + ds.manifest.variant + "'");
  ds.train = read_rows(dir / "train.csv", ds.manifest);
  ds.test = read_rows(dir / "test.csv", ds.manifest);
  return ds;
}

}  // namespace cliquesel
