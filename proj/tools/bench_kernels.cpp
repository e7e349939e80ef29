// Times the OpenMP kernels against their single-threaded references and
// checks the results agree bit for bit. Usage: bench_kernels [n] [p] [reps]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "cliquesel/dataset.hpp"
#include "cliquesel/gatmlp.hpp"
#include "cliquesel/reference.hpp"
#include "cliquesel/rng.hpp"

using namespace cliquesel;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    double t0 = now_s();
    fn();
    best = std::min(best, now_s() - t0);
  }
  return best;
}

void row(const char* name, double serial_s, double parallel_s, bool match) {
  std::printf("%-22s %10.4f s %10.4f s %8.2fx   %s\n", name, serial_s, parallel_s,
              serial_s / parallel_s, match ? "bitwise match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 4000;
  double p = argc > 2 ? std::atof(argv[2]) : 0.01;
  int reps = argc > 3 ? std::atoi(argv[3]) : 3;

  Rng rng(1234);
  Graph g = gen_erdos_renyi(n, p, rng);
  std::printf("graph: n=%d m=%lld, %d thread(s), best of %d\n\n", g.node_count, g.edge_count,
              omp_get_max_threads(), reps);
  std::printf("%-22s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    TriangleCounts ref, par;
    double ts = time_best(reps, [&] { ref = reference::count_triangles_serial(g); });
    double tp = time_best(reps, [&] { par = count_triangles(g); });
    row("triangles", ts, tp,
        ref.total == par.total && ref.per_edge == par.per_edge && ref.edges == par.edges);
  }
  {
    AssortativityResult ref, par;
    double ts = time_best(reps, [&] { ref = reference::assortativity_serial(g); });
    double tp = time_best(reps, [&] { par = assortativity(g); });
    row("assortativity", ts, tp,
        ref.value == par.value && ref.degenerate == par.degenerate);
  }
  {
    std::vector<double> ref, par;
    double ts = time_best(reps, [&] { ref = reference::local_clustering_all_serial(g); });
    double tp = time_best(reps, [&] { par = local_clustering_all(g); });
    row("local clustering", ts, tp, ref == par);
  }
  {
    std::vector<Graph> batch;
    Rng brng(77);
    for (int i = 0; i < 24; ++i) batch.push_back(gen_erdos_renyi(n / 8, p * 4, brng));
    std::vector<GlobalFeatures> ref, par;
    double ts = time_best(reps, [&] { ref = reference::extract_global_batch_serial(batch); });
    double tp = time_best(reps, [&] { par = extract_global_batch(batch); });
    bool match = ref.size() == par.size();
    for (size_t i = 0; match && i < ref.size(); ++i)
      match = ref[i].as_vector() == par[i].as_vector();
    row("feature batch (24)", ts, tp, match);
  }
  {
    // batch GAT forward: the per-instance loop is what training parallelizes
    TrainConfig cfg;
    cfg.seed = 9;
    ModelParams params = init_params(cfg);
    ZScoreNormalizer ident;
    ident.mu.assign(12, 0.0);
    ident.sigma.assign(12, 1.0);
    Rng grng(55);
    std::vector<InstanceInput> inputs;
    for (int i = 0; i < 32; ++i) {
      Graph gi = gen_erdos_renyi(n / 16, p * 8, grng);
      std::array<double, 12> feat;
      for (double& f : feat) f = grng.uniform(-1.0, 1.0);
      inputs.push_back(prepare_input(gi, feat, ident));
    }
    std::vector<std::vector<double>> ref(inputs.size()), par(inputs.size());
    double ts = time_best(reps, [&] {
      InstanceCache c;
      for (size_t i = 0; i < inputs.size(); ++i) {
        model_forward(params, inputs[i], false, nullptr, c);
        ref[i] = c.logits;
      }
    });
    double tp = time_best(reps, [&] {
#pragma omp parallel for schedule(dynamic)
      for (size_t i = 0; i < inputs.size(); ++i) {
        InstanceCache c;
        model_forward(params, inputs[i], false, nullptr, c);
        par[i] = c.logits;
      }
    });
    row("gat forward (32)", ts, tp, ref == par);
  }
  return 0;
}
