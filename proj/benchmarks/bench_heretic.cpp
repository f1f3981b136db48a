// Microbenchmarks for the heavy pipeline stages: one training epoch, tree
// induction, DNF minimization, and the full extraction pass at several hidden
// widths.

#include <array>
#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "heretic/minimizer.hpp"
#include "heretic/network.hpp"
#include "heretic/pipeline.hpp"
#include "heretic/tree.hpp"

namespace {

using namespace heretic;

// A deterministic binary dataset with a planted two-term rule plus noise,
// sized like the bundled benchmarks.
dataset synthetic_dataset(int rows, int features, std::uint64_t seed) {
  dataset d;
  d.name = "synthetic";
  d.classes = {"neg", "pos"};
  rng r(seed);
  for (int c = 0; c < features; ++c) {
    feature_spec f;
    f.name = "f" + std::to_string(c);
    f.kind = feature_kind::binary;
    d.schema.push_back(f);
  }
  for (int i = 0; i < rows; ++i) {
    std::vector<double> row(static_cast<std::size_t>(features));
    for (double& v : row) v = r.uniform() < 0.5 ? 1.0 : 0.0;
    const bool planted = (row[0] == 1.0 && row[1] == 1.0) || (row[2] == 1.0 && row[3] == 0.0);
    int label = planted ? 1 : 0;
    if (r.uniform() < 0.05) label = 1 - label;
    d.rows.push_back(std::move(row));
    d.labels.push_back(label);
  }
  d.encoded = true;
  d.check_invariants();
  return d;
}

network_config net_config(const dataset& d, int hidden) {
  network_config cfg;
  cfg.layer_sizes = {static_cast<int>(d.width()), hidden, static_cast<int>(d.classes.size())};
  cfg.epochs = 1;
  cfg.seed = 11;
  return cfg;
}

void bm_train_epoch(benchmark::State& state) {
  const dataset d = synthetic_dataset(400, 12, 5);
  network_config cfg = net_config(d, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(train(d, cfg));
  }
}
BENCHMARK(bm_train_epoch)->Arg(5)->Arg(10)->Arg(20);

void bm_tree_induction(benchmark::State& state) {
  const dataset d = synthetic_dataset(static_cast<int>(state.range(0)), 12, 5);
  const std::vector<bool> real_mask(d.width(), false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(induce(d.rows, d.labels, real_mask, 2));
  }
}
BENCHMARK(bm_tree_induction)->Arg(100)->Arg(400)->Arg(1600);

void bm_minimize(benchmark::State& state) {
  boolean_space sp;
  const int vars = static_cast<int>(state.range(0));
  for (int v = 0; v < vars; ++v) sp.add_binary("x" + std::to_string(v));
  rng r(23);
  dnf input;
  for (int t = 0; t < 40; ++t) {
    cube c = cube::full(sp);
    for (int v = 0; v < vars; ++v) {
      const double roll = r.uniform();
      if (roll < 0.35) {
        c.require_value(static_cast<std::size_t>(v), 1);
      } else if (roll < 0.7) {
        c.require_value(static_cast<std::size_t>(v), 0);
      }
    }
    input.terms.push_back(c);
  }
  input.normalize();
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimize(input, sp, minimize_mode::automatic));
  }
}
BENCHMARK(bm_minimize)->Arg(8)->Arg(12)->Arg(16);

void bm_extract(benchmark::State& state) {
  const dataset d = synthetic_dataset(400, 12, 5);
  network_config cfg = net_config(d, static_cast<int>(state.range(0)));
  cfg.epochs = 30;
  const network net = train(d, cfg);
  extraction_options opts;
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_rules(net, d, opts));
  }
}
BENCHMARK(bm_extract)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
