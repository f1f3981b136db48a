#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "heretic/baselines.hpp"
#include "heretic/config.hpp"
#include "heretic/dataset.hpp"
#include "heretic/eval.hpp"
#include "heretic/minimizer.hpp"
#include "heretic/network.hpp"
#include "heretic/rules.hpp"
#include "heretic/sampler.hpp"
#include "heretic/tree.hpp"

namespace heretic {

struct extraction_options {
  int min_leaf = 2;
  minimize_mode mode = minimize_mode::automatic;
  std::size_t term_cap = 100000;
};

// Full rule-extraction pass over a trained network: per-neuron trees (grown
// on the full sample sets, then reduced-error pruned against those same
// samples, which removes only structure the samples never justify), tree-to-
// DNF conversion, bottom-up substitution down to input literals, minimization,
// and rule-set assembly with priorities. Deterministic given (net, dataset):
// the unit samples are noise-free functions of the network, so a held-out
// prune split would only starve the trees of coverage.
struct extraction_result {
  ruleset rules;                                  // final, minimized
  std::vector<dnf> raw_outputs;                   // pre-minimization class DNFs
  layered_dnfs stack;                             // per-neuron DNF pairs
  std::vector<std::vector<decision_tree>> trees;  // [layer][unit], pruned
  double mid_fraction = 0.0;                      // sampler diagnostic
  int substitution_rounds = 0;
  std::size_t peak_terms = 0;
  warning_list warnings;
};

extraction_result extract_rules(const network& net, const dataset& encoded_train,
                                const extraction_options& opts = {});

// Prediction by routing rows through the per-neuron trees layer by layer
// (binarized outputs feed the next layer), then applying the rule set's
// class-decision policy to the output bits. Matches ruleset_predict exactly
// when conversion, substitution, and minimization are sound.
int cascade_predict(const extraction_result& ex, std::span<const double> encoded_row);

struct stage_timings {
  std::vector<std::pair<std::string, double>> seconds;  // stage -> accumulated
  void add(const std::string& stage, double s);
};

struct experiment_artifacts {
  report rep;
  std::string ruleset_text;  // repeat 0, fold 0 showcase
  std::string network_text;  // repeat 0, fold 0 network
  stage_timings timings;
  std::vector<std::pair<std::string, std::string>> sample_dumps;  // name -> csv
};

experiment_artifacts run_experiment(const experiment_config& cfg);

// Writes report.json, report.txt, rules.txt, network.txt, timings.txt (and
// samples/ when dumped) under dir, creating it if needed.
void write_artifacts(const experiment_artifacts& artifacts, const std::string& dir);

// Test-set predictions of a rule set, network, or tree on an encoded dataset.
std::vector<int> predict_all(const ruleset& rs, const dataset& encoded);
std::vector<int> predict_all(const network& net, const dataset& encoded);

}  // namespace heretic
