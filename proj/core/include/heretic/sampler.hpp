#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "heretic/common.hpp"
#include "heretic/dataset.hpp"
#include "heretic/network.hpp"

namespace heretic {

// Hard threshold on a unit activation. Values must lie in [0, 1]; exactly 0.5
// rounds up.
int binarize(double activation);

struct neuron_id {
  int layer = 0;  // 1-based over non-input layers (1 = first hidden)
  int unit = 0;
};

// Per-neuron training table: the unit's input vector (raw encoded features for
// the first hidden layer, binarized previous-layer outputs above) paired with
// the unit's own binarized output.
struct neuron_sample_set {
  neuron_id id;
  std::vector<std::string> input_names;
  std::vector<std::vector<double>> inputs;
  std::vector<int> outputs;
  bool constant_output = false;
};

struct sampler_result {
  std::vector<neuron_sample_set> sets;  // layer-major, unit order within layer
  // Fraction of all (instance, unit) activations in (0.05, 0.95); high values
  // mean the network is not operating in the crisp saturated regime.
  double mid_fraction = 0.0;
  warning_list warnings;
};

sampler_result collect_neuron_samples(const network& net, const dataset& encoded,
                                      double mid_warn_threshold = 0.05);

void dump_sample_csv(const neuron_sample_set& set, std::ostream& out);

}  // namespace heretic
