#include "heretic/sampler.hpp"

#include <ostream>

namespace heretic {

int binarize(double activation) {
  if (!(activation >= 0.0 && activation <= 1.0)) {
    throw pipeline_error("activation " + std::to_string(activation) +
                         " outside [0, 1]; cannot binarize");
  }
  return activation >= 0.5 ? 1 : 0;
}

sampler_result collect_neuron_samples(const network& net, const dataset& encoded,
                                      double mid_warn_threshold) {
  if (!encoded.encoded) {
    throw data_error(encoded.name + ": sampler expects an encoded dataset");
  }
  if (static_cast<int>(encoded.width()) != net.input_width()) {
    throw data_error(encoded.name + ": width does not match the network input layer");
  }
  if (encoded.size() == 0) throw data_error(encoded.name + ": no instances to sample");

  const std::vector<int>& sizes = net.layer_sizes();
  const std::size_t L = sizes.size() - 1;

  sampler_result result;
  result.sets.reserve([&] {
    std::size_t n = 0;
    for (std::size_t l = 1; l <= L; ++l) n += static_cast<std::size_t>(sizes[l]);
    return n;
  }());

  for (std::size_t l = 1; l <= L; ++l) {
    std::vector<std::string> input_names;
    if (l == 1) {
      for (const feature_spec& f : encoded.schema) input_names.push_back(f.name);
    } else {
      for (int j = 0; j < sizes[l - 1]; ++j) {
        input_names.push_back("u" + std::to_string(l - 1) + "_" + std::to_string(j));
      }
    }
    for (int j = 0; j < sizes[l]; ++j) {
      neuron_sample_set set;
      set.id = {static_cast<int>(l), j};
      set.input_names = input_names;
      set.inputs.reserve(encoded.size());
      set.outputs.reserve(encoded.size());
      result.sets.push_back(std::move(set));
    }
  }

  std::size_t mid = 0, total = 0;
  std::size_t base = 0;
  for (const auto& row : encoded.rows) {
    activation_trace trace = net.forward(row);
    base = 0;
    std::vector<double> prev_bits(row.begin(), row.end());
    for (std::size_t l = 1; l <= L; ++l) {
      const std::vector<double>& acts = trace.layers[l];
      std::vector<double> bits(acts.size());
      for (std::size_t j = 0; j < acts.size(); ++j) {
        if (acts[j] > 0.05 && acts[j] < 0.95) ++mid;
        ++total;
        bits[j] = static_cast<double>(binarize(acts[j]));
        neuron_sample_set& set = result.sets[base + j];
        set.inputs.push_back(prev_bits);
        set.outputs.push_back(static_cast<int>(bits[j]));
      }
      prev_bits = std::move(bits);
      base += acts.size();
    }
  }

  result.mid_fraction = total == 0 ? 0.0 : static_cast<double>(mid) / static_cast<double>(total);
  if (result.mid_fraction > mid_warn_threshold) {
    // The exact fraction is in mid_fraction (and the per-run report records);
    // the message stays value-free so repeated runs collapse to one warning.
    warn(&result.warnings, "sampler",
         encoded.name + ": more than " + std::to_string(static_cast<int>(mid_warn_threshold * 100.0)) +
             "% of unit activations fall in the ambiguous band (0.05, 0.95); "
             "binarized rules may track the network less closely");
  }
  for (neuron_sample_set& set : result.sets) {
    bool all_same = true;
    for (std::size_t i = 1; i < set.outputs.size(); ++i) {
      if (set.outputs[i] != set.outputs[0]) {
        all_same = false;
        break;
      }
    }
    set.constant_output = all_same;
  }
  return result;
}

void dump_sample_csv(const neuron_sample_set& set, std::ostream& out) {
  for (std::size_t c = 0; c < set.input_names.size(); ++c) {
    out << set.input_names[c] << ",";
  }
  out << "unit_" << set.id.layer << "_" << set.id.unit << "\n";
  for (std::size_t r = 0; r < set.inputs.size(); ++r) {
    for (double v : set.inputs[r]) out << v << ",";
    out << set.outputs[r] << "\n";
  }
}

}  // namespace heretic
