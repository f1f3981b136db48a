#include "heretic/network.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace heretic {
namespace {

void check_input_width(const network& net, std::span<const double> input) {
  if (static_cast<int>(input.size()) != net.input_width()) {
    throw data_error("network expects " + std::to_string(net.input_width()) +
                     " inputs, got " + std::to_string(input.size()));
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void network_config::validate() const {
  if (layer_sizes.size() < 2) {
    throw config_error("network needs at least an input and an output layer");
  }
  for (int s : layer_sizes) {
    if (s < 1) throw config_error("every network layer needs at least one unit");
  }
  if (!(steepness > 0.0)) throw config_error("steepness must be positive");
  if (!(learning_rate > 0.0)) throw config_error("learning rate must be positive");
  if (epochs < 0) throw config_error("epoch count cannot be negative");
  if (weight_decay < 0.0) throw config_error("weight decay cannot be negative");
}

network network::initialize(const network_config& cfg) {
  cfg.validate();
  network net;
  net.sizes_ = cfg.layer_sizes;
  net.steepness_ = cfg.steepness;
  rng r(mix_seed(cfg.seed, 0x1417));
  // Small weights relative to the steepness keep the initial pre-activations
  // inside the sigmoid's linear band, so early gradients are informative
  // instead of saturated.
  const double scale = 1.0 / cfg.steepness;
  for (std::size_t l = 0; l + 1 < net.sizes_.size(); ++l) {
    std::size_t fan_in = static_cast<std::size_t>(net.sizes_[l]);
    std::size_t fan_out = static_cast<std::size_t>(net.sizes_[l + 1]);
    std::vector<double> w(fan_in * fan_out);
    for (double& x : w) x = r.uniform(-0.2, 0.2) * scale;
    std::vector<double> b(fan_out);
    for (double& x : b) x = r.uniform(-0.2, 0.2) * scale;
    net.weights_.push_back(std::move(w));
    net.biases_.push_back(std::move(b));
  }
  return net;
}

activation_trace network::forward(std::span<const double> input) const {
  check_input_width(*this, input);
  activation_trace trace;
  trace.layers.reserve(sizes_.size());
  trace.layers.emplace_back(input.begin(), input.end());
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const std::vector<double>& prev = trace.layers.back();
    std::size_t fan_out = static_cast<std::size_t>(sizes_[l + 1]);
    std::vector<double> next(fan_out);
    for (std::size_t j = 0; j < fan_out; ++j) {
      double z = biases_[l][j];
      for (std::size_t i = 0; i < prev.size(); ++i) {
        z += prev[i] * weights_[l][i * fan_out + j];
      }
      next[j] = steep_sigmoid(z, steepness_);
    }
    trace.layers.push_back(std::move(next));
  }
  return trace;
}

std::vector<double> network::outputs(std::span<const double> input) const {
  return forward(input).layers.back();
}

int network::predict(std::span<const double> input) const {
  std::vector<double> y = outputs(input);
  int best = 0;
  for (std::size_t j = 1; j < y.size(); ++j) {
    if (y[j] > y[static_cast<std::size_t>(best)]) best = static_cast<int>(j);
  }
  return best;
}

void network::save(std::ostream& out) const {
  out << "heretic network 1\n";
  out << "steepness " << format_double(steepness_) << "\n";
  out << "layers";
  for (int s : sizes_) out << " " << s;
  out << "\n";
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    out << "weights " << l << "\n";
    std::size_t fan_out = static_cast<std::size_t>(sizes_[l + 1]);
    for (std::size_t i = 0; i < static_cast<std::size_t>(sizes_[l]); ++i) {
      for (std::size_t j = 0; j < fan_out; ++j) {
        out << (j == 0 ? "" : " ") << format_double(weights_[l][i * fan_out + j]);
      }
      out << "\n";
    }
    out << "biases " << l << "\n";
    for (std::size_t j = 0; j < fan_out; ++j) {
      out << (j == 0 ? "" : " ") << format_double(biases_[l][j]);
    }
    out << "\n";
  }
}

void network::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open network file for writing: " + path);
  save(out);
}

network network::load(std::istream& in) {
  std::string word;
  int version = 0;
  if (!(in >> word) || word != "heretic" || !(in >> word) || word != "network" ||
      !(in >> version) || version != 1) {
    throw data_error("not a recognized network file");
  }
  network net;
  if (!(in >> word) || word != "steepness" || !(in >> net.steepness_)) {
    throw data_error("network file: missing steepness");
  }
  if (!(in >> word) || word != "layers") throw data_error("network file: missing layers");
  {
    std::string rest;
    std::getline(in, rest);
    std::stringstream ss(rest);
    int s;
    while (ss >> s) net.sizes_.push_back(s);
  }
  if (net.sizes_.size() < 2) throw data_error("network file: fewer than two layers");
  for (int s : net.sizes_) {
    if (s < 1) throw data_error("network file: non-positive layer size");
  }
  for (std::size_t l = 0; l + 1 < net.sizes_.size(); ++l) {
    std::size_t fan_in = static_cast<std::size_t>(net.sizes_[l]);
    std::size_t fan_out = static_cast<std::size_t>(net.sizes_[l + 1]);
    std::size_t idx = 0;
    if (!(in >> word) || word != "weights" || !(in >> idx) || idx != l) {
      throw data_error("network file: expected weights block " + std::to_string(l));
    }
    std::vector<double> w(fan_in * fan_out);
    for (double& x : w) {
      if (!(in >> x)) throw data_error("network file: truncated weights block");
    }
    if (!(in >> word) || word != "biases" || !(in >> idx) || idx != l) {
      throw data_error("network file: expected biases block " + std::to_string(l));
    }
    std::vector<double> b(fan_out);
    for (double& x : b) {
      if (!(in >> x)) throw data_error("network file: truncated biases block");
    }
    net.weights_.push_back(std::move(w));
    net.biases_.push_back(std::move(b));
  }
  return net;
}

network network::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open network file: " + path);
  return load(in);
}

network network::from_parameters(std::vector<int> sizes, double steepness,
                                 std::vector<std::vector<double>> weights,
                                 std::vector<std::vector<double>> biases) {
  if (sizes.size() < 2 || weights.size() != sizes.size() - 1 ||
      biases.size() != sizes.size() - 1) {
    throw config_error("network parameter shapes do not match the layer sizes");
  }
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    std::size_t fan_in = static_cast<std::size_t>(sizes[l]);
    std::size_t fan_out = static_cast<std::size_t>(sizes[l + 1]);
    if (weights[l].size() != fan_in * fan_out || biases[l].size() != fan_out) {
      throw config_error("network parameter shapes do not match the layer sizes");
    }
  }
  network net;
  net.sizes_ = std::move(sizes);
  net.steepness_ = steepness;
  net.weights_ = std::move(weights);
  net.biases_ = std::move(biases);
  return net;
}

double sse_loss(const network& net, std::span<const double> input,
                std::span<const double> target) {
  std::vector<double> y = net.outputs(input);
  if (y.size() != target.size()) {
    throw data_error("target width does not match the network output width");
  }
  double loss = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    double e = target[j] - y[j];
    loss += e * e;
  }
  return loss;
}

gradients loss_gradient(const network& net, std::span<const double> input,
                        std::span<const double> target) {
  activation_trace trace = net.forward(input);
  const std::vector<double>& y = trace.layers.back();
  if (y.size() != target.size()) {
    throw data_error("target width does not match the network output width");
  }
  const double m = net.steepness();
  const std::vector<int>& sizes = net.layer_sizes();
  const std::size_t L = sizes.size() - 1;  // number of connection layers

  gradients g;
  g.weights.resize(L);
  g.biases.resize(L);

  // delta[l][j] = dLoss/dz for unit j of layer l+1, where z is the raw
  // pre-activation (before the steepness multiplier).
  std::vector<std::vector<double>> delta(L);
  delta[L - 1].resize(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    delta[L - 1][j] = -2.0 * (target[j] - y[j]) * m * y[j] * (1.0 - y[j]);
  }
  for (std::size_t l = L - 1; l-- > 0;) {
    const std::vector<double>& h = trace.layers[l + 1];
    std::size_t fan_out = static_cast<std::size_t>(sizes[l + 2]);
    delta[l].resize(h.size());
    for (std::size_t j = 0; j < h.size(); ++j) {
      double back = 0.0;
      for (std::size_t p = 0; p < fan_out; ++p) {
        back += net.weights()[l + 1][j * fan_out + p] * delta[l + 1][p];
      }
      delta[l][j] = m * h[j] * (1.0 - h[j]) * back;
    }
  }
  for (std::size_t l = 0; l < L; ++l) {
    const std::vector<double>& h = trace.layers[l];
    std::size_t fan_out = static_cast<std::size_t>(sizes[l + 1]);
    g.weights[l].resize(h.size() * fan_out);
    for (std::size_t i = 0; i < h.size(); ++i) {
      for (std::size_t j = 0; j < fan_out; ++j) {
        g.weights[l][i * fan_out + j] = h[i] * delta[l][j];
      }
    }
    g.biases[l] = delta[l];
  }
  return g;
}

network train(const dataset& encoded, const network_config& cfg, warning_list* warnings) {
  cfg.validate();
  if (!encoded.encoded) {
    throw data_error(encoded.name + ": train() expects an encoded dataset");
  }
  if (encoded.size() == 0) throw data_error(encoded.name + ": cannot train on zero instances");
  if (static_cast<int>(encoded.width()) != cfg.layer_sizes.front()) {
    throw config_error("network input layer (" + std::to_string(cfg.layer_sizes.front()) +
                       ") does not match the encoded width (" +
                       std::to_string(encoded.width()) + ")");
  }
  if (static_cast<int>(encoded.classes.size()) != cfg.layer_sizes.back()) {
    throw config_error("network output layer (" + std::to_string(cfg.layer_sizes.back()) +
                       ") does not match the class count (" +
                       std::to_string(encoded.classes.size()) + ")");
  }

  network net = network::initialize(cfg);
  const double step = cfg.learning_rate / cfg.steepness;
  const double decay = 1.0 - cfg.learning_rate * cfg.weight_decay;
  const int classes = cfg.layer_sizes.back();

  std::vector<std::vector<double>> targets;
  targets.reserve(encoded.size());
  for (int y : encoded.labels) targets.push_back(one_hot_target(y, classes));

  std::vector<int> order(encoded.size());
  std::iota(order.begin(), order.end(), 0);
  rng shuffler(mix_seed(cfg.seed, 0x0d8e));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffler.shuffle(order);
    for (int i : order) {
      gradients g = loss_gradient(net, encoded.rows[static_cast<std::size_t>(i)],
                                  targets[static_cast<std::size_t>(i)]);
      for (std::size_t l = 0; l < g.weights.size(); ++l) {
        std::vector<double>& w = net.weights()[l];
        for (std::size_t k = 0; k < w.size(); ++k) {
          w[k] = w[k] * decay - step * g.weights[l][k];
        }
        std::vector<double>& b = net.biases()[l];
        for (std::size_t k = 0; k < b.size(); ++k) {
          b[k] -= step * g.biases[l][k];
        }
      }
    }
    for (const auto& w : net.weights()) {
      for (double x : w) {
        if (!std::isfinite(x)) {
          throw pipeline_error("training diverged at epoch " + std::to_string(epoch + 1) +
                               ": non-finite weight");
        }
      }
    }
  }
  (void)warnings;
  return net;
}

}  // namespace heretic
