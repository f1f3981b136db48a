#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "heretic/common.hpp"
#include "heretic/dataset.hpp"

namespace heretic {

// Logistic sigmoid with steepness m: sigma(m * x), with the exponent clamped
// so extreme pre-activations saturate instead of overflowing.
inline double steep_sigmoid(double x, double steepness) {
  double z = steepness * x;
  if (z > 700.0) z = 700.0;
  if (z < -700.0) z = -700.0;
  return 1.0 / (1.0 + std::exp(-z));
}

struct network_config {
  std::vector<int> layer_sizes;  // input, hidden..., output unit counts
  double steepness = 100.0;
  double learning_rate = 0.002;
  int epochs = 200;
  double weight_decay = 1e-4;
  std::uint64_t seed = 1;

  void validate() const;
};

struct activation_trace {
  // layers[0] is the input row; layers.back() the output activations.
  std::vector<std::vector<double>> layers;
};

struct gradients {
  // Same shapes as the network parameters; weights[l] is row-major
  // (fan-in x fan-out) for the connection layer l -> l+1.
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

class network {
 public:
  network() = default;

  // Seeded weight initialization, no training. Weights and biases are drawn
  // from U(-0.2, 0.2) scaled by 1/steepness so initial pre-activation sums
  // land in the responsive band of the steep sigmoid.
  static network initialize(const network_config& cfg);

  int layer_count() const { return static_cast<int>(sizes_.size()); }
  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_width() const { return sizes_.front(); }
  int output_width() const { return sizes_.back(); }
  double steepness() const { return steepness_; }

  activation_trace forward(std::span<const double> input) const;
  std::vector<double> outputs(std::span<const double> input) const;
  int predict(std::span<const double> input) const;  // argmax, ties to lower index

  // Parameter access (weights[l]: sizes_[l] x sizes_[l+1], row-major).
  std::vector<std::vector<double>>& weights() { return weights_; }
  const std::vector<std::vector<double>>& weights() const { return weights_; }
  std::vector<std::vector<double>>& biases() { return biases_; }
  const std::vector<std::vector<double>>& biases() const { return biases_; }

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static network load(std::istream& in);
  static network load_file(const std::string& path);

  static network from_parameters(std::vector<int> sizes, double steepness,
                                 std::vector<std::vector<double>> weights,
                                 std::vector<std::vector<double>> biases);

 private:
  std::vector<int> sizes_;
  double steepness_ = 100.0;
  std::vector<std::vector<double>> weights_;
  std::vector<std::vector<double>> biases_;
};

// Sum-of-squared-errors loss for one instance: sum_a (t_a - y_a)^2.
double sse_loss(const network& net, std::span<const double> input,
                std::span<const double> target);

// Exact analytic gradient of sse_loss with respect to every weight and bias.
gradients loss_gradient(const network& net, std::span<const double> input,
                        std::span<const double> target);

// Per-instance stochastic gradient descent over shuffled epochs. Each update
// steps by learning_rate / steepness along the analytic gradient; the
// steepness factor carried by the gradient cancels, so the effective step
// matches a unit-steepness network trained at learning_rate * steepness.
// Weight decay multiplies weights by (1 - learning_rate * weight_decay)
// before each update.
network train(const dataset& encoded, const network_config& cfg,
              warning_list* warnings = nullptr);

}  // namespace heretic
