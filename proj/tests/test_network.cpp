// Forward pass, training, gradients, and serialization of the steep-sigmoid
// multilayer perceptron.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "heretic/eval.hpp"
#include "heretic/network.hpp"
#include "heretic/pipeline.hpp"
#include "test_support.hpp"

using namespace heretic;

TEST_CASE("steepened sigmoid hits its reference values") {
  CHECK(steep_sigmoid(0.0, 100.0) == 0.5);
  // sigma(5) and sigma(-10) computed independently to full double precision.
  CHECK(steep_sigmoid(0.05, 100.0) == doctest::Approx(0.9933071490757153).epsilon(1e-12));
  CHECK(steep_sigmoid(-0.1, 100.0) == doctest::Approx(4.5397868702434395e-05).epsilon(1e-12));
  CHECK(steep_sigmoid(0.5, 10.0) == doctest::Approx(0.9933071490757153).epsilon(1e-12));
}

TEST_CASE("extreme pre-activations saturate without overflowing") {
  double hi = steep_sigmoid(1e6, 100.0);
  double lo = steep_sigmoid(-1e6, 100.0);
  CHECK(hi == 1.0);
  CHECK(lo >= 0.0);
  CHECK(lo < 1e-300);
  CHECK(std::isfinite(hi));
  CHECK(std::isfinite(lo));
}

TEST_CASE("a steep unit approximates a hard step outside a narrow band") {
  // With steepness 100, any pre-activation at least 0.05 from zero lands
  // within 0.01 of the step function's value.
  for (double x = 0.05; x <= 2.0; x += 0.01) {
    CHECK(std::abs(steep_sigmoid(x, 100.0) - 1.0) < 0.01);
    CHECK(std::abs(steep_sigmoid(-x, 100.0) - 0.0) < 0.01);
  }
}

TEST_CASE("hand-wired AND gate produces saturated outputs") {
  network net = test_support::and_network();
  dataset d = test_support::and_dataset();
  for (int i = 0; i < 4; ++i) {
    std::vector<double> out = net.outputs(d.rows[std::size_t(i)]);
    REQUIRE(out.size() == 2);
    const bool positive = d.labels[std::size_t(i)] == 1;
    CHECK(out[1] == doctest::Approx(positive ? 1.0 : 0.0).epsilon(1e-9));
    CHECK(net.predict(d.rows[std::size_t(i)]) == d.labels[std::size_t(i)]);
  }
}

TEST_CASE("zero weights give exactly one half everywhere and ties go low") {
  network net = network::from_parameters({2, 3, 2}, 100.0,
                                         {std::vector<double>(6, 0.0), std::vector<double>(6, 0.0)},
                                         {std::vector<double>(3, 0.0), std::vector<double>(2, 0.0)});
  std::vector<double> row = {1.0, 0.0};
  activation_trace trace = net.forward(row);
  REQUIRE(trace.layers.size() == 3);
  for (double a : trace.layers[1]) CHECK(a == 0.5);
  for (double a : trace.layers[2]) CHECK(a == 0.5);
  CHECK(net.predict(row) == 0);
}

TEST_CASE("initialization is seed-deterministic and respects the steepness scale") {
  network_config cfg;
  cfg.layer_sizes = {4, 3, 2};
  cfg.steepness = 100.0;
  cfg.seed = 9;
  network a = network::initialize(cfg);
  network b = network::initialize(cfg);
  CHECK(a.weights() == b.weights());
  CHECK(a.biases() == b.biases());

  cfg.seed = 10;
  network c = network::initialize(cfg);
  CHECK(a.weights() != c.weights());

  // Draws live in U(-0.2, 0.2) / steepness.
  for (const auto& layer : a.weights()) {
    for (double w : layer) {
      CHECK(std::abs(w) <= 0.2 / cfg.steepness);
    }
  }
}

TEST_CASE("training with zero epochs returns the initialized network") {
  dataset d = test_support::xor_dataset();
  network_config cfg;
  cfg.layer_sizes = {2, 4, 2};
  cfg.epochs = 0;
  cfg.seed = 3;
  network trained = train(d, cfg);
  network fresh = network::initialize(cfg);
  CHECK(trained.weights() == fresh.weights());
  CHECK(trained.biases() == fresh.biases());
}

TEST_CASE("a small network learns exclusive-or exactly") {
  dataset d = test_support::xor_dataset();
  network_config cfg;
  cfg.layer_sizes = {2, 4, 2};
  cfg.steepness = 5.0;
  cfg.learning_rate = 0.1;
  cfg.epochs = 5000;
  cfg.weight_decay = 0.0;
  cfg.seed = 1;
  network net = train(d, cfg);
  CHECK(accuracy(predict_all(net, d), d.labels) == 1.0);
}

TEST_CASE("training is deterministic given the configuration") {
  dataset d = test_support::xor_dataset();
  network_config cfg;
  cfg.layer_sizes = {2, 3, 2};
  cfg.steepness = 5.0;
  cfg.learning_rate = 0.05;
  cfg.epochs = 40;
  cfg.seed = 11;
  network a = train(d, cfg);
  network b = train(d, cfg);
  CHECK(a.weights() == b.weights());
  CHECK(a.biases() == b.biases());
}

TEST_CASE("analytic gradients match central finite differences") {
  rng r(404);
  for (int trial = 0; trial < 10; ++trial) {
    const int in_w = 2 + int(r.below(3));
    const int hid = 2 + int(r.below(3));
    const int out_w = 2;
    network_config cfg;
    cfg.layer_sizes = {in_w, hid, out_w};
    cfg.steepness = 2.0;
    cfg.seed = r.next_u64();
    network net = network::initialize(cfg);
    // Perturb the tiny init so gradients are not near zero.
    for (auto& layer : net.weights()) {
      for (double& w : layer) w += r.uniform(-0.5, 0.5);
    }
    std::vector<double> input(std::size_t(in_w));
    for (double& v : input) v = r.uniform();
    std::vector<double> target(std::size_t(out_w));
    for (double& v : target) v = r.uniform() < 0.5 ? 0.0 : 1.0;

    gradients g = loss_gradient(net, input, target);
    const double h = 1e-5;
    for (std::size_t l = 0; l < net.weights().size(); ++l) {
      for (std::size_t k = 0; k < net.weights()[l].size(); ++k) {
        double saved = net.weights()[l][k];
        net.weights()[l][k] = saved + h;
        double up = sse_loss(net, input, target);
        net.weights()[l][k] = saved - h;
        double down = sse_loss(net, input, target);
        net.weights()[l][k] = saved;
        double numeric = (up - down) / (2.0 * h);
        double denom = std::max(std::abs(numeric), std::abs(g.weights[l][k]));
        if (denom < 1e-8) continue;  // both sides vanish
        CHECK(std::abs(numeric - g.weights[l][k]) / denom <= 1e-4);
      }
    }
  }
}

TEST_CASE("serialization round-trips bit for bit") {
  dataset d = test_support::xor_dataset();
  network_config cfg;
  cfg.layer_sizes = {2, 3, 2};
  cfg.steepness = 7.5;
  cfg.epochs = 20;
  cfg.seed = 21;
  network net = train(d, cfg);

  std::stringstream buf;
  net.save(buf);
  network back = network::load(buf);
  CHECK(back.layer_sizes() == net.layer_sizes());
  CHECK(back.steepness() == net.steepness());
  CHECK(back.weights() == net.weights());
  CHECK(back.biases() == net.biases());

  std::string dir = test_support::scratch_dir("net_io");
  std::string path = dir + "/net.txt";
  net.save_file(path);
  network from_file = network::load_file(path);
  CHECK(from_file.weights() == net.weights());
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed network files are rejected") {
  std::stringstream junk("not a network at all");
  CHECK_THROWS_AS(network::load(junk), data_error);
  CHECK_THROWS_AS(network::load_file("/nonexistent/net.txt"), data_error);
}

TEST_CASE("configuration validation catches impossible settings") {
  network_config cfg;
  cfg.layer_sizes = {2};
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg.layer_sizes = {2, 0, 2};
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg.layer_sizes = {2, 3, 2};
  cfg.steepness = 0.0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg.steepness = 100.0;
  cfg.learning_rate = -1.0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg.learning_rate = 0.002;
  cfg.epochs = -1;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg.epochs = 1;
  cfg.weight_decay = -0.1;
  CHECK_THROWS_AS(cfg.validate(), config_error);
}

TEST_CASE("training rejects mismatched data") {
  dataset d = test_support::xor_dataset();
  network_config cfg;
  cfg.layer_sizes = {3, 2, 2};  // dataset is 2 wide
  CHECK_THROWS_AS(train(d, cfg), config_error);

  cfg.layer_sizes = {2, 2, 3};  // dataset has 2 classes
  CHECK_THROWS_AS(train(d, cfg), config_error);

  dataset raw = d;
  raw.encoded = false;
  cfg.layer_sizes = {2, 2, 2};
  CHECK_THROWS_AS(train(raw, cfg), data_error);
}

TEST_CASE("forward pass rejects rows of the wrong width") {
  network net = test_support::and_network();
  std::vector<double> narrow = {1.0};
  CHECK_THROWS_AS(net.outputs(narrow), data_error);
}

TEST_CASE("from_parameters validates shapes") {
  CHECK_THROWS_AS(network::from_parameters({2, 2}, 100.0, {{1.0}}, {{0.0, 0.0}}), config_error);
}
