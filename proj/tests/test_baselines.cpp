// The two comparison methods: a tree trained directly on the labels and a
// tree trained to imitate a network's predictions.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "heretic/baselines.hpp"
#include "heretic/eval.hpp"
#include "heretic/pipeline.hpp"
#include "test_support.hpp"

using namespace heretic;
using test_support::data_path;

namespace {

// Load a fixed-split dataset pair and carve a grow/prune split off the
// training part, exactly as the experiment driver does.
struct fixed_split {
  dataset grow, prune_part, test;
};

fixed_split load_monks(const std::string& train_csv, const std::string& test_csv,
                       double prune_fraction, std::uint64_t seed) {
  std::vector<feature_spec> schema = load_schema(data_path("monks.schema"));
  dataset raw_train = load_dataset(data_path(train_csv), schema);
  dataset raw_test = load_aligned(data_path(test_csv), raw_train);
  scaling_stats stats = compute_scaling(raw_train);
  dataset enc_train = encode(raw_train, stats);
  dataset enc_test = encode(raw_test, stats);
  std::vector<int> all(enc_train.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = int(i);
  auto [grow_idx, prune_idx] = train_prune_split(enc_train, all, prune_fraction, seed);
  return {subset(enc_train, grow_idx, "grow"), subset(enc_train, prune_idx, "prune"), enc_test};
}

}  // namespace

TEST_CASE("the direct tree recovers the simple third puzzle") {
  // The 122-instance training sample supports the two-literal rule that gets
  // 420 of the 432 grid points right; the pruned tree finds exactly that.
  fixed_split s = load_monks("monks3_train.csv", "monks3_test.csv", 0.2, 1);
  CHECK(s.grow.size() == 98);
  CHECK(s.prune_part.size() == 24);
  baseline_result res = c45_direct(s.grow, s.prune_part, s.test);
  REQUIRE(res.test_predictions.size() == 432);
  CHECK(accuracy(res.test_predictions, s.test.labels) ==
        doctest::Approx(420.0 / 432.0).epsilon(1e-12));
}

TEST_CASE("direct trees are deterministic given the same splits") {
  fixed_split s = load_monks("monks1_train.csv", "monks1_test.csv", 0.2, 9);
  baseline_result a = c45_direct(s.grow, s.prune_part, s.test);
  baseline_result b = c45_direct(s.grow, s.prune_part, s.test);
  CHECK(a.test_predictions == b.test_predictions);
  CHECK(a.tree.leaf_count() == b.tree.leaf_count());
}

TEST_CASE("a pure training sample yields a constant tree") {
  dataset grow = test_support::binary_dataset(2, {{0, 0}, {0, 1}, {1, 0}}, {1, 1, 1});
  dataset prune_part = test_support::binary_dataset(2, {{1, 1}}, {1});
  dataset test = test_support::binary_dataset(2, {{0, 0}, {1, 1}}, {0, 1});
  baseline_result res = c45_direct(grow, prune_part, test);
  CHECK(res.tree.leaf_count() == 1);
  CHECK(res.test_predictions == std::vector<int>{1, 1});
  // Accuracy equals the prevalence of the constant class in the test part.
  CHECK(accuracy(res.test_predictions, test.labels) == 0.5);
}

TEST_CASE("the imitation tree mimics the network, not the labels") {
  // Labels disagree with the network everywhere; the imitation tree must side
  // with the network.
  network net = test_support::and_network();
  dataset grow = test_support::and_dataset();
  for (int& label : grow.labels) label = 1 - label;  // anti-AND labels
  dataset prune_part = grow;
  dataset test = test_support::and_dataset();

  baseline_result res = trepan_lite(net, grow, prune_part, test);
  std::vector<int> net_pred = predict_all(net, test);
  CHECK(fidelity(res.test_predictions, net_pred) == 1.0);
  CHECK(accuracy(res.test_predictions, test.labels) == 1.0);  // net computes AND
}

TEST_CASE("a single-threshold network is recovered exactly") {
  dataset d;
  d.name = "thresh";
  d.schema = {{"x", feature_kind::real, {}}};
  for (int i = 0; i < 40; ++i) {
    double x = (i + 0.5) / 40.0;
    d.rows.push_back({x});
    d.labels.push_back(x > 0.5 ? 1 : 0);
  }
  d.classes = {"lo", "hi"};
  d.encoded = true;
  // One hidden unit firing above x = 0.5; outputs repeat and negate it.
  network net = network::from_parameters({1, 1, 2}, 100.0, {{1.0}, {-1.0, 1.0}},
                                         {{-0.5}, {0.5, -0.5}});
  std::vector<int> all(d.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = int(i);
  auto [grow_idx, prune_idx] = train_prune_split(d, all, 0.2, 7);
  baseline_result res = trepan_lite(net, subset(d, grow_idx, "grow"),
                                    subset(d, prune_idx, "prune"), d);
  CHECK(fidelity(res.test_predictions, predict_all(net, d)) == 1.0);
}

TEST_CASE("a constant network is trivially imitated") {
  // Biases push both hidden units high and output 0 wins regardless of input.
  network net = network::from_parameters({2, 1, 2}, 100.0, {{0.0, 0.0}, {0.0, 0.0}},
                                         {{1.0}, {1.0, -1.0}});
  dataset grow = test_support::xor_dataset();
  baseline_result res = trepan_lite(net, grow, grow, grow);
  CHECK(res.tree.leaf_count() == 1);
  std::vector<int> net_pred = predict_all(net, grow);
  CHECK(fidelity(res.test_predictions, net_pred) == 1.0);
}

TEST_CASE("real-column masks pick out scaled features") {
  dataset raw;
  raw.name = "mixed";
  raw.schema = {{"color", feature_kind::nominal, {"red", "green", "blue"}},
                {"flag", feature_kind::binary, {}},
                {"size", feature_kind::real, {}}};
  raw.rows = {{0, 1, 1.0}, {1, 0, 2.0}, {2, 1, 3.0}};
  raw.labels = {0, 1, 0};
  raw.classes = {"n", "y"};
  dataset enc = encode(raw);
  std::vector<bool> mask = real_columns(enc);
  CHECK(mask == std::vector<bool>{false, false, false, false, true});
}
