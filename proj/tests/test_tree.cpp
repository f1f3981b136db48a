// Decision-tree induction with the gain-ratio criterion, reduced-error
// pruning, and prediction routing.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "heretic/eval.hpp"
#include "heretic/tree.hpp"
#include "test_support.hpp"

using namespace heretic;

namespace {

split_test binary_split(int feature) {
  split_test t;
  t.feature = feature;
  return t;
}

// Root at A, low child a leaf, high child split on B with two leaves:
//   A = 0          -> class 0
//   A = 1 && B = 0 -> class 1
//   A = 1 && B = 1 -> class 1
decision_tree two_level_tree() {
  decision_tree t;
  t.label_count = 2;
  t.nodes.resize(5);
  t.nodes[0].leaf = false;
  t.nodes[0].test = binary_split(0);
  t.nodes[0].lo = 1;
  t.nodes[0].hi = 2;
  t.nodes[1].leaf = true;
  t.nodes[1].label = 0;
  t.nodes[2].leaf = false;
  t.nodes[2].test = binary_split(1);
  t.nodes[2].lo = 3;
  t.nodes[2].hi = 4;
  t.nodes[3].leaf = true;
  t.nodes[3].label = 1;
  t.nodes[4].leaf = true;
  t.nodes[4].label = 1;
  t.root = 0;
  return t;
}

}  // namespace

TEST_CASE("gain ratio of a perfectly separating split is one") {
  std::vector<std::vector<double>> X = {{0}, {0}, {1}, {1}};
  std::vector<int> y = {0, 0, 1, 1};
  CHECK(gain_ratio(X, y, 2, binary_split(0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gain ratio of an uninformative split is zero") {
  std::vector<std::vector<double>> X = {{0}, {0}, {1}, {1}};
  std::vector<int> y = {0, 1, 0, 1};
  CHECK(gain_ratio(X, y, 2, binary_split(0)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gain ratio matches a hand-computed mixed split") {
  // Eight rows, two positive. Splitting in half isolates both positives on
  // one side: entropy drops from H(1/4) = 0.811278... to 0.5, and the even
  // split carries split information exactly 1, so the ratio equals the gain.
  std::vector<std::vector<double>> X = {{0}, {0}, {0}, {0}, {1}, {1}, {1}, {1}};
  std::vector<int> y = {1, 1, 0, 0, 0, 0, 0, 0};
  CHECK(gain_ratio(X, y, 2, binary_split(0)) ==
        doctest::Approx(0.31127812445913283).epsilon(1e-12));
}

TEST_CASE("gain ratio validates its inputs") {
  std::vector<std::vector<double>> X = {{0}};
  std::vector<int> y = {0, 1};
  CHECK_THROWS_AS(gain_ratio(X, y, 2, binary_split(0)), data_error);
  CHECK_THROWS_AS(gain_ratio({}, {}, 2, binary_split(0)), data_error);
  std::vector<std::vector<double>> X2 = {{0}, {1}};
  std::vector<int> y2 = {0, 1};
  CHECK_THROWS_AS(gain_ratio(X2, y2, 2, binary_split(3)), data_error);
}

TEST_CASE("induction fits a learnable function exactly") {
  dataset d = test_support::and_dataset();
  std::vector<bool> real_mask(2, false);
  decision_tree t = induce(d.rows, d.labels, real_mask, 2, 1);
  for (int i = 0; i < 4; ++i) {
    CHECK(tree_predict(t, d.rows[std::size_t(i)]) == d.labels[std::size_t(i)]);
  }
  CHECK(t.depth() <= 2);
  CHECK(t.leaf_count() <= 3);
}

TEST_CASE("a pure sample collapses to a single leaf") {
  std::vector<std::vector<double>> X = {{0, 1}, {1, 0}, {1, 1}};
  std::vector<int> y = {1, 1, 1};
  decision_tree t = induce(X, y, {false, false}, 2, 1);
  CHECK(t.leaf_count() == 1);
  CHECK(t.depth() == 0);
  CHECK(t.nodes[std::size_t(t.root)].label == 1);
  CHECK(t.nodes[std::size_t(t.root)].support == 3);
}

TEST_CASE("constant features leave only the majority leaf") {
  std::vector<std::vector<double>> X = {{1, 0}, {1, 0}, {1, 0}};
  std::vector<int> y = {0, 1, 0};
  decision_tree t = induce(X, y, {false, false}, 2, 1);
  CHECK(t.leaf_count() == 1);
  CHECK(t.nodes[std::size_t(t.root)].label == 0);
}

TEST_CASE("minimum leaf size blocks splits that isolate single rows") {
  dataset d = test_support::xor_dataset();
  std::vector<bool> real_mask(2, false);
  // Exclusive-or needs two levels; with min_leaf = 2 the second level would
  // create single-row leaves, and the first level alone carries no gain.
  decision_tree t = induce(d.rows, d.labels, real_mask, 2, 2);
  CHECK(t.leaf_count() == 1);
  // With min_leaf = 1 the function is representable and learned exactly.
  decision_tree full = induce(d.rows, d.labels, real_mask, 2, 1);
  for (int i = 0; i < 4; ++i) {
    CHECK(tree_predict(full, d.rows[std::size_t(i)]) == d.labels[std::size_t(i)]);
  }
}

TEST_CASE("threshold splits route on the boundary toward the low branch") {
  std::vector<std::vector<double>> X = {{0.1}, {0.2}, {0.8}, {0.9}};
  std::vector<int> y = {0, 0, 1, 1};
  decision_tree t = induce(X, y, {true}, 2, 1);
  REQUIRE(!t.empty());
  const tree_node& root = t.nodes[std::size_t(t.root)];
  REQUIRE(!root.leaf);
  CHECK(root.test.is_threshold);
  // Candidate thresholds are midpoints between adjacent observed values.
  CHECK(root.test.threshold == doctest::Approx(0.5));
  std::vector<double> at_threshold = {root.test.threshold};
  CHECK(tree_predict(t, at_threshold) == 0);
  std::vector<double> above = {root.test.threshold + 1e-9};
  CHECK(tree_predict(t, above) == 1);
}

TEST_CASE("induction learns any consistent labeling of a small grid") {
  rng r(77);
  for (int trial = 0; trial < 20; ++trial) {
    // All 16 rows over 4 binary features, labels drawn from a random function.
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    for (int bits = 0; bits < 16; ++bits) {
      X.push_back({double(bits & 1), double(bits >> 1 & 1), double(bits >> 2 & 1),
                   double(bits >> 3 & 1)});
      y.push_back(int(r.below(2)));
    }
    if (std::all_of(y.begin(), y.end(), [&](int v) { return v == y[0]; })) continue;
    decision_tree t = induce(X, y, std::vector<bool>(4, false), 2, 1);
    for (std::size_t i = 0; i < X.size(); ++i) {
      CHECK(tree_predict(t, X[i]) == y[i]);
    }
  }
}

TEST_CASE("induction is deterministic") {
  dataset d = test_support::xor_dataset();
  std::vector<bool> real_mask(2, false);
  decision_tree a = induce(d.rows, d.labels, real_mask, 2, 1);
  decision_tree b = induce(d.rows, d.labels, real_mask, 2, 1);
  CHECK(tree_to_text(a, {"a", "b"}, {"neg", "pos"}) == tree_to_text(b, {"a", "b"}, {"neg", "pos"}));
}

TEST_CASE("pruning never increases error on the pruning rows") {
  rng r(123);
  // Noisy labels force an overfit tree; prune on a disjoint noisy sample.
  std::vector<std::vector<double>> grow_X, prune_X;
  std::vector<int> grow_y, prune_y;
  for (int i = 0; i < 120; ++i) {
    std::vector<double> row = {double(r.below(2)), double(r.below(2)), double(r.below(2)),
                               double(r.below(2))};
    int label = (row[0] == 1.0) ? 1 : 0;
    if (r.uniform() < 0.25) label = 1 - label;
    if (i < 80) {
      grow_X.push_back(row);
      grow_y.push_back(label);
    } else {
      prune_X.push_back(row);
      prune_y.push_back(label);
    }
  }
  decision_tree t = induce(grow_X, grow_y, std::vector<bool>(4, false), 2, 1);
  decision_tree pruned = prune(t, prune_X, prune_y);

  auto errors = [&](const decision_tree& tree) {
    int e = 0;
    for (std::size_t i = 0; i < prune_X.size(); ++i) {
      e += tree_predict(tree, prune_X[i]) != prune_y[i];
    }
    return e;
  };
  CHECK(errors(pruned) <= errors(t));
  CHECK(pruned.leaf_count() <= t.leaf_count());

  // Pruning again changes nothing.
  decision_tree again = prune(pruned, prune_X, prune_y);
  CHECK(again.leaf_count() == pruned.leaf_count());
  CHECK(errors(again) == errors(pruned));
}

TEST_CASE("pruning collapses structure the pruning rows never justify") {
  // The grow sample fits noise on feature 1; the prune sample shows only
  // feature 0 matters, so the noise subtree folds away.
  std::vector<std::vector<double>> grow_X = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  std::vector<int> grow_y = {0, 1, 1, 1};
  decision_tree t = induce(grow_X, grow_y, {false, false}, 2, 1);
  std::vector<std::vector<double>> prune_X = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  std::vector<int> prune_y = {0, 0, 1, 1};
  decision_tree pruned = prune(t, prune_X, prune_y);
  CHECK(pruned.leaf_count() < t.leaf_count());
  for (std::size_t i = 0; i < prune_X.size(); ++i) {
    CHECK(tree_predict(pruned, prune_X[i]) == prune_y[i]);
  }
}

TEST_CASE("an empty pruning set leaves the tree unchanged and warns") {
  dataset d = test_support::and_dataset();
  decision_tree t = induce(d.rows, d.labels, {false, false}, 2, 1);
  warning_list warnings;
  decision_tree same = prune(t, {}, {}, &warnings);
  CHECK(same.leaf_count() == t.leaf_count());
  CHECK(!warnings.empty());
}

TEST_CASE("prediction routes every input to exactly one leaf") {
  decision_tree t = two_level_tree();
  CHECK(tree_predict(t, std::vector<double>{0.0, 0.0}) == 0);
  CHECK(tree_predict(t, std::vector<double>{0.0, 1.0}) == 0);
  CHECK(tree_predict(t, std::vector<double>{1.0, 0.0}) == 1);
  CHECK(tree_predict(t, std::vector<double>{1.0, 1.0}) == 1);
}

TEST_CASE("degenerate inputs raise descriptive errors") {
  CHECK_THROWS_AS(induce({}, {}, {}, 2, 1), data_error);
  std::vector<std::vector<double>> X = {{0}, {1}};
  std::vector<int> y = {0, 1};
  CHECK_THROWS_AS(induce(X, y, {false}, 1, 1), data_error);
  CHECK_THROWS_AS(induce(X, y, {false}, 2, 0), config_error);
  CHECK_THROWS_AS(induce(X, y, {false, false}, 2, 1), data_error);  // mask width

  decision_tree empty;
  CHECK_THROWS_AS(tree_predict(empty, std::vector<double>{0.0}), data_error);
  CHECK_THROWS_AS(prune(empty, X, y), data_error);
}

TEST_CASE("rendered trees name their features and labels") {
  dataset d = test_support::and_dataset();
  decision_tree t = induce(d.rows, d.labels, {false, false}, 2, 1);
  std::string text = tree_to_text(t, {"a", "b"}, {"neg", "pos"});
  CHECK(text.find("a") != std::string::npos);
  CHECK(text.find("pos") != std::string::npos);
  CHECK(text.find("neg") != std::string::npos);
}
