#pragma once

#include <span>
#include <string>
#include <vector>

#include "heretic/common.hpp"

namespace heretic {

// A split routes rows by one feature: binary features compare against 1,
// real features against a threshold (<= goes low, > goes high).
struct split_test {
  int feature = -1;
  bool is_threshold = false;
  double threshold = 0.0;
};

struct tree_node {
  bool leaf = true;
  int label = 0;    // majority label of the training rows that reached here
  int support = 0;  // training row count at this node
  split_test test;
  int lo = -1;  // child for value 0 / value <= threshold
  int hi = -1;  // child for value 1 / value > threshold
};

struct decision_tree {
  std::vector<tree_node> nodes;
  int root = -1;
  int label_count = 2;

  bool empty() const { return root < 0; }
  int leaf_count() const;
  int depth() const;
};

// Information-gain ratio (base-2) of a candidate split over the given rows.
// Returns 0 when the split does not separate the rows.
double gain_ratio(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                  int label_count, const split_test& test);

// Greedy top-down induction. real_mask flags which feature columns carry real
// values (threshold splits); all other columns are treated as binary. Splits
// leaving a child with fewer than min_leaf rows are not considered; growth
// stops when no candidate has positive gain ratio.
decision_tree induce(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                     const std::vector<bool>& real_mask, int label_count, int min_leaf = 2);

// Reduced-error pruning: replace a subtree by its majority leaf whenever that
// does not increase error on the pruning rows. An empty pruning set leaves the
// tree unchanged and emits a warning.
decision_tree prune(const decision_tree& t, const std::vector<std::vector<double>>& prune_X,
                    const std::vector<int>& prune_y, warning_list* warnings = nullptr);

int tree_predict(const decision_tree& t, std::span<const double> row);

std::string tree_to_text(const decision_tree& t, const std::vector<std::string>& feature_names,
                         const std::vector<std::string>& label_names);

}  // namespace heretic
