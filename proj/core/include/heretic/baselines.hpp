#pragma once

#include <vector>

#include "heretic/dataset.hpp"
#include "heretic/network.hpp"
#include "heretic/tree.hpp"

namespace heretic {

struct baseline_result {
  decision_tree tree;
  std::vector<int> test_predictions;
};

// Decision tree trained directly on the data labels: induced on the grow
// part, reduced-error pruned on the prune part, evaluated on the test part.
// All three datasets must share the (encoded) schema.
baseline_result c45_direct(const dataset& grow, const dataset& prune_part,
                           const dataset& test, int min_leaf = 2,
                           warning_list* warnings = nullptr);

// Network-mimicking tree: the same induction, but every training label is
// replaced by the network's prediction, so the tree approximates the network
// as a whole rather than the data.
baseline_result trepan_lite(const network& net, const dataset& grow,
                            const dataset& prune_part, const dataset& test,
                            int min_leaf = 2, warning_list* warnings = nullptr);

std::vector<bool> real_columns(const dataset& encoded);

}  // namespace heretic
