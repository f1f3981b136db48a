#include "heretic/baselines.hpp"

namespace heretic {
namespace {

void check_schemas(const dataset& a, const dataset& b, const char* what) {
  if (a.width() != b.width() || a.classes.size() != b.classes.size()) {
    throw data_error(std::string(what) + ": datasets disagree on schema or classes");
  }
}

}  // namespace

std::vector<bool> real_columns(const dataset& encoded) {
  std::vector<bool> mask(encoded.width(), false);
  for (std::size_t c = 0; c < encoded.width(); ++c) {
    mask[c] = encoded.schema[c].kind == feature_kind::real;
  }
  return mask;
}

baseline_result c45_direct(const dataset& grow, const dataset& prune_part,
                           const dataset& test, int min_leaf, warning_list* warnings) {
  check_schemas(grow, prune_part, "c45_direct");
  check_schemas(grow, test, "c45_direct");
  const int label_count = static_cast<int>(grow.classes.size());
  decision_tree t =
      induce(grow.rows, grow.labels, real_columns(grow), label_count, min_leaf);
  t = prune(t, prune_part.rows, prune_part.labels, warnings);

  baseline_result res;
  res.test_predictions.reserve(test.size());
  for (const auto& row : test.rows) {
    res.test_predictions.push_back(tree_predict(t, row));
  }
  res.tree = std::move(t);
  return res;
}

baseline_result trepan_lite(const network& net, const dataset& grow,
                            const dataset& prune_part, const dataset& test,
                            int min_leaf, warning_list* warnings) {
  check_schemas(grow, prune_part, "trepan_lite");
  check_schemas(grow, test, "trepan_lite");
  if (static_cast<int>(grow.width()) != net.input_width()) {
    throw data_error("trepan_lite: dataset width does not match the network input");
  }
  const int label_count = net.output_width();

  auto net_labels = [&](const dataset& d) {
    std::vector<int> labels;
    labels.reserve(d.size());
    for (const auto& row : d.rows) labels.push_back(net.predict(row));
    return labels;
  };

  decision_tree t =
      induce(grow.rows, net_labels(grow), real_columns(grow), label_count, min_leaf);
  t = prune(t, prune_part.rows, net_labels(prune_part), warnings);

  baseline_result res;
  res.test_predictions.reserve(test.size());
  for (const auto& row : test.rows) {
    res.test_predictions.push_back(tree_predict(t, row));
  }
  res.tree = std::move(t);
  return res;
}

}  // namespace heretic
