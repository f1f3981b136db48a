#include "heretic/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>

namespace heretic {
namespace {

double entropy(const std::vector<int>& counts, int total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (int c : counts) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

bool goes_high(const split_test& test, double v) {
  return test.is_threshold ? v > test.threshold : v == 1.0;
}

struct split_eval {
  double ratio = 0.0;
  int n_lo = 0;
  int n_hi = 0;
};

split_eval evaluate_split(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                          const std::vector<int>& idx, int label_count,
                          const split_test& test) {
  std::vector<int> lo_counts(static_cast<std::size_t>(label_count), 0);
  std::vector<int> hi_counts(static_cast<std::size_t>(label_count), 0);
  std::vector<int> all_counts(static_cast<std::size_t>(label_count), 0);
  int n_lo = 0, n_hi = 0;
  for (int i : idx) {
    const double v = X[static_cast<std::size_t>(i)][static_cast<std::size_t>(test.feature)];
    const int label = y[static_cast<std::size_t>(i)];
    all_counts[static_cast<std::size_t>(label)]++;
    if (goes_high(test, v)) {
      hi_counts[static_cast<std::size_t>(label)]++;
      ++n_hi;
    } else {
      lo_counts[static_cast<std::size_t>(label)]++;
      ++n_lo;
    }
  }
  split_eval ev;
  ev.n_lo = n_lo;
  ev.n_hi = n_hi;
  if (n_lo == 0 || n_hi == 0) return ev;  // no separation: ratio stays 0
  const int n = n_lo + n_hi;
  const double p_lo = static_cast<double>(n_lo) / n;
  const double p_hi = static_cast<double>(n_hi) / n;
  const double gain = entropy(all_counts, n) -
                      (p_lo * entropy(lo_counts, n_lo) + p_hi * entropy(hi_counts, n_hi));
  const double split_info = -(p_lo * std::log2(p_lo) + p_hi * std::log2(p_hi));
  if (gain <= 0.0 || split_info <= 0.0) return ev;
  ev.ratio = gain / split_info;
  return ev;
}

int majority(const std::vector<int>& counts) {
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

struct builder {
  const std::vector<std::vector<double>>& X;
  const std::vector<int>& y;
  const std::vector<bool>& real_mask;
  int label_count;
  int min_leaf;
  decision_tree tree;

  int make_leaf(int label, int support) {
    tree.nodes.push_back({true, label, support, {}, -1, -1});
    return static_cast<int>(tree.nodes.size()) - 1;
  }

  int build(std::vector<int>& idx) {
    std::vector<int> counts(static_cast<std::size_t>(label_count), 0);
    for (int i : idx) counts[static_cast<std::size_t>(y[static_cast<std::size_t>(i)])]++;
    const int node_label = majority(counts);
    const int support = static_cast<int>(idx.size());

    const bool pure =
        std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) <= 1;
    if (pure || support < 2 * min_leaf) return make_leaf(node_label, support);

    // Best split: strictly greater ratio wins, so the lowest feature index and
    // then the lowest threshold is kept on ties.
    split_test best;
    double best_ratio = 0.0;
    const std::size_t width = X[static_cast<std::size_t>(idx[0])].size();
    for (std::size_t f = 0; f < width; ++f) {
      if (real_mask[f]) {
        std::vector<double> vals;
        vals.reserve(idx.size());
        for (int i : idx) vals.push_back(X[static_cast<std::size_t>(i)][f]);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
          split_test t{static_cast<int>(f), true, (vals[k] + vals[k + 1]) / 2.0};
          split_eval ev = evaluate_split(X, y, idx, label_count, t);
          if (ev.n_lo < min_leaf || ev.n_hi < min_leaf) continue;
          if (ev.ratio > best_ratio) {
            best_ratio = ev.ratio;
            best = t;
          }
        }
      } else {
        split_test t{static_cast<int>(f), false, 0.0};
        split_eval ev = evaluate_split(X, y, idx, label_count, t);
        if (ev.n_lo < min_leaf || ev.n_hi < min_leaf) continue;
        if (ev.ratio > best_ratio) {
          best_ratio = ev.ratio;
          best = t;
        }
      }
    }
    if (best.feature < 0) return make_leaf(node_label, support);

    std::vector<int> lo_idx, hi_idx;
    for (int i : idx) {
      const double v = X[static_cast<std::size_t>(i)][static_cast<std::size_t>(best.feature)];
      (goes_high(best, v) ? hi_idx : lo_idx).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();
    const int lo = build(lo_idx);
    const int hi = build(hi_idx);
    tree.nodes.push_back({false, node_label, support, best, lo, hi});
    return static_cast<int>(tree.nodes.size()) - 1;
  }
};

}  // namespace

int decision_tree::leaf_count() const {
  int n = 0;
  for (const tree_node& node : nodes) {
    if (node.leaf) ++n;
  }
  return n;
}

int decision_tree::depth() const {
  if (root < 0) return 0;
  std::function<int(int)> rec = [&](int id) -> int {
    const tree_node& node = nodes[static_cast<std::size_t>(id)];
    if (node.leaf) return 0;
    return 1 + std::max(rec(node.lo), rec(node.hi));
  };
  return rec(root);
}

double gain_ratio(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                  int label_count, const split_test& test) {
  if (X.size() != y.size()) throw data_error("gain_ratio: row/label count mismatch");
  if (X.empty()) throw data_error("gain_ratio: no rows");
  if (test.feature < 0 || static_cast<std::size_t>(test.feature) >= X[0].size()) {
    throw data_error("gain_ratio: feature index out of range");
  }
  std::vector<int> idx(X.size());
  std::iota(idx.begin(), idx.end(), 0);
  return evaluate_split(X, y, idx, label_count, test).ratio;
}

decision_tree induce(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                     const std::vector<bool>& real_mask, int label_count, int min_leaf) {
  if (X.empty()) throw data_error("cannot induce a tree from zero rows");
  if (X.size() != y.size()) throw data_error("tree induction: row/label count mismatch");
  if (real_mask.size() != X[0].size()) {
    throw data_error("tree induction: real-feature mask width mismatch");
  }
  if (label_count < 2) throw data_error("tree induction needs at least two labels");
  if (min_leaf < 1) throw config_error("min_leaf must be at least 1");
  for (int label : y) {
    if (label < 0 || label >= label_count) {
      throw data_error("tree induction: label out of range");
    }
  }
  builder b{X, y, real_mask, label_count, min_leaf, {}};
  b.tree.label_count = label_count;
  std::vector<int> idx(X.size());
  std::iota(idx.begin(), idx.end(), 0);
  b.tree.root = b.build(idx);
  return b.tree;
}

decision_tree prune(const decision_tree& t, const std::vector<std::vector<double>>& prune_X,
                    const std::vector<int>& prune_y, warning_list* warnings) {
  if (t.root < 0) throw data_error("cannot prune an empty tree");
  if (prune_X.size() != prune_y.size()) throw data_error("prune: row/label count mismatch");
  if (prune_X.empty()) {
    warn(warnings, "prune", "empty pruning set; tree left unpruned");
    return t;
  }

  decision_tree out;
  out.label_count = t.label_count;

  // Post-order walk. Children decide first; a node then compares its
  // as-a-leaf error against the pruned subtree error on the rows routed to it.
  // Returns {node id in out, prune error of the kept subtree}.
  std::function<std::pair<int, int>(int, const std::vector<int>&)> rec =
      [&](int id, const std::vector<int>& idx) -> std::pair<int, int> {
    const tree_node& node = t.nodes[static_cast<std::size_t>(id)];
    int leaf_err = 0;
    for (int i : idx) {
      if (prune_y[static_cast<std::size_t>(i)] != node.label) ++leaf_err;
    }
    if (node.leaf) {
      out.nodes.push_back({true, node.label, node.support, {}, -1, -1});
      return {static_cast<int>(out.nodes.size()) - 1, leaf_err};
    }
    std::vector<int> lo_idx, hi_idx;
    for (int i : idx) {
      const double v =
          prune_X[static_cast<std::size_t>(i)][static_cast<std::size_t>(node.test.feature)];
      (goes_high(node.test, v) ? hi_idx : lo_idx).push_back(i);
    }
    auto [lo_id, lo_err] = rec(node.lo, lo_idx);
    auto [hi_id, hi_err] = rec(node.hi, hi_idx);
    const int subtree_err = lo_err + hi_err;
    if (leaf_err <= subtree_err) {
      // Drop the freshly built children; the collapse supersedes them.
      out.nodes.push_back({true, node.label, node.support, {}, -1, -1});
      return {static_cast<int>(out.nodes.size()) - 1, leaf_err};
    }
    out.nodes.push_back({false, node.label, node.support, node.test, lo_id, hi_id});
    return {static_cast<int>(out.nodes.size()) - 1, subtree_err};
  };

  std::vector<int> idx(prune_X.size());
  std::iota(idx.begin(), idx.end(), 0);
  out.root = rec(t.root, idx).first;

  // Compact: drop nodes orphaned by collapses.
  decision_tree compact;
  compact.label_count = out.label_count;
  std::function<int(int)> copy_rec = [&](int id) -> int {
    const tree_node& node = out.nodes[static_cast<std::size_t>(id)];
    if (node.leaf) {
      compact.nodes.push_back(node);
    } else {
      const int lo = copy_rec(node.lo);
      const int hi = copy_rec(node.hi);
      compact.nodes.push_back({false, node.label, node.support, node.test, lo, hi});
    }
    return static_cast<int>(compact.nodes.size()) - 1;
  };
  compact.root = copy_rec(out.root);
  return compact;
}

int tree_predict(const decision_tree& t, std::span<const double> row) {
  if (t.root < 0) throw data_error("cannot predict with an empty tree");
  int id = t.root;
  while (true) {
    const tree_node& node = t.nodes[static_cast<std::size_t>(id)];
    if (node.leaf) return node.label;
    if (node.test.feature < 0 || static_cast<std::size_t>(node.test.feature) >= row.size()) {
      throw data_error("tree references a feature outside the row width");
    }
    id = goes_high(node.test, row[static_cast<std::size_t>(node.test.feature)]) ? node.hi
                                                                                : node.lo;
  }
}

std::string tree_to_text(const decision_tree& t, const std::vector<std::string>& feature_names,
                         const std::vector<std::string>& label_names) {
  std::ostringstream out;
  std::function<void(int, int)> rec = [&](int id, int depth) {
    const tree_node& node = t.nodes[static_cast<std::size_t>(id)];
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    if (node.leaf) {
      out << pad << "-> " << label_names[static_cast<std::size_t>(node.label)] << "  ["
          << node.support << "]\n";
      return;
    }
    const std::string& name = feature_names[static_cast<std::size_t>(node.test.feature)];
    if (node.test.is_threshold) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%g", node.test.threshold);
      out << pad << name << " <= " << buf << ":\n";
      rec(node.lo, depth + 1);
      out << pad << name << " > " << buf << ":\n";
      rec(node.hi, depth + 1);
    } else {
      out << pad << name << " = 0:\n";
      rec(node.lo, depth + 1);
      out << pad << name << " = 1:\n";
      rec(node.hi, depth + 1);
    }
  };
  if (t.root >= 0) rec(t.root, 0);
  return out.str();
}

}  // namespace heretic
