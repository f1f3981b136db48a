#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heretic/common.hpp"

namespace heretic {

enum class feature_kind { binary, nominal, real };

struct feature_spec {
  std::string name;
  feature_kind kind = feature_kind::binary;
  std::vector<std::string> values;  // nominal levels, in first-seen or declared order
  // Filled by encode() on derived columns so downstream stages can group
  // one-hot blocks back into their source feature.
  int source = -1;        // index of the originating raw column, -1 if none
  int source_value = -1;  // which nominal level this one-hot column stands for
};

// Rows are stored numerically: binary as 0/1, nominal as the level index into
// feature_spec::values, real as the raw value. Labels are class indices.
struct dataset {
  std::string name;
  std::vector<feature_spec> schema;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::vector<std::string> classes;
  bool encoded = false;

  std::size_t size() const { return rows.size(); }
  std::size_t width() const { return schema.size(); }
  std::vector<int> class_counts() const;
  int majority_class() const;  // ties broken toward the lower class index
  void check_invariants() const;
};

struct load_options {
  bool header = true;
  // Class column selector: empty means last column; otherwise a column name
  // (requires a header) or a 0-based index written as "#k".
  std::string class_column;
  std::string dataset_name;
};

// Schema files: one line per feature, "name kind" with kind in
// {binary, nominal(v1,v2,...), real}; the class line is "name class".
std::vector<feature_spec> load_schema(const std::string& path);

dataset load_dataset(const std::string& path, const load_options& opts = {});
dataset load_dataset(const std::string& path, const std::vector<feature_spec>& schema,
                     const load_options& opts = {});

// Load a CSV against an already-loaded reference dataset so feature levels and
// class indices line up; unseen classes are an error.
dataset load_aligned(const std::string& path, const dataset& reference,
                     const load_options& opts = {});
dataset parse_csv(std::istream& in, const load_options& opts,
                  const std::vector<feature_spec>* declared_schema,
                  const std::string& origin);

// Scaling statistics captured on training data so test folds reuse them.
struct scaling_stats {
  // Per raw real column: observed (min, max). Missing entry = not real.
  std::vector<std::optional<std::pair<double, double>>> minmax;
  std::vector<bool> dropped;  // constant real columns removed at encode time
};

scaling_stats compute_scaling(const dataset& raw);

// One-hot nominals, min-max scale reals to [0, 1], pass binaries through.
dataset encode(const dataset& raw, const scaling_stats& stats, warning_list* warnings = nullptr);
dataset encode(const dataset& raw, warning_list* warnings = nullptr);

dataset subset(const dataset& d, const std::vector<int>& indices, const std::string& name = "");

// Stratified k-fold assignment: fold id per instance, class proportions
// preserved within one instance per class-fold cell.
struct split_plan {
  int folds = 0;
  std::vector<int> fold_of;  // per instance
  std::vector<int> test_indices(int fold) const;
  std::vector<int> train_indices(int fold) const;
};

split_plan stratified_kfold(const dataset& d, int k, std::uint64_t seed);

// Split `indices` into (grow, prune) with `prune_fraction` of each class,
// rounded half-up, in the prune part.
std::pair<std::vector<int>, std::vector<int>> train_prune_split(
    const dataset& d, const std::vector<int>& indices, double prune_fraction,
    std::uint64_t seed);

std::vector<double> one_hot_target(int label, int class_count);

}  // namespace heretic
