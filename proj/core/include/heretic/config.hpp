#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heretic/common.hpp"
#include "heretic/minimizer.hpp"

namespace heretic {

struct experiment_config {
  // [experiment]
  std::string name;
  std::string dataset_path;            // kfold mode
  std::string split = "kfold";         // "kfold" | "fixed"
  std::string train_path, test_path;   // fixed mode
  int folds = 10;
  int repeats = 20;
  std::uint64_t seed = 1;
  std::vector<std::string> methods = {"ann", "heretic", "c45", "trepan_lite"};
  std::string output_dir;

  // [data]
  bool header = true;
  std::string class_column;
  std::string schema_path;

  // [network]
  std::vector<int> hidden = {10};
  double steepness = 100.0;
  double learning_rate = 0.002;
  int epochs = 200;
  double weight_decay = 1e-4;

  // [extraction]
  int min_leaf = 2;
  double prune_fraction = 0.2;
  std::string minimizer = "auto";  // "auto" | "exact" | "heuristic"
  std::size_t term_cap = 100000;
  bool dump_samples = false;

  void validate() const;
  minimize_mode minimizer_mode() const;
};

experiment_config load_config(const std::string& path);
experiment_config parse_config(const std::string& text, const std::string& origin);

// Canonical INI rendering of every setting; parse_config(write_config(c))
// reproduces c.
std::string write_config(const experiment_config& cfg);

}  // namespace heretic
