#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "heretic/common.hpp"
#include "heretic/rules.hpp"

namespace heretic {

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

// Agreement rate between two predictors' outputs on the same instances.
double fidelity(const std::vector<int>& a, const std::vector<int>& b);

struct paired_t_result {
  double t = 0.0;
  int df = 0;
  double critical = 0.0;
  bool significant = false;
};

// Two-tailed paired t-test at alpha in {0.05, 0.01}; supports df <= 30.
// Zero variance with zero mean difference gives t = 0 (not significant);
// zero variance with a nonzero mean difference is reported significant with
// an infinite t statistic.
paired_t_result paired_t(const std::vector<double>& a, const std::vector<double>& b,
                         double alpha = 0.05);

struct rule_size {
  int classes = 0;   // classes with at least one term
  int terms = 0;
  int literals = 0;
};

rule_size rule_complexity(const ruleset& rs);

struct run_record {
  int repeat = 0;
  int fold = 0;
  std::uint64_t seed = 0;
  std::string method;
  double accuracy = 0.0;
  double fidelity = 0.0;  // agreement with the fold's network on the test part
  rule_size size;
};

struct method_summary {
  std::string method;
  int repeats = 0;
  double accuracy_mean = 0.0, accuracy_std = 0.0;
  double fidelity_mean = 0.0, fidelity_std = 0.0;
  double terms_mean = 0.0, literals_mean = 0.0;
};

// Fold scores are averaged within each repetition first; mean and sample
// standard deviation are then taken across repetitions.
std::vector<method_summary> summarize(const std::vector<run_record>& records);

struct comparison {
  std::string method_a, method_b, metric;
  paired_t_result result;
};

struct report {
  std::string dataset;
  std::string config_text;  // resolved configuration, for provenance
  std::vector<run_record> records;
  std::vector<method_summary> summaries;
  std::vector<comparison> comparisons;
  warning_list warnings;
};

// Paired comparisons between per-repetition mean scores of two methods.
std::vector<double> repeat_means(const std::vector<run_record>& records,
                                 const std::string& method, bool use_fidelity);

std::string report_to_json(const report& rep);
report report_from_json(const std::string& text);
std::string report_to_text(const report& rep);

}  // namespace heretic
