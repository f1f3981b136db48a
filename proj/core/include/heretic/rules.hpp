#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "heretic/dataset.hpp"
#include "heretic/space.hpp"
#include "heretic/tree.hpp"

namespace heretic {

// Complementary rule pair for one binarized unit: pos covers exactly the
// assignments where the unit's tree answers 1, neg the rest.
struct dnf_pair {
  dnf pos;
  dnf neg;
};

// Convert a two-label decision tree into its positive/negative DNF pair over
// `sp`. Tree feature columns are resolved through the space's column records:
// a one-hot member column tests one value, a binary or unit column tests the
// variable directly, and a threshold split selects an interval prefix/suffix.
dnf_pair tree_to_dnf(const decision_tree& t, const boolean_space& sp);

// The per-layer rule stack produced from the per-neuron trees: layers[0] holds
// the first hidden layer's pairs over the input space; layers[k] holds layer
// k+1's pairs over the binarized outputs of layer k.
struct layered_dnfs {
  boolean_space input_space;
  std::vector<boolean_space> unit_spaces;  // unit_spaces[k-1]: domain of layers[k]
  std::vector<std::vector<dnf_pair>> layers;
};

struct substitution_result {
  std::vector<dnf_pair> outputs;  // output-unit rules over the input space
  int rounds = 0;                 // composition passes = hidden layer count
  std::size_t peak_terms = 0;     // largest intermediate term count seen
};

// Bottom-up elimination of unit symbols: repeatedly replace each reference to
// a lower-layer unit by that unit's input-space DNF (positive or negative),
// expanding products and pruning contradictions, until only input literals
// remain. Throws pipeline_error if an intermediate cover exceeds `term_cap`.
substitution_result substitute(const layered_dnfs& stack, std::size_t term_cap = 100000);

struct ruleset {
  boolean_space space;
  std::vector<std::string> classes;
  std::vector<dnf> rules;               // one DNF per class
  std::vector<long long> priority;      // summed training coverage per class
  int default_class = 0;

  int predict_values(const std::vector<int>& values) const;
};

// Attach prediction metadata: per-class priority = sum over the class's terms
// of the number of covering training rows; default class = training majority.
ruleset make_ruleset(boolean_space space, std::vector<std::string> classes,
                     std::vector<dnf> class_rules, const dataset& encoded_train);

// One class fires -> that class; several fire -> highest priority (ties to the
// lower class index); none fire -> the default class.
int ruleset_predict(const ruleset& rs, std::span<const double> encoded_row);

std::string ruleset_to_text(const ruleset& rs);

}  // namespace heretic
