#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "heretic/common.hpp"
#include "heretic/dataset.hpp"

namespace heretic {

// Rule domains are products of multi-valued variables. Each original feature
// contributes one variable: a one-hot block collapses to a k-valued variable
// (so "exactly one bit set" holds by construction), a scaled real feature with
// k distinct split thresholds becomes a (k+1)-interval variable (so threshold
// exclusivity holds by construction), a plain binary feature or a binarized
// unit output is a 2-valued variable.
enum class variable_kind { binary, onehot, interval, unit };

struct mv_variable {
  std::string name;
  variable_kind kind = variable_kind::binary;
  std::vector<std::string> value_names;  // size k >= 1
  std::vector<double> thresholds;        // interval vars: sorted, size k-1
  std::vector<int> columns;              // encoded columns backing this variable
  int size() const { return static_cast<int>(value_names.size()); }
};

class boolean_space {
 public:
  int add_binary(const std::string& name, int column = -1);
  int add_onehot(const std::string& name, const std::vector<std::string>& value_names,
                 const std::vector<int>& columns);
  int add_interval(const std::string& name, int column, const std::vector<double>& thresholds);
  int add_unit(const std::string& name, int column = -1);

  // Space over an encoded dataset's schema. thresholds_by_column lists, per
  // encoded real column, the split thresholds that rules may mention.
  static boolean_space over_features(const dataset& encoded,
                                     const std::map<int, std::vector<double>>& thresholds_by_column);
  // Space over the binarized outputs of one network layer.
  static boolean_space over_units(int layer, int unit_count);

  int var_count() const { return static_cast<int>(vars_.size()); }
  const mv_variable& var(int v) const { return vars_[static_cast<std::size_t>(v)]; }
  const std::vector<mv_variable>& vars() const { return vars_; }
  int var_index(const std::string& name) const;  // -1 if absent

  // Number of underlying two-valued atoms: 1 per binary/unit variable, k per
  // k-valued one-hot block, k-1 per k-interval variable.
  int atom_count() const;
  // Product of variable sizes, saturating at 2^62.
  std::uint64_t assignment_count() const;

  // Map an encoded data row to one value index per variable.
  std::vector<int> values_of(std::span<const double> encoded_row) const;

  std::uint64_t full_mask(int v) const {
    int s = vars_[static_cast<std::size_t>(v)].size();
    return s >= 64 ? ~0ULL : (1ULL << s) - 1;
  }

 private:
  std::vector<mv_variable> vars_;
};

// A term (product): one admissible-value mask per variable. The full mask
// means "unconstrained"; an empty mask makes the term a contradiction.
struct cube {
  std::vector<std::uint64_t> masks;

  static cube full(const boolean_space& sp);
  bool operator==(const cube& o) const { return masks == o.masks; }
  bool operator<(const cube& o) const { return masks < o.masks; }

  bool contradictory() const;
  // Intersect in place; false if the result is contradictory.
  bool intersect(const cube& o);
  // Set containment: every assignment matching `o` also matches this cube.
  bool contains(const cube& o) const;
  bool matches(const std::vector<int>& values) const;
  bool restricts(int v, const boolean_space& sp) const {
    return masks[static_cast<std::size_t>(v)] != sp.full_mask(v);
  }

  cube& require(int v, std::uint64_t mask);       // intersect one variable's mask
  cube& require_value(int v, int value);          // mask = {value}
  cube& forbid_value(int v, int value);           // clear one value bit
};

// Sum of terms. No terms = the constant false; a term with every mask full =
// the constant true.
struct dnf {
  std::vector<cube> terms;

  static dnf constant_false() { return {}; }
  static dnf constant_true(const boolean_space& sp);

  bool is_false() const { return terms.empty(); }
  bool is_true(const boolean_space& sp) const;

  bool eval(const std::vector<int>& values) const;
  bool eval_row(const boolean_space& sp, std::span<const double> encoded_row) const;

  // Canonical order: sort terms, drop exact duplicates and contradictions.
  void normalize();
  // Additionally drop terms contained in another term.
  void absorb();

  bool operator==(const dnf& o) const { return terms == o.terms; }
};

// Rendered-literal count of one term: 0 for the full cube, and per constrained
// variable the number of comparisons needed to print it (1 for "x = v",
// "x != v", or a one-sided interval; 2 for a two-sided interval; the size of
// the smaller membership list otherwise).
int literal_count(const boolean_space& sp, const cube& c);
int literal_count(const boolean_space& sp, const dnf& d);

std::string render_cube(const boolean_space& sp, const cube& c);
std::string render_dnf(const boolean_space& sp, const dnf& d);

}  // namespace heretic
