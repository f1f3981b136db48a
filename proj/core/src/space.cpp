#include "heretic/space.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <sstream>

namespace heretic {
namespace {

std::string format_threshold(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

int boolean_space::add_binary(const std::string& name, int column) {
  mv_variable v;
  v.name = name;
  v.kind = variable_kind::binary;
  v.value_names = {"0", "1"};
  if (column >= 0) v.columns = {column};
  vars_.push_back(std::move(v));
  return var_count() - 1;
}

int boolean_space::add_onehot(const std::string& name, const std::vector<std::string>& value_names,
                              const std::vector<int>& columns) {
  if (value_names.size() < 2 || value_names.size() != columns.size()) {
    throw pipeline_error("one-hot variable " + name + " needs matching value and column lists");
  }
  if (value_names.size() > 64) {
    throw pipeline_error("variable " + name + " has more than 64 values");
  }
  mv_variable v;
  v.name = name;
  v.kind = variable_kind::onehot;
  v.value_names = value_names;
  v.columns = columns;
  vars_.push_back(std::move(v));
  return var_count() - 1;
}

int boolean_space::add_interval(const std::string& name, int column,
                                const std::vector<double>& thresholds) {
  if (thresholds.size() + 1 > 64) {
    throw pipeline_error("variable " + name + " has more than 63 thresholds");
  }
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i - 1] < thresholds[i])) {
      throw pipeline_error("variable " + name + " thresholds must be strictly increasing");
    }
  }
  mv_variable v;
  v.name = name;
  v.kind = variable_kind::interval;
  v.thresholds = thresholds;
  v.columns = {column};
  if (thresholds.empty()) {
    v.value_names = {"any"};
  } else {
    for (std::size_t i = 0; i <= thresholds.size(); ++i) {
      if (i == 0) {
        v.value_names.push_back("<=" + format_threshold(thresholds[0]));
      } else if (i == thresholds.size()) {
        v.value_names.push_back(">" + format_threshold(thresholds[i - 1]));
      } else {
        v.value_names.push_back("(" + format_threshold(thresholds[i - 1]) + "," +
                                format_threshold(thresholds[i]) + "]");
      }
    }
  }
  vars_.push_back(std::move(v));
  return var_count() - 1;
}

int boolean_space::add_unit(const std::string& name, int column) {
  mv_variable v;
  v.name = name;
  v.kind = variable_kind::unit;
  v.value_names = {"0", "1"};
  if (column >= 0) v.columns = {column};
  vars_.push_back(std::move(v));
  return var_count() - 1;
}

boolean_space boolean_space::over_features(
    const dataset& encoded, const std::map<int, std::vector<double>>& thresholds_by_column) {
  if (!encoded.encoded) {
    throw data_error(encoded.name + ": rule space needs an encoded dataset");
  }
  boolean_space sp;
  std::size_t c = 0;
  while (c < encoded.width()) {
    const feature_spec& f = encoded.schema[c];
    if (f.kind == feature_kind::binary && f.source_value >= 0) {
      // One-hot block: consecutive columns sharing the source feature.
      std::vector<std::string> names;
      std::vector<int> cols;
      std::string base = f.name.substr(0, f.name.rfind('='));
      std::size_t j = c;
      while (j < encoded.width() && encoded.schema[j].source == f.source &&
             encoded.schema[j].source_value >= 0) {
        names.push_back(encoded.schema[j].name.substr(base.size() + 1));
        cols.push_back(static_cast<int>(j));
        ++j;
      }
      sp.add_onehot(base, names, cols);
      c = j;
    } else if (f.kind == feature_kind::binary) {
      sp.add_binary(f.name, static_cast<int>(c));
      ++c;
    } else {  // real
      auto it = thresholds_by_column.find(static_cast<int>(c));
      std::vector<double> thr = it == thresholds_by_column.end() ? std::vector<double>{} : it->second;
      std::sort(thr.begin(), thr.end());
      thr.erase(std::unique(thr.begin(), thr.end()), thr.end());
      sp.add_interval(f.name, static_cast<int>(c), thr);
      ++c;
    }
  }
  return sp;
}

boolean_space boolean_space::over_units(int layer, int unit_count) {
  boolean_space sp;
  for (int j = 0; j < unit_count; ++j) {
    sp.add_unit("u" + std::to_string(layer) + "_" + std::to_string(j), j);
  }
  return sp;
}

int boolean_space::var_index(const std::string& name) const {
  for (std::size_t v = 0; v < vars_.size(); ++v) {
    if (vars_[v].name == name) return static_cast<int>(v);
  }
  return -1;
}

int boolean_space::atom_count() const {
  int n = 0;
  for (const mv_variable& v : vars_) {
    switch (v.kind) {
      case variable_kind::binary:
      case variable_kind::unit:
        n += 1;
        break;
      case variable_kind::onehot:
        n += v.size();
        break;
      case variable_kind::interval:
        n += v.size() - 1;
        break;
    }
  }
  return n;
}

std::uint64_t boolean_space::assignment_count() const {
  const std::uint64_t cap = 1ULL << 62;
  std::uint64_t n = 1;
  for (const mv_variable& v : vars_) {
    std::uint64_t s = static_cast<std::uint64_t>(v.size());
    if (n > cap / s) return cap;
    n *= s;
  }
  return n;
}

std::vector<int> boolean_space::values_of(std::span<const double> encoded_row) const {
  std::vector<int> values(vars_.size(), 0);
  for (std::size_t v = 0; v < vars_.size(); ++v) {
    const mv_variable& var = vars_[v];
    switch (var.kind) {
      case variable_kind::binary: {
        double x = encoded_row[static_cast<std::size_t>(var.columns.at(0))];
        values[v] = x == 1.0 ? 1 : 0;
        break;
      }
      case variable_kind::unit:
        throw pipeline_error("unit variable " + var.name + " cannot be read from a data row");
      case variable_kind::onehot: {
        int hot = -1;
        for (std::size_t k = 0; k < var.columns.size(); ++k) {
          if (encoded_row[static_cast<std::size_t>(var.columns[k])] == 1.0) {
            if (hot >= 0) {
              throw data_error("one-hot block " + var.name + " has multiple bits set");
            }
            hot = static_cast<int>(k);
          }
        }
        if (hot < 0) throw data_error("one-hot block " + var.name + " has no bit set");
        values[v] = hot;
        break;
      }
      case variable_kind::interval: {
        double x = encoded_row[static_cast<std::size_t>(var.columns.at(0))];
        int i = 0;
        while (i < static_cast<int>(var.thresholds.size()) &&
               x > var.thresholds[static_cast<std::size_t>(i)]) {
          ++i;
        }
        values[v] = i;
        break;
      }
    }
  }
  return values;
}

cube cube::full(const boolean_space& sp) {
  cube c;
  c.masks.resize(static_cast<std::size_t>(sp.var_count()));
  for (int v = 0; v < sp.var_count(); ++v) {
    c.masks[static_cast<std::size_t>(v)] = sp.full_mask(v);
  }
  return c;
}

bool cube::contradictory() const {
  for (std::uint64_t m : masks) {
    if (m == 0) return true;
  }
  return false;
}

bool cube::intersect(const cube& o) {
  bool ok = true;
  for (std::size_t v = 0; v < masks.size(); ++v) {
    masks[v] &= o.masks[v];
    if (masks[v] == 0) ok = false;
  }
  return ok;
}

bool cube::contains(const cube& o) const {
  for (std::size_t v = 0; v < masks.size(); ++v) {
    if ((o.masks[v] & ~masks[v]) != 0) return false;
  }
  return true;
}

bool cube::matches(const std::vector<int>& values) const {
  for (std::size_t v = 0; v < masks.size(); ++v) {
    if ((masks[v] >> values[v] & 1ULL) == 0) return false;
  }
  return true;
}

cube& cube::require(int v, std::uint64_t mask) {
  masks[static_cast<std::size_t>(v)] &= mask;
  return *this;
}

cube& cube::require_value(int v, int value) {
  masks[static_cast<std::size_t>(v)] &= 1ULL << value;
  return *this;
}

cube& cube::forbid_value(int v, int value) {
  masks[static_cast<std::size_t>(v)] &= ~(1ULL << value);
  return *this;
}

dnf dnf::constant_true(const boolean_space& sp) {
  dnf d;
  d.terms.push_back(cube::full(sp));
  return d;
}

bool dnf::is_true(const boolean_space& sp) const {
  for (const cube& t : terms) {
    bool full = true;
    for (int v = 0; v < sp.var_count(); ++v) {
      if (t.masks[static_cast<std::size_t>(v)] != sp.full_mask(v)) {
        full = false;
        break;
      }
    }
    if (full) return true;
  }
  return false;
}

bool dnf::eval(const std::vector<int>& values) const {
  for (const cube& t : terms) {
    if (t.matches(values)) return true;
  }
  return false;
}

bool dnf::eval_row(const boolean_space& sp, std::span<const double> encoded_row) const {
  return eval(sp.values_of(encoded_row));
}

void dnf::normalize() {
  terms.erase(std::remove_if(terms.begin(), terms.end(),
                             [](const cube& c) { return c.contradictory(); }),
              terms.end());
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
}

void dnf::absorb() {
  normalize();
  // After normalize() no two terms are equal, so containment is strict.
  std::vector<cube> kept;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    bool subsumed = false;
    for (std::size_t j = 0; j < terms.size(); ++j) {
      if (j != i && terms[j].contains(terms[i])) {
        subsumed = true;
        break;
      }
    }
    if (!subsumed) kept.push_back(terms[i]);
  }
  terms = std::move(kept);
}

namespace {

struct rendered {
  std::string text;
  int count = 0;
};

rendered render_var(const mv_variable& var, std::uint64_t mask, std::uint64_t full) {
  rendered r;
  if (mask == full) return r;
  const int size = var.size();
  const int set = std::popcount(mask);
  const bool twovalued = var.kind == variable_kind::binary || var.kind == variable_kind::unit;

  auto value_name = [&](int k) { return var.value_names[static_cast<std::size_t>(k)]; };
  auto single_bit = [&]() {
    for (int k = 0; k < size; ++k) {
      if (mask >> k & 1ULL) return k;
    }
    return -1;
  };

  if (twovalued) {
    r.text = var.name + " = " + value_name(single_bit());
    r.count = 1;
    return r;
  }
  if (var.kind == variable_kind::interval) {
    // Contiguous runs print as interval comparisons.
    const std::uint64_t shifted = mask >> std::countr_zero(mask);
    const bool contiguous = (shifted & (shifted + 1)) == 0;
    if (contiguous) {
      const int lo = std::countr_zero(mask);
      const int hi = 63 - std::countl_zero(mask);
      if (lo == 0) {
        r.text = var.name + " <= " + format_threshold(var.thresholds[static_cast<std::size_t>(hi)]);
        r.count = 1;
      } else if (hi == size - 1) {
        r.text = var.name + " > " + format_threshold(var.thresholds[static_cast<std::size_t>(lo - 1)]);
        r.count = 1;
      } else {
        r.text = format_threshold(var.thresholds[static_cast<std::size_t>(lo - 1)]) + " < " +
                 var.name + " <= " + format_threshold(var.thresholds[static_cast<std::size_t>(hi)]);
        r.count = 2;
      }
      return r;
    }
  }
  if (set == 1) {
    r.text = var.name + " = " + value_name(single_bit());
    r.count = 1;
    return r;
  }
  if (set == size - 1) {
    for (int k = 0; k < size; ++k) {
      if ((mask >> k & 1ULL) == 0) {
        r.text = var.name + " != " + value_name(k);
        r.count = 1;
        return r;
      }
    }
  }
  // General membership list: count the smaller side but always render the
  // positive membership for readability.
  std::string list;
  for (int k = 0; k < size; ++k) {
    if (mask >> k & 1ULL) {
      if (!list.empty()) list += ", ";
      list += value_name(k);
    }
  }
  r.text = var.name + " in {" + list + "}";
  r.count = std::min(set, size - set);
  return r;
}

}  // namespace

int literal_count(const boolean_space& sp, const cube& c) {
  int n = 0;
  for (int v = 0; v < sp.var_count(); ++v) {
    n += render_var(sp.var(v), c.masks[static_cast<std::size_t>(v)], sp.full_mask(v)).count;
  }
  return n;
}

int literal_count(const boolean_space& sp, const dnf& d) {
  int n = 0;
  for (const cube& t : d.terms) n += literal_count(sp, t);
  return n;
}

std::string render_cube(const boolean_space& sp, const cube& c) {
  if (c.contradictory()) return "FALSE";
  std::string out;
  for (int v = 0; v < sp.var_count(); ++v) {
    rendered r = render_var(sp.var(v), c.masks[static_cast<std::size_t>(v)], sp.full_mask(v));
    if (r.text.empty()) continue;
    if (!out.empty()) out += " AND ";
    out += r.text;
  }
  return out.empty() ? "TRUE" : out;
}

std::string render_dnf(const boolean_space& sp, const dnf& d) {
  if (d.terms.empty()) return "FALSE";
  std::string out;
  for (const cube& t : d.terms) {
    if (!out.empty()) out += "\n   OR ";
    out += render_cube(sp, t);
  }
  return out;
}

}  // namespace heretic
