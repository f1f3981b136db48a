#include "heretic/rules.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace heretic {
namespace {

struct column_binding {
  int var = -1;
  int value = -1;  // one-hot member value; -1 for direct binary/unit/interval
};

std::vector<column_binding> bind_columns(const boolean_space& sp) {
  std::vector<column_binding> binds;
  for (int v = 0; v < sp.var_count(); ++v) {
    const mv_variable& var = sp.var(v);
    for (std::size_t k = 0; k < var.columns.size(); ++k) {
      const int col = var.columns[k];
      if (col < 0) continue;
      if (binds.size() <= static_cast<std::size_t>(col)) {
        binds.resize(static_cast<std::size_t>(col) + 1);
      }
      column_binding b;
      b.var = v;
      b.value = var.kind == variable_kind::onehot ? static_cast<int>(k) : -1;
      binds[static_cast<std::size_t>(col)] = b;
    }
  }
  return binds;
}

// Mask for "column passes the split on the high/low side".
std::uint64_t side_mask(const boolean_space& sp, const column_binding& b,
                        const split_test& test, bool high) {
  const mv_variable& var = sp.var(b.var);
  if (test.is_threshold) {
    if (var.kind != variable_kind::interval) {
      throw pipeline_error("threshold split on non-interval variable " + var.name);
    }
    std::size_t j = 0;
    while (j < var.thresholds.size() && var.thresholds[j] != test.threshold) ++j;
    if (j == var.thresholds.size()) {
      throw pipeline_error("threshold " + std::to_string(test.threshold) +
                           " not registered for variable " + var.name);
    }
    const std::uint64_t low_mask = (2ULL << j) - 1;  // intervals 0..j
    return high ? (sp.full_mask(b.var) & ~low_mask) : low_mask;
  }
  if (var.kind == variable_kind::onehot) {
    const std::uint64_t bit = 1ULL << b.value;
    return high ? bit : (sp.full_mask(b.var) & ~bit);
  }
  // binary or unit: value 1 on the high side
  return high ? 2ULL : 1ULL;
}

}  // namespace

dnf_pair tree_to_dnf(const decision_tree& t, const boolean_space& sp) {
  if (t.label_count != 2) {
    throw pipeline_error("rule conversion expects a two-label tree");
  }
  if (t.root < 0) throw pipeline_error("rule conversion: empty tree");
  const std::vector<column_binding> binds = bind_columns(sp);

  dnf_pair out;
  std::function<void(int, cube)> walk = [&](int id, cube path) {
    const tree_node& node = t.nodes[static_cast<std::size_t>(id)];
    if (node.leaf) {
      (node.label == 1 ? out.pos : out.neg).terms.push_back(std::move(path));
      return;
    }
    const int col = node.test.feature;
    if (col < 0 || static_cast<std::size_t>(col) >= binds.size() ||
        binds[static_cast<std::size_t>(col)].var < 0) {
      throw pipeline_error("tree splits on a column with no variable binding");
    }
    const column_binding& b = binds[static_cast<std::size_t>(col)];
    cube lo = path;
    lo.require(b.var, side_mask(sp, b, node.test, false));
    if (!lo.contradictory()) walk(node.lo, std::move(lo));
    cube hi = std::move(path);
    hi.require(b.var, side_mask(sp, b, node.test, true));
    if (!hi.contradictory()) walk(node.hi, std::move(hi));
  };
  walk(t.root, cube::full(sp));
  out.pos.normalize();
  out.neg.normalize();
  return out;
}

namespace {

void enforce_cap(std::size_t terms, std::size_t cap) {
  if (terms > cap) {
    throw pipeline_error("rule substitution exceeded the term cap (" + std::to_string(terms) +
                         " > " + std::to_string(cap) + " terms)");
  }
}

// Expand one upper-layer cube over unit variables into an input-space DNF by
// multiplying out the referenced units' DNFs.
dnf expand_cube(const cube& unit_cube, const boolean_space& unit_space,
                const std::vector<dnf_pair>& lower, const boolean_space& input_space,
                std::size_t term_cap, std::size_t* peak_terms) {
  dnf result;
  result.terms.push_back(cube::full(input_space));
  for (int v = 0; v < unit_space.var_count(); ++v) {
    const std::uint64_t mask = unit_cube.masks[static_cast<std::size_t>(v)];
    if (mask == unit_space.full_mask(v)) continue;  // unit unconstrained
    const dnf& factor =
        mask == 2ULL ? lower[static_cast<std::size_t>(v)].pos
                     : lower[static_cast<std::size_t>(v)].neg;  // mask == 1
    dnf next;
    for (const cube& a : result.terms) {
      for (const cube& b : factor.terms) {
        cube u = a;
        if (u.intersect(b)) next.terms.push_back(std::move(u));
      }
    }
    next.normalize();
    // Containment pruning is quadratic; skip it when covers get very large
    // and rely on the cap to flag genuine blowups.
    if (next.terms.size() > 512 && next.terms.size() <= 20000) next.absorb();
    enforce_cap(next.terms.size(), term_cap);
    *peak_terms = std::max(*peak_terms, next.terms.size());
    result = std::move(next);
    if (result.terms.empty()) break;  // contradiction: the whole cube vanishes
  }
  return result;
}

}  // namespace

substitution_result substitute(const layered_dnfs& stack, std::size_t term_cap) {
  if (stack.layers.empty()) throw pipeline_error("substitution: empty rule stack");
  for (std::size_t k = 1; k < stack.layers.size(); ++k) {
    const boolean_space& dom = stack.unit_spaces.at(k - 1);
    if (dom.var_count() != static_cast<int>(stack.layers[k - 1].size())) {
      throw pipeline_error("substitution: layer " + std::to_string(k) +
                           " domain does not match the lower layer's unit count");
    }
  }

  substitution_result res;
  std::vector<dnf_pair> current = stack.layers[0];  // over the input space
  for (const dnf_pair& p : current) {
    res.peak_terms = std::max({res.peak_terms, p.pos.terms.size(), p.neg.terms.size()});
  }

  for (std::size_t k = 1; k < stack.layers.size(); ++k) {
    const boolean_space& dom = stack.unit_spaces[k - 1];
    std::vector<dnf_pair> next;
    next.reserve(stack.layers[k].size());
    for (const dnf_pair& unit : stack.layers[k]) {
      dnf_pair composed;
      for (const bool positive : {true, false}) {
        const dnf& src = positive ? unit.pos : unit.neg;
        dnf acc;
        for (const cube& c : src.terms) {
          dnf expanded =
              expand_cube(c, dom, current, stack.input_space, term_cap, &res.peak_terms);
          acc.terms.insert(acc.terms.end(), expanded.terms.begin(), expanded.terms.end());
          acc.normalize();
          if (acc.terms.size() > 512 && acc.terms.size() <= 20000) acc.absorb();
          enforce_cap(acc.terms.size(), term_cap);
          res.peak_terms = std::max(res.peak_terms, acc.terms.size());
        }
        if (acc.terms.size() <= 20000) {
          acc.absorb();
        } else {
          acc.normalize();
        }
        (positive ? composed.pos : composed.neg) = std::move(acc);
      }
      next.push_back(std::move(composed));
    }
    current = std::move(next);
    ++res.rounds;
  }
  res.outputs = std::move(current);
  return res;
}

int ruleset::predict_values(const std::vector<int>& values) const {
  int fired = -1;
  int fired_count = 0;
  for (std::size_t c = 0; c < rules.size(); ++c) {
    if (rules[c].eval(values)) {
      ++fired_count;
      if (fired < 0) fired = static_cast<int>(c);
    }
  }
  if (fired_count == 1) return fired;
  if (fired_count == 0) return default_class;
  int best = -1;
  long long best_priority = -1;
  for (std::size_t c = 0; c < rules.size(); ++c) {
    if (!rules[c].eval(values)) continue;
    if (priority[c] > best_priority) {
      best_priority = priority[c];
      best = static_cast<int>(c);
    }
  }
  return best;
}

ruleset make_ruleset(boolean_space space, std::vector<std::string> classes,
                     std::vector<dnf> class_rules, const dataset& encoded_train) {
  if (classes.size() != class_rules.size()) {
    throw pipeline_error("rule set: class and rule counts differ");
  }
  ruleset rs;
  rs.space = std::move(space);
  rs.classes = std::move(classes);
  rs.rules = std::move(class_rules);
  rs.priority.assign(rs.rules.size(), 0);
  rs.default_class = encoded_train.majority_class();

  std::vector<std::vector<int>> train_values;
  train_values.reserve(encoded_train.size());
  for (const auto& row : encoded_train.rows) {
    train_values.push_back(rs.space.values_of(row));
  }
  for (std::size_t c = 0; c < rs.rules.size(); ++c) {
    long long p = 0;
    for (const cube& t : rs.rules[c].terms) {
      for (const auto& values : train_values) {
        if (t.matches(values)) ++p;
      }
    }
    rs.priority[c] = p;
  }
  return rs;
}

int ruleset_predict(const ruleset& rs, std::span<const double> encoded_row) {
  return rs.predict_values(rs.space.values_of(encoded_row));
}

std::string ruleset_to_text(const ruleset& rs) {
  std::ostringstream out;
  out << "rule set: " << rs.classes.size() << " classes over " << rs.space.var_count()
      << " variables\n";
  out << "default class: " << rs.classes[static_cast<std::size_t>(rs.default_class)] << "\n";
  for (std::size_t c = 0; c < rs.rules.size(); ++c) {
    out << "class " << rs.classes[c] << " (priority " << rs.priority[c] << ", "
        << rs.rules[c].terms.size() << " terms):\n";
    if (rs.rules[c].terms.empty()) {
      out << "  (never fires)\n";
      continue;
    }
    for (const cube& t : rs.rules[c].terms) {
      out << "  IF " << render_cube(rs.space, t) << " THEN " << rs.classes[c] << "\n";
    }
  }
  return out.str();
}

}  // namespace heretic
