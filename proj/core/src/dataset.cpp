#include "heretic/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace heretic {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

bool parse_number(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == nullptr || *end != '\0') return false;
  *out = v;
  return true;
}

bool is_missing(const std::string& s) { return s.empty() || s == "?"; }

int find_class_column(const std::string& selector, const std::vector<std::string>& names,
                      std::size_t ncols, const std::string& origin) {
  if (selector.empty()) return static_cast<int>(ncols) - 1;
  if (selector.size() > 1 && selector[0] == '#') {
    int idx = -1;
    double v = 0;
    if (parse_number(selector.substr(1), &v)) idx = static_cast<int>(v);
    if (idx < 0 || idx >= static_cast<int>(ncols)) {
      throw config_error(origin + ": class column index " + selector + " out of range");
    }
    return idx;
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == selector) return static_cast<int>(i);
  }
  throw config_error(origin + ": class column '" + selector + "' not found in header");
}

}  // namespace

std::vector<int> dataset::class_counts() const {
  std::vector<int> counts(classes.size(), 0);
  for (int y : labels) counts[static_cast<std::size_t>(y)]++;
  return counts;
}

int dataset::majority_class() const {
  std::vector<int> counts = class_counts();
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[best]) best = static_cast<int>(c);
  }
  return best;
}

void dataset::check_invariants() const {
  if (rows.size() != labels.size()) {
    throw data_error(name + ": row/label count mismatch");
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != schema.size()) {
      throw data_error(name + ": row " + std::to_string(r + 1) + " width mismatch");
    }
    if (labels[r] < 0 || labels[r] >= static_cast<int>(classes.size())) {
      throw data_error(name + ": row " + std::to_string(r + 1) + " label out of range");
    }
    for (std::size_t c = 0; c < schema.size(); ++c) {
      double v = rows[r][c];
      switch (schema[c].kind) {
        case feature_kind::binary:
          if (v != 0.0 && v != 1.0) {
            throw data_error(name + ": row " + std::to_string(r + 1) + " column " +
                             schema[c].name + " is not 0/1");
          }
          break;
        case feature_kind::nominal: {
          double ip = 0;
          if (std::modf(v, &ip) != 0.0 || v < 0 ||
              v >= static_cast<double>(schema[c].values.size())) {
            throw data_error(name + ": row " + std::to_string(r + 1) + " column " +
                             schema[c].name + " has invalid level index");
          }
          break;
        }
        case feature_kind::real:
          if (!std::isfinite(v)) {
            throw data_error(name + ": row " + std::to_string(r + 1) + " column " +
                             schema[c].name + " is not finite");
          }
          break;
      }
    }
  }
  if (encoded) {
    for (const feature_spec& f : schema) {
      if (f.kind == feature_kind::nominal) {
        throw data_error(name + ": encoded dataset still contains nominal column " + f.name);
      }
    }
  }
}

std::vector<feature_spec> load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open schema file: " + path);
  std::vector<feature_spec> schema;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::size_t sp = line.find_first_of(" \t");
    if (sp == std::string::npos) {
      throw data_error(path + ": line " + std::to_string(lineno) + ": expected 'name kind'");
    }
    feature_spec f;
    f.name = trim(line.substr(0, sp));
    std::string kind = trim(line.substr(sp + 1));
    if (kind == "binary") {
      f.kind = feature_kind::binary;
    } else if (kind == "real") {
      f.kind = feature_kind::real;
    } else if (kind == "class") {
      f.kind = feature_kind::nominal;
      f.name = "class:" + f.name;
    } else if (kind.rfind("nominal(", 0) == 0 && kind.back() == ')') {
      f.kind = feature_kind::nominal;
      std::string body = kind.substr(8, kind.size() - 9);
      std::string v;
      std::stringstream ss(body);
      while (std::getline(ss, v, ',')) f.values.push_back(trim(v));
      if (f.values.size() < 2) {
        throw data_error(path + ": line " + std::to_string(lineno) +
                         ": nominal needs at least two levels");
      }
    } else {
      throw data_error(path + ": line " + std::to_string(lineno) + ": unknown kind '" + kind + "'");
    }
    schema.push_back(std::move(f));
  }
  if (schema.empty()) throw data_error(path + ": schema file declares no features");
  return schema;
}

dataset parse_csv(std::istream& in, const load_options& opts,
                  const std::vector<feature_spec>* declared_schema, const std::string& origin) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) lines.push_back(line);
  }
  std::size_t first_data = 0;
  std::vector<std::string> header;
  if (opts.header) {
    if (lines.empty()) throw data_error(origin + ": file is empty");
    header = split_csv_line(lines[0]);
    first_data = 1;
  }
  if (lines.size() <= first_data) throw data_error(origin + ": no instances");

  std::size_t ncols = opts.header ? header.size() : split_csv_line(lines[first_data]).size();
  if (ncols < 2) throw data_error(origin + ": need at least one feature column and a class column");

  // A declared schema may carry a "class:<name>" marker entry from a schema
  // file; split it off and let it choose the class column when the caller
  // did not pick one explicitly.
  std::vector<feature_spec> declared_features;
  int declared_class_pos = -1;
  std::string declared_class_name;
  if (declared_schema != nullptr) {
    for (std::size_t i = 0; i < declared_schema->size(); ++i) {
      const feature_spec& f = (*declared_schema)[i];
      if (f.name.rfind("class:", 0) == 0) {
        if (declared_class_pos >= 0) {
          throw data_error(origin + ": schema declares more than one class column");
        }
        declared_class_pos = static_cast<int>(i);
        declared_class_name = f.name.substr(6);
      } else {
        declared_features.push_back(f);
      }
    }
  }

  int class_col;
  if (!opts.class_column.empty() || declared_class_pos < 0) {
    class_col = find_class_column(opts.class_column, header, ncols, origin);
  } else if (opts.header) {
    auto it = std::find(header.begin(), header.end(), declared_class_name);
    if (it == header.end()) {
      throw data_error(origin + ": schema class column '" + declared_class_name +
                       "' not found in the header");
    }
    class_col = static_cast<int>(it - header.begin());
  } else {
    if (static_cast<std::size_t>(declared_class_pos) >= ncols) {
      throw data_error(origin + ": schema places the class column beyond the file's " +
                       std::to_string(ncols) + " columns");
    }
    class_col = declared_class_pos;
  }

  std::vector<std::vector<std::string>> cells;
  cells.reserve(lines.size() - first_data);
  for (std::size_t r = first_data; r < lines.size(); ++r) {
    std::vector<std::string> row = split_csv_line(lines[r]);
    if (row.size() != ncols) {
      throw data_error(origin + ": row " + std::to_string(r - first_data + 1) + " has " +
                       std::to_string(row.size()) + " columns, expected " + std::to_string(ncols));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (is_missing(row[c])) {
        throw data_error(origin + ": row " + std::to_string(r - first_data + 1) +
                         " has a missing value; missing values are not supported");
      }
    }
    cells.push_back(std::move(row));
  }

  dataset d;
  d.name = opts.dataset_name.empty() ? origin : opts.dataset_name;

  std::vector<int> feature_cols;
  for (std::size_t c = 0; c < ncols; ++c) {
    if (static_cast<int>(c) != class_col) feature_cols.push_back(static_cast<int>(c));
  }

  if (declared_schema != nullptr) {
    if (declared_features.size() != feature_cols.size()) {
      throw data_error(origin + ": schema declares " + std::to_string(declared_features.size()) +
                       " features but file has " + std::to_string(feature_cols.size()));
    }
    if (opts.header) {
      for (std::size_t fi = 0; fi < feature_cols.size(); ++fi) {
        const std::string& col = header[static_cast<std::size_t>(feature_cols[fi])];
        if (declared_features[fi].name != col) {
          throw data_error(origin + ": schema feature '" + declared_features[fi].name +
                           "' does not match file column '" + col + "'");
        }
      }
    }
    d.schema = std::move(declared_features);
  } else {
    // Infer: all-numeric 0/1 column -> binary; all-numeric -> real;
    // otherwise nominal with levels in order of first appearance.
    for (std::size_t fi = 0; fi < feature_cols.size(); ++fi) {
      int c = feature_cols[fi];
      feature_spec f;
      f.name = opts.header ? header[static_cast<std::size_t>(c)] : "f" + std::to_string(fi);
      bool all_numeric = true;
      bool all_01 = true;
      for (const auto& row : cells) {
        double v = 0;
        if (!parse_number(row[static_cast<std::size_t>(c)], &v)) {
          all_numeric = false;
          break;
        }
        if (v != 0.0 && v != 1.0) all_01 = false;
      }
      if (all_numeric && all_01) {
        f.kind = feature_kind::binary;
      } else if (all_numeric) {
        f.kind = feature_kind::real;
      } else {
        f.kind = feature_kind::nominal;
        for (const auto& row : cells) {
          const std::string& v = row[static_cast<std::size_t>(c)];
          if (std::find(f.values.begin(), f.values.end(), v) == f.values.end()) {
            f.values.push_back(v);
          }
        }
      }
      d.schema.push_back(std::move(f));
    }
  }

  for (std::size_t r = 0; r < cells.size(); ++r) {
    const auto& row = cells[r];
    const std::string& cls = row[static_cast<std::size_t>(class_col)];
    auto it = std::find(d.classes.begin(), d.classes.end(), cls);
    int y;
    if (it == d.classes.end()) {
      y = static_cast<int>(d.classes.size());
      d.classes.push_back(cls);
    } else {
      y = static_cast<int>(it - d.classes.begin());
    }
    d.labels.push_back(y);

    std::vector<double> vals(feature_cols.size(), 0.0);
    for (std::size_t fi = 0; fi < feature_cols.size(); ++fi) {
      const std::string& cell = row[static_cast<std::size_t>(feature_cols[fi])];
      feature_spec& f = d.schema[fi];
      switch (f.kind) {
        case feature_kind::binary: {
          double v = 0;
          if (!parse_number(cell, &v) || (v != 0.0 && v != 1.0)) {
            throw data_error(origin + ": row " + std::to_string(r + 1) + " column " + f.name +
                             ": '" + cell + "' is not a 0/1 value");
          }
          vals[fi] = v;
          break;
        }
        case feature_kind::real: {
          double v = 0;
          if (!parse_number(cell, &v)) {
            throw data_error(origin + ": row " + std::to_string(r + 1) + " column " + f.name +
                             ": '" + cell + "' is not numeric");
          }
          vals[fi] = v;
          break;
        }
        case feature_kind::nominal: {
          auto vit = std::find(f.values.begin(), f.values.end(), cell);
          if (vit == f.values.end()) {
            throw data_error(origin + ": row " + std::to_string(r + 1) + " column " + f.name +
                             ": unseen nominal value '" + cell + "'");
          }
          vals[fi] = static_cast<double>(vit - f.values.begin());
          break;
        }
      }
    }
    d.rows.push_back(std::move(vals));
  }

  if (d.classes.size() < 2) {
    throw data_error(origin + ": need at least two distinct class labels, found " +
                     std::to_string(d.classes.size()));
  }
  d.check_invariants();
  return d;
}

dataset load_dataset(const std::string& path, const load_options& opts) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open dataset file: " + path);
  return parse_csv(in, opts, nullptr, path);
}

dataset load_dataset(const std::string& path, const std::vector<feature_spec>& schema,
                     const load_options& opts) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open dataset file: " + path);
  return parse_csv(in, opts, &schema, path);
}

dataset load_aligned(const std::string& path, const dataset& reference,
                     const load_options& opts) {
  dataset d = load_dataset(path, reference.schema, opts);
  if (d.classes == reference.classes) return d;
  std::vector<int> remap(d.classes.size(), -1);
  for (std::size_t c = 0; c < d.classes.size(); ++c) {
    auto it = std::find(reference.classes.begin(), reference.classes.end(), d.classes[c]);
    if (it == reference.classes.end()) {
      throw data_error(path + ": class '" + d.classes[c] +
                       "' does not appear in the training data");
    }
    remap[c] = static_cast<int>(it - reference.classes.begin());
  }
  for (int& y : d.labels) y = remap[static_cast<std::size_t>(y)];
  d.classes = reference.classes;
  d.check_invariants();
  return d;
}

scaling_stats compute_scaling(const dataset& raw) {
  scaling_stats stats;
  stats.minmax.resize(raw.width());
  stats.dropped.assign(raw.width(), false);
  for (std::size_t c = 0; c < raw.width(); ++c) {
    if (raw.schema[c].kind != feature_kind::real) continue;
    double lo = raw.rows[0][c], hi = raw.rows[0][c];
    for (const auto& row : raw.rows) {
      lo = std::min(lo, row[c]);
      hi = std::max(hi, row[c]);
    }
    stats.minmax[c] = std::make_pair(lo, hi);
    if (lo == hi) stats.dropped[c] = true;
  }
  return stats;
}

dataset encode(const dataset& raw, const scaling_stats& stats, warning_list* warnings) {
  if (raw.encoded) return raw;
  if (stats.minmax.size() != raw.width()) {
    throw data_error(raw.name + ": scaling stats width mismatch");
  }
  dataset out;
  out.name = raw.name;
  out.classes = raw.classes;
  out.labels = raw.labels;
  out.encoded = true;

  for (std::size_t c = 0; c < raw.width(); ++c) {
    const feature_spec& f = raw.schema[c];
    switch (f.kind) {
      case feature_kind::binary: {
        feature_spec g;
        g.name = f.name;
        g.kind = feature_kind::binary;
        g.source = static_cast<int>(c);
        out.schema.push_back(std::move(g));
        break;
      }
      case feature_kind::nominal: {
        for (std::size_t v = 0; v < f.values.size(); ++v) {
          feature_spec g;
          g.name = f.name + "=" + f.values[v];
          g.kind = feature_kind::binary;
          g.source = static_cast<int>(c);
          g.source_value = static_cast<int>(v);
          out.schema.push_back(std::move(g));
        }
        break;
      }
      case feature_kind::real: {
        if (stats.dropped[c]) {
          warn(warnings, "encode",
               raw.name + ": dropping constant real column " + f.name);
          continue;
        }
        feature_spec g;
        g.name = f.name;
        g.kind = feature_kind::real;
        g.source = static_cast<int>(c);
        out.schema.push_back(std::move(g));
        break;
      }
    }
  }

  bool clamped = false;
  out.rows.reserve(raw.size());
  for (const auto& row : raw.rows) {
    std::vector<double> enc;
    enc.reserve(out.width());
    for (std::size_t c = 0; c < raw.width(); ++c) {
      const feature_spec& f = raw.schema[c];
      switch (f.kind) {
        case feature_kind::binary:
          enc.push_back(row[c]);
          break;
        case feature_kind::nominal: {
          std::size_t level = static_cast<std::size_t>(row[c]);
          for (std::size_t v = 0; v < f.values.size(); ++v) {
            enc.push_back(v == level ? 1.0 : 0.0);
          }
          break;
        }
        case feature_kind::real: {
          if (stats.dropped[c]) break;
          auto [lo, hi] = *stats.minmax[c];
          double x = (row[c] - lo) / (hi - lo);
          if (x < 0.0) {
            x = 0.0;
            clamped = true;
          } else if (x > 1.0) {
            x = 1.0;
            clamped = true;
          }
          enc.push_back(x);
          break;
        }
      }
    }
    out.rows.push_back(std::move(enc));
  }
  if (clamped) {
    warn(warnings, "encode",
         raw.name + ": real values outside the training range were clamped to [0, 1]");
  }
  if (out.width() == 0) throw data_error(raw.name + ": all columns dropped during encoding");
  out.check_invariants();
  return out;
}

dataset encode(const dataset& raw, warning_list* warnings) {
  return encode(raw, compute_scaling(raw), warnings);
}

dataset subset(const dataset& d, const std::vector<int>& indices, const std::string& name) {
  dataset out;
  out.name = name.empty() ? d.name : name;
  out.schema = d.schema;
  out.classes = d.classes;
  out.encoded = d.encoded;
  out.rows.reserve(indices.size());
  out.labels.reserve(indices.size());
  for (int i : indices) {
    if (i < 0 || i >= static_cast<int>(d.size())) {
      throw data_error(d.name + ": subset index out of range");
    }
    out.rows.push_back(d.rows[static_cast<std::size_t>(i)]);
    out.labels.push_back(d.labels[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<int> split_plan::test_indices(int fold) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> split_plan::train_indices(int fold) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] != fold) out.push_back(static_cast<int>(i));
  }
  return out;
}

split_plan stratified_kfold(const dataset& d, int k, std::uint64_t seed) {
  if (k < 2) throw config_error("k-fold split needs k >= 2, got " + std::to_string(k));
  if (static_cast<std::size_t>(k) > d.size()) {
    throw config_error("k-fold split needs at least k instances");
  }
  split_plan plan;
  plan.folds = k;
  plan.fold_of.assign(d.size(), -1);
  // Deal shuffled per-class index lists into folds, continuing the deal across
  // classes so total fold sizes also stay within one of each other.
  std::size_t dealt = 0;
  for (std::size_t c = 0; c < d.classes.size(); ++c) {
    std::vector<int> members;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d.labels[i] == static_cast<int>(c)) members.push_back(static_cast<int>(i));
    }
    rng r(mix_seed(seed, 0xf01d, c));
    r.shuffle(members);
    for (std::size_t j = 0; j < members.size(); ++j) {
      plan.fold_of[static_cast<std::size_t>(members[j])] =
          static_cast<int>((dealt + j) % static_cast<std::size_t>(k));
    }
    dealt += members.size();
  }
  return plan;
}

std::pair<std::vector<int>, std::vector<int>> train_prune_split(
    const dataset& d, const std::vector<int>& indices, double prune_fraction,
    std::uint64_t seed) {
  if (!(prune_fraction > 0.0 && prune_fraction < 1.0)) {
    throw config_error("prune fraction must lie strictly between 0 and 1");
  }
  std::vector<int> grow, prune;
  for (std::size_t c = 0; c < d.classes.size(); ++c) {
    std::vector<int> members;
    for (int i : indices) {
      if (d.labels[static_cast<std::size_t>(i)] == static_cast<int>(c)) members.push_back(i);
    }
    if (members.empty()) continue;
    rng r(mix_seed(seed, 0x9e0e, c));
    r.shuffle(members);
    std::size_t n_prune = static_cast<std::size_t>(
        std::floor(prune_fraction * static_cast<double>(members.size()) + 0.5));
    for (std::size_t j = 0; j < members.size(); ++j) {
      (j < n_prune ? prune : grow).push_back(members[j]);
    }
  }
  if (grow.empty() || prune.empty()) {
    throw config_error("grow/prune split left one side empty; adjust the prune fraction");
  }
  std::sort(grow.begin(), grow.end());
  std::sort(prune.begin(), prune.end());
  return {grow, prune};
}

std::vector<double> one_hot_target(int label, int class_count) {
  std::vector<double> t(static_cast<std::size_t>(class_count), 0.0);
  t[static_cast<std::size_t>(label)] = 1.0;
  return t;
}

}  // namespace heretic
