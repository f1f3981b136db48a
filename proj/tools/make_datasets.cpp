// Deterministic generator for the bundled benchmark datasets.
//
// The three monks problems are reconstructed exactly from their defining
// concepts over the six-attribute space (432 instances); training sets are
// seeded samples of the standard sizes and the test sets cover the full
// space. The congressional-vote and breast-cancer sets are synthesized from
// fixed per-class distributions with the standard shapes (rows, features,
// class balance). Same seed, same bytes, always.

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heretic/common.hpp"

namespace {

using heretic::mix_seed;
using heretic::rng;

struct csv_writer {
  std::ofstream out;
  explicit csv_writer(const std::string& path) : out(path, std::ios::binary) {
    if (!out) throw std::runtime_error("cannot write " + path);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------- monks ----

constexpr std::array<int, 6> monks_cards = {3, 3, 2, 3, 4, 2};

std::vector<std::array<int, 6>> monks_space() {
  std::vector<std::array<int, 6>> rows;
  std::array<int, 6> a{};
  for (a[0] = 1; a[0] <= monks_cards[0]; ++a[0])
    for (a[1] = 1; a[1] <= monks_cards[1]; ++a[1])
      for (a[2] = 1; a[2] <= monks_cards[2]; ++a[2])
        for (a[3] = 1; a[3] <= monks_cards[3]; ++a[3])
          for (a[4] = 1; a[4] <= monks_cards[4]; ++a[4])
            for (a[5] = 1; a[5] <= monks_cards[5]; ++a[5]) rows.push_back(a);
  return rows;
}

int monks_concept(int which, const std::array<int, 6>& a) {
  switch (which) {
    case 1:
      return (a[0] == a[1] || a[4] == 1) ? 1 : 0;
    case 2: {
      int ones = 0;
      for (int v : a) ones += v == 1;
      return ones == 2 ? 1 : 0;
    }
    default:
      return ((a[4] == 3 && a[3] == 1) || (a[4] != 4 && a[1] != 3)) ? 1 : 0;
  }
}

std::vector<std::string> monks_row(const std::array<int, 6>& a, int label) {
  std::vector<std::string> cells;
  for (int v : a) cells.push_back(std::to_string(v));
  cells.push_back(std::to_string(label));
  return cells;
}

void write_monks(const std::string& dir, int which, int train_size, double noise,
                 std::uint64_t seed) {
  const std::vector<std::array<int, 6>> space = monks_space();

  std::vector<int> order(space.size());
  std::iota(order.begin(), order.end(), 0);
  rng r(mix_seed(seed, 100 + static_cast<std::uint64_t>(which)));
  r.shuffle(order);
  std::vector<int> chosen(order.begin(), order.begin() + train_size);
  std::sort(chosen.begin(), chosen.end());

  std::vector<int> labels(train_size);
  for (int i = 0; i < train_size; ++i) labels[i] = monks_concept(which, space[chosen[i]]);
  if (noise > 0.0) {
    const int flips = static_cast<int>(noise * train_size + 0.5);
    std::vector<int> pos(train_size);
    std::iota(pos.begin(), pos.end(), 0);
    r.shuffle(pos);
    for (int i = 0; i < flips; ++i) labels[pos[i]] = 1 - labels[pos[i]];
  }

  const std::vector<std::string> header = {"a1", "a2", "a3", "a4", "a5", "a6", "class"};
  const std::string base = dir + "/monks" + std::to_string(which);

  csv_writer train(base + "_train.csv");
  train.row(header);
  for (int i = 0; i < train_size; ++i) train.row(monks_row(space[chosen[i]], labels[i]));

  csv_writer test(base + "_test.csv");
  test.row(header);
  for (const auto& a : space) test.row(monks_row(a, monks_concept(which, a)));

  std::printf("wrote %s_train.csv (%d rows) and %s_test.csv (%zu rows)\n", base.c_str(),
              train_size, base.c_str(), space.size());
}

// ----------------------------------------------------------------- vote ----

struct issue {
  const char* name;
  double p_yes_dem;
  double p_yes_rep;
};

constexpr std::array<issue, 16> vote_issues = {{
    {"handicapped-infants", 0.60, 0.19},
    {"water-project-cost-sharing", 0.50, 0.51},
    {"adoption-of-the-budget-resolution", 0.89, 0.13},
    {"physician-fee-freeze", 0.05, 0.99},
    {"el-salvador-aid", 0.22, 0.95},
    {"religious-groups-in-schools", 0.48, 0.90},
    {"anti-satellite-test-ban", 0.77, 0.24},
    {"aid-to-nicaraguan-contras", 0.83, 0.15},
    {"mx-missile", 0.76, 0.12},
    {"immigration", 0.47, 0.56},
    {"synfuels-corporation-cutback", 0.51, 0.13},
    {"education-spending", 0.14, 0.87},
    {"superfund-right-to-sue", 0.29, 0.86},
    {"crime", 0.35, 0.98},
    {"duty-free-exports", 0.64, 0.09},
    {"export-administration-act-south-africa", 0.94, 0.66},
}};

void write_vote(const std::string& dir, std::uint64_t seed) {
  constexpr int democrats = 267, republicans = 168;
  rng r(mix_seed(seed, 200));

  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < democrats + republicans; ++i) {
    const bool dem = i < democrats;
    std::vector<std::string> cells;
    for (const issue& q : vote_issues) {
      const double p = dem ? q.p_yes_dem : q.p_yes_rep;
      cells.push_back(r.uniform() < p ? "1" : "0");
    }
    cells.push_back(dem ? "democrat" : "republican");
    rows.push_back(std::move(cells));
  }
  r.shuffle(rows);

  csv_writer out(dir + "/vote.csv");
  std::vector<std::string> header;
  for (const issue& q : vote_issues) header.push_back(q.name);
  header.push_back("party");
  out.row(header);
  for (const auto& row : rows) out.row(row);
  std::printf("wrote %s/vote.csv (%zu rows)\n", dir.c_str(), rows.size());
}

// -------------------------------------------------------- breast cancer ----

struct nominal_feature {
  const char* name;
  std::vector<const char*> levels;
  std::vector<double> weight_no;   // sampling weight per level, majority class
  std::vector<double> weight_rec;  // minority (recurrence) class
};

const std::vector<nominal_feature>& breast_features() {
  static const std::vector<nominal_feature> features = {
      {"age",
       {"20-29", "30-39", "40-49", "50-59", "60-69", "70-79"},
       {2, 18, 55, 70, 50, 6},
       {1, 10, 30, 25, 16, 3}},
      {"menopause", {"lt40", "ge40", "premeno"}, {4, 90, 107}, {3, 39, 43}},
      {"tumor-size",
       {"0-4", "5-9", "10-14", "15-19", "20-24", "25-29", "30-34", "35-39", "40-44", "45-49",
        "50-54"},
       {8, 4, 25, 26, 40, 36, 28, 12, 16, 2, 4},
       {1, 1, 3, 4, 10, 18, 28, 9, 8, 1, 2}},
      {"inv-nodes",
       {"0-2", "3-5", "6-8", "9-11", "12-14", "15-17", "24-26"},
       {180, 12, 4, 2, 1, 1, 1},
       {40, 20, 10, 6, 4, 3, 2}},
      {"node-caps", {"no", "yes"}, {190, 11}, {45, 40}},
      {"deg-malig", {"1", "2", "3"}, {60, 110, 31}, {10, 25, 50}},
      {"breast", {"left", "right"}, {105, 96}, {48, 37}},
      {"breast-quad",
       {"left-low", "left-up", "right-low", "right-up", "central"},
       {75, 68, 24, 22, 12},
       {35, 29, 9, 7, 5}},
      {"irradiat", {"no", "yes"}, {165, 36}, {45, 40}},
  };
  return features;
}

int pick(rng& r, const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double x = r.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    x -= weights[i];
    if (x < 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

void write_breast_cancer(const std::string& dir, std::uint64_t seed) {
  constexpr int no_recurrence = 201, recurrence = 85;
  rng r(mix_seed(seed, 300));

  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < no_recurrence + recurrence; ++i) {
    const bool rec = i >= no_recurrence;
    std::vector<std::string> cells;
    for (const nominal_feature& f : breast_features()) {
      cells.push_back(f.levels[static_cast<std::size_t>(pick(r, rec ? f.weight_rec : f.weight_no))]);
    }
    cells.push_back(rec ? "recurrence-events" : "no-recurrence-events");
    rows.push_back(std::move(cells));
  }
  r.shuffle(rows);

  csv_writer out(dir + "/breast_cancer.csv");
  std::vector<std::string> header;
  for (const nominal_feature& f : breast_features()) header.push_back(f.name);
  header.push_back("class");
  out.row(header);
  for (const auto& row : rows) out.row(row);
  std::printf("wrote %s/breast_cancer.csv (%zu rows)\n", dir.c_str(), rows.size());
}

// --------------------------------------------------------------- schemas ----

std::string monks_schema() {
  std::string text;
  const std::array<const char*, 6> names = {"a1", "a2", "a3", "a4", "a5", "a6"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    text += names[i];
    text += " nominal(";
    for (int v = 1; v <= monks_cards[i]; ++v) {
      if (v > 1) text += ",";
      text += std::to_string(v);
    }
    text += ")\n";
  }
  text += "class class\n";
  return text;
}

std::string breast_schema() {
  std::string text;
  for (const nominal_feature& f : breast_features()) {
    text += f.name;
    text += " nominal(";
    for (std::size_t i = 0; i < f.levels.size(); ++i) {
      if (i) text += ",";
      text += f.levels[i];
    }
    text += ")\n";
  }
  text += "class class\n";
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regenerate the bundled benchmark datasets"};
  std::string dir = "data";
  std::uint64_t seed = 7;
  app.add_option("-o,--output-dir", dir, "directory to write into");
  app.add_option("--seed", seed, "generator seed (the bundled files use 7)");
  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(dir);
    write_monks(dir, 1, 124, 0.0, seed);
    write_monks(dir, 2, 169, 0.0, seed);
    write_monks(dir, 3, 122, 0.05, seed);
    write_vote(dir, seed);
    write_breast_cancer(dir, seed);
    write_text(dir + "/monks.schema", monks_schema());
    write_text(dir + "/breast_cancer.schema", breast_schema());
    std::printf("wrote %s/monks.schema and %s/breast_cancer.schema\n", dir.c_str(), dir.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
