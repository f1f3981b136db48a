#include "heretic/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

namespace heretic {
namespace {

// Two-tailed critical values of Student's t, df 1..30.
constexpr double k_t_05[30] = {
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
    2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
    2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
constexpr double k_t_01[30] = {
    63.657, 9.925, 5.841, 4.604, 4.032, 3.707, 3.499, 3.355, 3.250, 3.169,
    3.106,  3.055, 3.012, 2.977, 2.947, 2.921, 2.898, 2.878, 2.861, 2.845,
    2.831,  2.819, 2.807, 2.797, 2.787, 2.779, 2.771, 2.763, 2.756, 2.750};

double check_same_size(const std::vector<int>& a, const std::vector<int>& b,
                       const char* what) {
  if (a.size() != b.size() || a.empty()) {
    throw data_error(std::string(what) + ": vectors must be non-empty and equally sized");
  }
  return static_cast<double>(a.size());
}

std::string fmt(double v, const char* spec = "%.4f") {
  char buf[40];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  const double n = check_same_size(predicted, truth, "accuracy");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == truth[i]) ++hits;
  }
  return static_cast<double>(hits) / n;
}

double fidelity(const std::vector<int>& a, const std::vector<int>& b) {
  const double n = check_same_size(a, b, "fidelity");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) ++hits;
  }
  return static_cast<double>(hits) / n;
}

paired_t_result paired_t(const std::vector<double>& a, const std::vector<double>& b,
                         double alpha) {
  if (a.size() != b.size() || a.size() < 2) {
    throw data_error("paired t-test needs two equally sized samples of at least two values");
  }
  const double* table = nullptr;
  if (alpha == 0.05) {
    table = k_t_05;
  } else if (alpha == 0.01) {
    table = k_t_01;
  } else {
    throw config_error("paired t-test supports alpha 0.05 or 0.01");
  }
  const int n = static_cast<int>(a.size());
  const int df = n - 1;
  if (df > 30) throw config_error("paired t-test table covers up to 30 degrees of freedom");

  double mean = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
  mean /= n;
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = (a[i] - b[i]) - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / (n - 1));

  paired_t_result res;
  res.df = df;
  res.critical = table[df - 1];
  if (sd == 0.0) {
    if (mean == 0.0) {
      res.t = 0.0;
      res.significant = false;
    } else {
      res.t = mean > 0 ? std::numeric_limits<double>::infinity()
                       : -std::numeric_limits<double>::infinity();
      res.significant = true;
    }
    return res;
  }
  res.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  res.significant = std::abs(res.t) > res.critical;
  return res;
}

rule_size rule_complexity(const ruleset& rs) {
  rule_size size;
  for (const dnf& d : rs.rules) {
    if (d.terms.empty()) continue;
    size.classes += 1;
    size.terms += static_cast<int>(d.terms.size());
    size.literals += literal_count(rs.space, d);
  }
  return size;
}

std::vector<double> repeat_means(const std::vector<run_record>& records,
                                 const std::string& method, bool use_fidelity) {
  std::map<int, std::pair<double, int>> by_repeat;
  for (const run_record& r : records) {
    if (r.method != method) continue;
    auto& [sum, count] = by_repeat[r.repeat];
    sum += use_fidelity ? r.fidelity : r.accuracy;
    count += 1;
  }
  std::vector<double> means;
  means.reserve(by_repeat.size());
  for (const auto& [repeat, agg] : by_repeat) {
    means.push_back(agg.first / agg.second);
  }
  return means;
}

std::vector<method_summary> summarize(const std::vector<run_record>& records) {
  std::vector<std::string> methods;
  for (const run_record& r : records) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }
  std::vector<method_summary> out;
  for (const std::string& method : methods) {
    method_summary s;
    s.method = method;
    auto stats = [&](bool use_fidelity, double* mean_out, double* std_out) {
      std::vector<double> means = repeat_means(records, method, use_fidelity);
      double mean = 0.0;
      for (double v : means) mean += v;
      mean /= static_cast<double>(means.size());
      double ss = 0.0;
      for (double v : means) ss += (v - mean) * (v - mean);
      *mean_out = mean;
      *std_out = means.size() > 1
                     ? std::sqrt(ss / static_cast<double>(means.size() - 1))
                     : 0.0;
      s.repeats = static_cast<int>(means.size());
    };
    stats(false, &s.accuracy_mean, &s.accuracy_std);
    stats(true, &s.fidelity_mean, &s.fidelity_std);
    double terms = 0.0, literals = 0.0;
    int n = 0;
    for (const run_record& r : records) {
      if (r.method != method) continue;
      terms += r.size.terms;
      literals += r.size.literals;
      ++n;
    }
    s.terms_mean = n > 0 ? terms / n : 0.0;
    s.literals_mean = n > 0 ? literals / n : 0.0;
    out.push_back(std::move(s));
  }
  return out;
}

std::string report_to_json(const report& rep) {
  nlohmann::ordered_json j;
  j["dataset"] = rep.dataset;
  j["config"] = rep.config_text;
  j["records"] = nlohmann::ordered_json::array();
  for (const run_record& r : rep.records) {
    nlohmann::ordered_json jr;
    jr["repeat"] = r.repeat;
    jr["fold"] = r.fold;
    jr["seed"] = r.seed;
    jr["method"] = r.method;
    jr["accuracy"] = r.accuracy;
    jr["fidelity"] = r.fidelity;
    jr["classes"] = r.size.classes;
    jr["terms"] = r.size.terms;
    jr["literals"] = r.size.literals;
    j["records"].push_back(std::move(jr));
  }
  j["summaries"] = nlohmann::ordered_json::array();
  for (const method_summary& s : rep.summaries) {
    nlohmann::ordered_json js;
    js["method"] = s.method;
    js["repeats"] = s.repeats;
    js["accuracy_mean"] = s.accuracy_mean;
    js["accuracy_std"] = s.accuracy_std;
    js["fidelity_mean"] = s.fidelity_mean;
    js["fidelity_std"] = s.fidelity_std;
    js["terms_mean"] = s.terms_mean;
    js["literals_mean"] = s.literals_mean;
    j["summaries"].push_back(std::move(js));
  }
  j["comparisons"] = nlohmann::ordered_json::array();
  for (const comparison& c : rep.comparisons) {
    nlohmann::ordered_json jc;
    jc["a"] = c.method_a;
    jc["b"] = c.method_b;
    jc["metric"] = c.metric;
    jc["t"] = std::isfinite(c.result.t) ? nlohmann::ordered_json(c.result.t)
                                        : nlohmann::ordered_json(c.result.t > 0 ? "inf" : "-inf");
    jc["df"] = c.result.df;
    jc["critical"] = c.result.critical;
    jc["significant"] = c.result.significant;
    j["comparisons"].push_back(std::move(jc));
  }
  j["warnings"] = nlohmann::ordered_json::array();
  for (const warning& w : rep.warnings) {
    j["warnings"].push_back(w.where + ": " + w.message);
  }
  return j.dump(2) + "\n";
}

report report_from_json(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("report parse failure: ") + e.what());
  }
  report rep;
  try {
    rep.dataset = j.at("dataset").get<std::string>();
    rep.config_text = j.value("config", std::string());
    for (const auto& jr : j.at("records")) {
      run_record r;
      r.repeat = jr.at("repeat").get<int>();
      r.fold = jr.at("fold").get<int>();
      r.seed = jr.at("seed").get<std::uint64_t>();
      r.method = jr.at("method").get<std::string>();
      r.accuracy = jr.at("accuracy").get<double>();
      r.fidelity = jr.at("fidelity").get<double>();
      r.size.classes = jr.at("classes").get<int>();
      r.size.terms = jr.at("terms").get<int>();
      r.size.literals = jr.at("literals").get<int>();
      rep.records.push_back(std::move(r));
    }
    for (const auto& js : j.at("summaries")) {
      method_summary s;
      s.method = js.at("method").get<std::string>();
      s.repeats = js.at("repeats").get<int>();
      s.accuracy_mean = js.at("accuracy_mean").get<double>();
      s.accuracy_std = js.at("accuracy_std").get<double>();
      s.fidelity_mean = js.at("fidelity_mean").get<double>();
      s.fidelity_std = js.at("fidelity_std").get<double>();
      s.terms_mean = js.at("terms_mean").get<double>();
      s.literals_mean = js.at("literals_mean").get<double>();
      rep.summaries.push_back(std::move(s));
    }
    for (const auto& jc : j.at("comparisons")) {
      comparison c;
      c.method_a = jc.at("a").get<std::string>();
      c.method_b = jc.at("b").get<std::string>();
      c.metric = jc.at("metric").get<std::string>();
      if (jc.at("t").is_string()) {
        c.result.t = jc.at("t").get<std::string>() == "inf"
                         ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
      } else {
        c.result.t = jc.at("t").get<double>();
      }
      c.result.df = jc.at("df").get<int>();
      c.result.critical = jc.at("critical").get<double>();
      c.result.significant = jc.at("significant").get<bool>();
      rep.comparisons.push_back(std::move(c));
    }
    for (const auto& jw : j.at("warnings")) {
      rep.warnings.push_back({"report", jw.get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("report structure invalid: ") + e.what());
  }
  return rep;
}

std::string report_to_text(const report& rep) {
  std::ostringstream out;
  out << "dataset: " << rep.dataset << "\n\n";
  out << "method        runs   accuracy (mean+-std)   fidelity (mean+-std)   terms   literals\n";
  out << "------------  -----  ---------------------  ---------------------  ------  --------\n";
  for (const method_summary& s : rep.summaries) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-12s  %5d  %8.4f +- %7.4f    %8.4f +- %7.4f    %6.1f  %8.1f\n",
                  s.method.c_str(), s.repeats, s.accuracy_mean, s.accuracy_std, s.fidelity_mean,
                  s.fidelity_std, s.terms_mean, s.literals_mean);
    out << line;
  }
  if (!rep.comparisons.empty()) {
    out << "\npaired t-tests (per-repetition means)\n";
    out << "metric     pair                          t         df  critical  significant\n";
    out << "---------  ----------------------------  --------  --  --------  -----------\n";
    for (const comparison& c : rep.comparisons) {
      std::string pair = c.method_a + " vs " + c.method_b;
      std::string tval = std::isfinite(c.result.t) ? fmt(c.result.t, "%8.4f")
                                                   : (c.result.t > 0 ? "    +inf" : "    -inf");
      char line[160];
      std::snprintf(line, sizeof(line), "%-9s  %-28s  %s  %2d  %8.3f  %s\n", c.metric.c_str(),
                    pair.c_str(), tval.c_str(), c.result.df, c.result.critical,
                    c.result.significant ? "yes" : "no");
      out << line;
    }
  }
  if (!rep.warnings.empty()) {
    out << "\nwarnings:\n";
    for (const warning& w : rep.warnings) {
      out << "  - " << w.where << ": " << w.message << "\n";
    }
  }
  return out.str();
}

}  // namespace heretic
