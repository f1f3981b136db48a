#include "heretic/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace heretic {
namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::vector<bool> layer_real_mask(const dataset& encoded, int layer, int width) {
  if (layer == 1) {
    std::vector<bool> mask(encoded.width(), false);
    for (std::size_t c = 0; c < encoded.width(); ++c) {
      mask[c] = encoded.schema[c].kind == feature_kind::real;
    }
    return mask;
  }
  return std::vector<bool>(static_cast<std::size_t>(width), false);
}

void collect_thresholds(const decision_tree& t, std::map<int, std::vector<double>>* sink) {
  for (const tree_node& node : t.nodes) {
    if (!node.leaf && node.test.is_threshold) {
      (*sink)[node.test.feature].push_back(node.test.threshold);
    }
  }
}

void merge_warnings(warning_list* into, const warning_list& from) {
  for (const warning& w : from) {
    bool dup = false;
    for (const warning& have : *into) {
      if (have.where == w.where && have.message == w.message) {
        dup = true;
        break;
      }
    }
    if (!dup) into->push_back(w);
  }
}

}  // namespace

void stage_timings::add(const std::string& stage, double s) {
  for (auto& [name, total] : seconds) {
    if (name == stage) {
      total += s;
      return;
    }
  }
  seconds.emplace_back(stage, s);
}

extraction_result extract_rules(const network& net, const dataset& encoded_train,
                                const extraction_options& opts) {
  if (!encoded_train.encoded) {
    throw data_error(encoded_train.name + ": rule extraction expects an encoded dataset");
  }
  extraction_result res;

  sampler_result samples = collect_neuron_samples(net, encoded_train);
  res.mid_fraction = samples.mid_fraction;
  merge_warnings(&res.warnings, samples.warnings);

  // Per-neuron trees: grow on every sample, then prune against those same
  // samples. The samples are a noise-free function of the network, so the
  // prune pass only collapses subtrees the samples never distinguish.
  const std::vector<int>& sizes = net.layer_sizes();
  const int L = static_cast<int>(sizes.size()) - 1;
  res.trees.resize(static_cast<std::size_t>(L));
  std::size_t set_index = 0;
  for (int layer = 1; layer <= L; ++layer) {
    const std::vector<bool> real_mask = layer_real_mask(encoded_train, layer, sizes[layer - 1]);
    for (int unit = 0; unit < sizes[layer]; ++unit, ++set_index) {
      const neuron_sample_set& ss = samples.sets[set_index];
      decision_tree t = induce(ss.inputs, ss.outputs, real_mask, 2, opts.min_leaf);
      t = prune(t, ss.inputs, ss.outputs, &res.warnings);
      res.trees[static_cast<std::size_t>(layer - 1)].push_back(std::move(t));
    }
  }

  // Input space over the encoded features, registering every threshold any
  // first-layer tree uses.
  std::map<int, std::vector<double>> thresholds;
  for (const decision_tree& t : res.trees[0]) collect_thresholds(t, &thresholds);
  res.stack.input_space = boolean_space::over_features(encoded_train, thresholds);

  for (int layer = 1; layer <= L; ++layer) {
    if (layer >= 2) {
      res.stack.unit_spaces.push_back(boolean_space::over_units(layer - 1, sizes[layer - 1]));
    }
    const boolean_space& domain =
        layer == 1 ? res.stack.input_space : res.stack.unit_spaces.back();
    std::vector<dnf_pair> pairs;
    pairs.reserve(static_cast<std::size_t>(sizes[layer]));
    for (const decision_tree& t : res.trees[static_cast<std::size_t>(layer - 1)]) {
      pairs.push_back(tree_to_dnf(t, domain));
    }
    res.stack.layers.push_back(std::move(pairs));
  }

  substitution_result sub = substitute(res.stack, opts.term_cap);
  res.substitution_rounds = sub.rounds;
  res.peak_terms = sub.peak_terms;

  res.raw_outputs.reserve(sub.outputs.size());
  for (const dnf_pair& p : sub.outputs) res.raw_outputs.push_back(p.pos);

  std::vector<dnf> minimized;
  minimized.reserve(res.raw_outputs.size());
  for (const dnf& d : res.raw_outputs) {
    minimized.push_back(minimize(d, res.stack.input_space, opts.mode));
  }

  std::vector<std::string> class_names = encoded_train.classes;
  if (static_cast<int>(class_names.size()) != net.output_width()) {
    throw pipeline_error("network output width does not match the class count");
  }
  res.rules = make_ruleset(res.stack.input_space, std::move(class_names), std::move(minimized),
                           encoded_train);
  return res;
}

int cascade_predict(const extraction_result& ex, std::span<const double> encoded_row) {
  std::vector<double> cur(encoded_row.begin(), encoded_row.end());
  for (const auto& layer_trees : ex.trees) {
    std::vector<double> bits;
    bits.reserve(layer_trees.size());
    for (const decision_tree& t : layer_trees) {
      bits.push_back(static_cast<double>(tree_predict(t, cur)));
    }
    cur = std::move(bits);
  }
  // Same decision policy as the rule set, driven by the output bits.
  int fired = -1;
  int fired_count = 0;
  for (std::size_t c = 0; c < cur.size(); ++c) {
    if (cur[c] == 1.0) {
      ++fired_count;
      if (fired < 0) fired = static_cast<int>(c);
    }
  }
  if (fired_count == 1) return fired;
  if (fired_count == 0) return ex.rules.default_class;
  int best = -1;
  long long best_priority = -1;
  for (std::size_t c = 0; c < cur.size(); ++c) {
    if (cur[c] != 1.0) continue;
    if (ex.rules.priority[c] > best_priority) {
      best_priority = ex.rules.priority[c];
      best = static_cast<int>(c);
    }
  }
  return best;
}

std::vector<int> predict_all(const ruleset& rs, const dataset& encoded) {
  std::vector<int> out;
  out.reserve(encoded.size());
  for (const auto& row : encoded.rows) out.push_back(ruleset_predict(rs, row));
  return out;
}

std::vector<int> predict_all(const network& net, const dataset& encoded) {
  std::vector<int> out;
  out.reserve(encoded.size());
  for (const auto& row : encoded.rows) out.push_back(net.predict(row));
  return out;
}

experiment_artifacts run_experiment(const experiment_config& cfg) {
  cfg.validate();
  experiment_artifacts art;
  report& rep = art.rep;
  rep.dataset = cfg.name.empty() ? "experiment" : cfg.name;
  rep.config_text = write_config(cfg);

  const bool want_ann = std::count(cfg.methods.begin(), cfg.methods.end(), "ann") > 0;
  const bool want_rules = std::count(cfg.methods.begin(), cfg.methods.end(), "heretic") > 0;
  const bool want_c45 = std::count(cfg.methods.begin(), cfg.methods.end(), "c45") > 0;
  const bool want_trepan = std::count(cfg.methods.begin(), cfg.methods.end(), "trepan_lite") > 0;

  load_options lopt;
  lopt.header = cfg.header;
  lopt.class_column = cfg.class_column;
  lopt.dataset_name = cfg.name;

  std::vector<feature_spec> declared;
  const bool have_schema = !cfg.schema_path.empty();
  if (have_schema) declared = load_schema(cfg.schema_path);

  dataset fixed_train, fixed_test, pool;
  if (cfg.split == "fixed") {
    fixed_train = have_schema ? load_dataset(cfg.train_path, declared, lopt)
                              : load_dataset(cfg.train_path, lopt);
    fixed_test = load_aligned(cfg.test_path, fixed_train, lopt);
  } else {
    pool = have_schema ? load_dataset(cfg.dataset_path, declared, lopt)
                       : load_dataset(cfg.dataset_path, lopt);
  }

  const int fold_count = cfg.split == "fixed" ? 1 : cfg.folds;

  for (int r = 0; r < cfg.repeats; ++r) {
    split_plan plan;
    if (cfg.split == "kfold") {
      plan = stratified_kfold(pool, cfg.folds, mix_seed(cfg.seed, 1000, static_cast<std::uint64_t>(r)));
    }
    for (int f = 0; f < fold_count; ++f) {
      const std::uint64_t run_seed =
          mix_seed(cfg.seed, static_cast<std::uint64_t>(r) + 1, static_cast<std::uint64_t>(f) + 1);

      dataset raw_train, raw_test;
      if (cfg.split == "fixed") {
        raw_train = fixed_train;
        raw_test = fixed_test;
      } else {
        raw_train = subset(pool, plan.train_indices(f));
        raw_test = subset(pool, plan.test_indices(f));
      }

      scaling_stats stats = compute_scaling(raw_train);
      warning_list enc_warnings;
      dataset enc_train = encode(raw_train, stats, &enc_warnings);
      dataset enc_test = encode(raw_test, stats, &enc_warnings);
      merge_warnings(&rep.warnings, enc_warnings);

      network_config net_cfg;
      net_cfg.layer_sizes.push_back(static_cast<int>(enc_train.width()));
      for (int h : cfg.hidden) net_cfg.layer_sizes.push_back(h);
      net_cfg.layer_sizes.push_back(static_cast<int>(enc_train.classes.size()));
      net_cfg.steepness = cfg.steepness;
      net_cfg.learning_rate = cfg.learning_rate;
      net_cfg.epochs = cfg.epochs;
      net_cfg.weight_decay = cfg.weight_decay;
      net_cfg.seed = mix_seed(run_seed, 1);

      auto t0 = clock_type::now();
      network net = train(enc_train, net_cfg, &rep.warnings);
      art.timings.add("train", seconds_since(t0));

      t0 = clock_type::now();
      const std::vector<int> net_test = predict_all(net, enc_test);
      art.timings.add("evaluate", seconds_since(t0));

      if (want_ann) {
        run_record rec;
        rec.repeat = r;
        rec.fold = f;
        rec.seed = run_seed;
        rec.method = "ann";
        rec.accuracy = accuracy(net_test, enc_test.labels);
        rec.fidelity = 1.0;
        rep.records.push_back(rec);
      }

      extraction_options ex_opts;
      ex_opts.min_leaf = cfg.min_leaf;
      ex_opts.mode = cfg.minimizer_mode();
      ex_opts.term_cap = cfg.term_cap;

      if (want_rules) {
        t0 = clock_type::now();
        extraction_result ex = extract_rules(net, enc_train, ex_opts);
        art.timings.add("extract", seconds_since(t0));
        merge_warnings(&rep.warnings, ex.warnings);

        t0 = clock_type::now();
        const std::vector<int> rule_test = predict_all(ex.rules, enc_test);
        run_record rec;
        rec.repeat = r;
        rec.fold = f;
        rec.seed = run_seed;
        rec.method = "heretic";
        rec.accuracy = accuracy(rule_test, enc_test.labels);
        rec.fidelity = fidelity(rule_test, net_test);
        rec.size = rule_complexity(ex.rules);
        rep.records.push_back(rec);
        art.timings.add("evaluate", seconds_since(t0));

        if (r == 0 && f == 0) {
          art.ruleset_text = ruleset_to_text(ex.rules);
          std::ostringstream net_text;
          net.save(net_text);
          art.network_text = net_text.str();
          if (cfg.dump_samples) {
            sampler_result samples = collect_neuron_samples(net, enc_train);
            for (const neuron_sample_set& set : samples.sets) {
              std::ostringstream csv;
              dump_sample_csv(set, csv);
              art.sample_dumps.emplace_back("unit_" + std::to_string(set.id.layer) + "_" +
                                                std::to_string(set.id.unit) + ".csv",
                                            csv.str());
            }
          }
        }
      }

      if (want_c45 || want_trepan) {
        std::vector<int> all(enc_train.size());
        std::iota(all.begin(), all.end(), 0);
        auto [grow_idx, prune_idx] =
            train_prune_split(enc_train, all, cfg.prune_fraction, mix_seed(run_seed, 2));
        const dataset grow = subset(enc_train, grow_idx);
        const dataset prune_part = subset(enc_train, prune_idx);

        if (want_c45) {
          t0 = clock_type::now();
          baseline_result c45 = c45_direct(grow, prune_part, enc_test, cfg.min_leaf, &rep.warnings);
          run_record rec;
          rec.repeat = r;
          rec.fold = f;
          rec.seed = run_seed;
          rec.method = "c45";
          rec.accuracy = accuracy(c45.test_predictions, enc_test.labels);
          rec.fidelity = fidelity(c45.test_predictions, net_test);
          rec.size.classes = static_cast<int>(enc_train.classes.size());
          rec.size.terms = c45.tree.leaf_count();
          rec.size.literals = c45.tree.leaf_count() * c45.tree.depth();
          rep.records.push_back(rec);
          art.timings.add("baseline_c45", seconds_since(t0));
        }
        if (want_trepan) {
          t0 = clock_type::now();
          baseline_result tl =
              trepan_lite(net, grow, prune_part, enc_test, cfg.min_leaf, &rep.warnings);
          run_record rec;
          rec.repeat = r;
          rec.fold = f;
          rec.seed = run_seed;
          rec.method = "trepan_lite";
          rec.accuracy = accuracy(tl.test_predictions, enc_test.labels);
          rec.fidelity = fidelity(tl.test_predictions, net_test);
          rec.size.classes = static_cast<int>(enc_train.classes.size());
          rec.size.terms = tl.tree.leaf_count();
          rec.size.literals = tl.tree.leaf_count() * tl.tree.depth();
          rep.records.push_back(rec);
          art.timings.add("baseline_trepan", seconds_since(t0));
        }
      }
    }
  }

  rep.summaries = summarize(rep.records);

  if (cfg.repeats >= 2 && cfg.repeats <= 31 && want_rules) {
    auto add_comparison = [&](const std::string& other, const std::string& metric) {
      const bool use_fid = metric == "fidelity";
      std::vector<double> a = repeat_means(rep.records, "heretic", use_fid);
      std::vector<double> b = repeat_means(rep.records, other, use_fid);
      if (a.size() != b.size() || a.size() < 2) return;
      comparison c;
      c.method_a = "heretic";
      c.method_b = other;
      c.metric = metric;
      c.result = paired_t(a, b, 0.05);
      rep.comparisons.push_back(std::move(c));
    };
    if (want_ann) add_comparison("ann", "accuracy");
    if (want_c45) add_comparison("c45", "accuracy");
    if (want_trepan) {
      add_comparison("trepan_lite", "accuracy");
      add_comparison("trepan_lite", "fidelity");
    }
  }
  return art;
}

void write_artifacts(const experiment_artifacts& artifacts, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw pipeline_error("cannot create output directory " + dir + ": " + ec.message());

  auto write_file = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir + "/" + name);
    if (!out) throw pipeline_error("cannot write " + dir + "/" + name);
    out << text;
  };
  write_file("report.json", report_to_json(artifacts.rep));
  write_file("report.txt", report_to_text(artifacts.rep));
  if (!artifacts.ruleset_text.empty()) write_file("rules.txt", artifacts.ruleset_text);
  if (!artifacts.network_text.empty()) write_file("network.txt", artifacts.network_text);

  std::ostringstream timing;
  for (const auto& [stage, secs] : artifacts.timings.seconds) {
    char line[96];
    std::snprintf(line, sizeof(line), "%-16s %10.3f s\n", stage.c_str(), secs);
    timing << line;
  }
  write_file("timings.txt", timing.str());

  if (!artifacts.sample_dumps.empty()) {
    fs::create_directories(dir + "/samples", ec);
    for (const auto& [name, text] : artifacts.sample_dumps) {
      write_file("samples/" + name, text);
    }
  }
}

}  // namespace heretic
