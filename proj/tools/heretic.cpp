// Command-line front end for the heretic rule-extraction pipeline.
//
//   heretic run     -c cfg.ini            train + extract + evaluate, write artifacts
//   heretic train   -c cfg.ini -o net.txt train the network only and save it
//   heretic extract -c cfg.ini -n net.txt extract rules from a saved network
//   heretic report  -i report.json        re-render a stored report as text
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 pipeline error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "heretic/pipeline.hpp"

namespace {

using namespace heretic;

// The training/extraction data of the first repeat's first fold, reproduced
// exactly as `run` sees it, so `train` and `extract` round-trip with the
// artifacts a full run writes.
struct first_split {
  dataset train;
  dataset test;
  std::uint64_t run_seed = 0;
};

first_split load_first_split(const experiment_config& cfg, warning_list* warnings) {
  cfg.validate();
  load_options lopt;
  lopt.header = cfg.header;
  lopt.class_column = cfg.class_column;
  lopt.dataset_name = cfg.name;

  dataset raw_train, raw_test;
  if (cfg.split == "fixed") {
    if (cfg.schema_path.empty()) {
      raw_train = load_dataset(cfg.train_path, lopt);
    } else {
      raw_train = load_dataset(cfg.train_path, load_schema(cfg.schema_path), lopt);
    }
    raw_test = load_aligned(cfg.test_path, raw_train, lopt);
  } else {
    dataset pool = cfg.schema_path.empty()
                       ? load_dataset(cfg.dataset_path, lopt)
                       : load_dataset(cfg.dataset_path, load_schema(cfg.schema_path), lopt);
    split_plan plan = stratified_kfold(pool, cfg.folds, mix_seed(cfg.seed, 1000, 0));
    raw_train = subset(pool, plan.train_indices(0));
    raw_test = subset(pool, plan.test_indices(0));
  }

  first_split out;
  scaling_stats stats = compute_scaling(raw_train);
  out.train = encode(raw_train, stats, warnings);
  out.test = encode(raw_test, stats, warnings);
  out.run_seed = mix_seed(cfg.seed, 1, 1);
  return out;
}

network_config network_config_from(const experiment_config& cfg, const dataset& enc_train,
                                   std::uint64_t run_seed) {
  network_config net_cfg;
  net_cfg.layer_sizes.push_back(static_cast<int>(enc_train.width()));
  for (int h : cfg.hidden) net_cfg.layer_sizes.push_back(h);
  net_cfg.layer_sizes.push_back(static_cast<int>(enc_train.classes.size()));
  net_cfg.steepness = cfg.steepness;
  net_cfg.learning_rate = cfg.learning_rate;
  net_cfg.epochs = cfg.epochs;
  net_cfg.weight_decay = cfg.weight_decay;
  net_cfg.seed = mix_seed(run_seed, 1);
  return net_cfg;
}

void print_warnings(const warning_list& warnings) {
  for (const warning& w : warnings) {
    std::cerr << "warning: " << w.where << ": " << w.message << "\n";
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pipeline_error("cannot write file: " + path);
  out << text;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool print_only) {
  experiment_config cfg = load_config(config_path);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (cfg.output_dir.empty()) {
    cfg.output_dir = "runs/" + (cfg.name.empty() ? std::string("experiment") : cfg.name);
  }
  if (print_only) {
    std::cout << write_config(cfg);
    return 0;
  }
  experiment_artifacts art = run_experiment(cfg);
  write_artifacts(art, cfg.output_dir);
  std::cout << report_to_text(art.rep);
  std::cout << "artifacts written to " << cfg.output_dir << "\n";
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& out_path) {
  experiment_config cfg = load_config(config_path);
  warning_list warnings;
  first_split fs = load_first_split(cfg, &warnings);
  network_config net_cfg = network_config_from(cfg, fs.train, fs.run_seed);
  network net = train(fs.train, net_cfg, &warnings);
  print_warnings(warnings);
  net.save_file(out_path);

  const double train_acc = accuracy(predict_all(net, fs.train), fs.train.labels);
  const double test_acc = accuracy(predict_all(net, fs.test), fs.test.labels);
  std::ostringstream arch;
  for (std::size_t i = 0; i < net.layer_sizes().size(); ++i) {
    if (i) arch << "-";
    arch << net.layer_sizes()[i];
  }
  std::printf("trained %s network on %zu instances: train accuracy %.4f, test accuracy %.4f\n",
              arch.str().c_str(), fs.train.size(), train_acc, test_acc);
  std::printf("network written to %s\n", out_path.c_str());
  return 0;
}

int cmd_extract(const std::string& config_path, const std::string& net_path,
                const std::string& out_path) {
  experiment_config cfg = load_config(config_path);
  warning_list warnings;
  first_split fs = load_first_split(cfg, &warnings);
  network net = network::load_file(net_path);
  if (net.input_width() != static_cast<int>(fs.train.width())) {
    throw data_error(net_path + ": network input width " + std::to_string(net.input_width()) +
                     " does not match the encoded dataset width " +
                     std::to_string(fs.train.width()));
  }
  if (net.output_width() != static_cast<int>(fs.train.classes.size())) {
    throw data_error(net_path + ": network output width " + std::to_string(net.output_width()) +
                     " does not match the class count " +
                     std::to_string(fs.train.classes.size()));
  }

  extraction_options opts;
  opts.min_leaf = cfg.min_leaf;
  opts.mode = cfg.minimizer_mode();
  opts.term_cap = cfg.term_cap;

  extraction_result ex = extract_rules(net, fs.train, opts);
  print_warnings(warnings);
  print_warnings(ex.warnings);
  spill(out_path, ruleset_to_text(ex.rules));

  const std::vector<int> net_train = predict_all(net, fs.train);
  const std::vector<int> net_test = predict_all(net, fs.test);
  const std::vector<int> rule_train = predict_all(ex.rules, fs.train);
  const std::vector<int> rule_test = predict_all(ex.rules, fs.test);
  const rule_size sz = rule_complexity(ex.rules);
  std::printf("extracted %d terms (%d literals) across %d classes\n", sz.terms, sz.literals,
              sz.classes);
  std::printf("fidelity to the network: train %.4f, test %.4f\n",
              fidelity(rule_train, net_train), fidelity(rule_test, net_test));
  std::printf("rule accuracy:           train %.4f, test %.4f\n",
              accuracy(rule_train, fs.train.labels), accuracy(rule_test, fs.test.labels));
  std::printf("rules written to %s\n", out_path.c_str());
  return 0;
}

int cmd_report(const std::string& in_path, const std::string& out_path) {
  report rep = report_from_json(slurp(in_path));
  const std::string text = report_to_text(rep);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    spill(out_path, text);
    std::printf("report written to %s\n", out_path.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heretic: extract propositional rules from steep-sigmoid neural networks"};
  app.require_subcommand(0, 1);

  bool print_defaults = false;
  app.add_flag("--print-config", print_defaults,
               "print every configuration setting with its default value and exit");

  std::string run_config, run_out;
  bool run_print = false;
  CLI::App* run = app.add_subcommand("run", "train, extract, and evaluate end to end");
  run->add_option("-c,--config", run_config, "experiment configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("-o,--output-dir", run_out, "override the configured output directory");
  run->add_flag("--print-config", run_print, "print the resolved configuration and exit");

  std::string train_config, train_out = "network.txt";
  CLI::App* train = app.add_subcommand("train", "train the network only and save it");
  train->add_option("-c,--config", train_config, "experiment configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("-o,--output", train_out, "where to write the trained network");

  std::string ex_config, ex_net, ex_out = "rules.txt";
  CLI::App* extract = app.add_subcommand("extract", "extract rules from a saved network");
  extract->add_option("-c,--config", ex_config, "experiment configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  extract->add_option("-n,--network", ex_net, "network file written by train or run")
      ->required()
      ->check(CLI::ExistingFile);
  extract->add_option("-o,--output", ex_out, "where to write the rule set");

  std::string rep_in, rep_out;
  CLI::App* report_cmd = app.add_subcommand("report", "re-render a stored report as text");
  report_cmd->add_option("-i,--input", rep_in, "report.json produced by run")
      ->required()
      ->check(CLI::ExistingFile);
  report_cmd->add_option("-o,--output", rep_out, "write the text here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_config, run_out, run_print);
    if (train->parsed()) return cmd_train(train_config, train_out);
    if (extract->parsed()) return cmd_extract(ex_config, ex_net, ex_out);
    if (report_cmd->parsed()) return cmd_report(rep_in, rep_out);
    if (print_defaults) {
      std::cout << heretic::write_config(heretic::experiment_config{});
      return 0;
    }
    std::cout << app.help();
    return 0;
  } catch (const heretic::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const heretic::data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
