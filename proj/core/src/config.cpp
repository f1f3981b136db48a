#include "heretic/config.hpp"

#include <algorithm>
#include <cstdio>
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

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw config_error(where + ": expected a boolean, got '" + v + "'");
}

long long parse_int(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw config_error(where + ": expected an integer, got '" + v + "'");
  }
}

double parse_double(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw config_error(where + ": expected a number, got '" + v + "'");
  }
}

// Shortest decimal form that parses back to exactly the same double.
std::string fmt_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace

void experiment_config::validate() const {
  if (split != "kfold" && split != "fixed") {
    throw config_error("split must be 'kfold' or 'fixed', got '" + split + "'");
  }
  if (split == "kfold") {
    if (dataset_path.empty()) throw config_error("kfold mode needs 'dataset'");
    if (folds < 2) throw config_error("kfold mode needs folds >= 2");
  } else {
    if (train_path.empty() || test_path.empty()) {
      throw config_error("fixed mode needs 'train' and 'test'");
    }
  }
  if (repeats < 1) throw config_error("repeats must be at least 1");
  if (methods.empty()) throw config_error("at least one method must be enabled");
  for (const std::string& m : methods) {
    if (m != "ann" && m != "heretic" && m != "c45" && m != "trepan_lite") {
      throw config_error("unknown method '" + m + "'");
    }
  }
  if (hidden.empty()) throw config_error("at least one hidden layer is required");
  for (int h : hidden) {
    if (h < 1) throw config_error("hidden layer sizes must be positive");
  }
  if (!(steepness > 0.0)) throw config_error("steepness must be positive");
  if (!(learning_rate > 0.0)) throw config_error("learning_rate must be positive");
  if (epochs < 0) throw config_error("epochs cannot be negative");
  if (weight_decay < 0.0) throw config_error("weight_decay cannot be negative");
  if (min_leaf < 1) throw config_error("min_leaf must be at least 1");
  if (!(prune_fraction > 0.0 && prune_fraction < 1.0)) {
    throw config_error("prune_fraction must lie strictly between 0 and 1");
  }
  if (minimizer != "auto" && minimizer != "exact" && minimizer != "heuristic") {
    throw config_error("minimizer must be 'auto', 'exact', or 'heuristic'");
  }
  if (term_cap < 1) throw config_error("term_cap must be positive");
}

minimize_mode experiment_config::minimizer_mode() const {
  if (minimizer == "exact") return minimize_mode::exact;
  if (minimizer == "heuristic") return minimize_mode::heuristic;
  return minimize_mode::automatic;
}

experiment_config parse_config(const std::string& text, const std::string& origin) {
  experiment_config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw config_error(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "experiment" && section != "data" && section != "network" &&
          section != "extraction") {
        throw config_error(where + ": unknown section [" + section + "]");
      }
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw config_error(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (section == "experiment") {
      if (key == "name") {
        cfg.name = value;
      } else if (key == "dataset") {
        cfg.dataset_path = value;
      } else if (key == "split") {
        cfg.split = value;
      } else if (key == "train") {
        cfg.train_path = value;
      } else if (key == "test") {
        cfg.test_path = value;
      } else if (key == "folds") {
        cfg.folds = static_cast<int>(parse_int(value, where));
      } else if (key == "repeats") {
        cfg.repeats = static_cast<int>(parse_int(value, where));
      } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_int(value, where));
      } else if (key == "methods") {
        cfg.methods = split_list(value);
      } else if (key == "output_dir") {
        cfg.output_dir = value;
      } else {
        throw config_error(where + ": unknown key '" + key + "' in [experiment]");
      }
    } else if (section == "data") {
      if (key == "header") {
        cfg.header = parse_bool(value, where);
      } else if (key == "class_column") {
        cfg.class_column = value;
      } else if (key == "schema") {
        cfg.schema_path = value;
      } else {
        throw config_error(where + ": unknown key '" + key + "' in [data]");
      }
    } else if (section == "network") {
      if (key == "hidden") {
        cfg.hidden.clear();
        for (const std::string& h : split_list(value)) {
          cfg.hidden.push_back(static_cast<int>(parse_int(h, where)));
        }
      } else if (key == "steepness") {
        cfg.steepness = parse_double(value, where);
      } else if (key == "learning_rate") {
        cfg.learning_rate = parse_double(value, where);
      } else if (key == "epochs") {
        cfg.epochs = static_cast<int>(parse_int(value, where));
      } else if (key == "weight_decay") {
        cfg.weight_decay = parse_double(value, where);
      } else {
        throw config_error(where + ": unknown key '" + key + "' in [network]");
      }
    } else if (section == "extraction") {
      if (key == "min_leaf") {
        cfg.min_leaf = static_cast<int>(parse_int(value, where));
      } else if (key == "prune_fraction") {
        cfg.prune_fraction = parse_double(value, where);
      } else if (key == "minimizer") {
        cfg.minimizer = value;
      } else if (key == "term_cap") {
        cfg.term_cap = static_cast<std::size_t>(parse_int(value, where));
      } else if (key == "dump_samples") {
        cfg.dump_samples = parse_bool(value, where);
      } else {
        throw config_error(where + ": unknown key '" + key + "' in [extraction]");
      }
    } else {
      throw config_error(where + ": key outside any section");
    }
  }
  cfg.validate();
  return cfg;
}

experiment_config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string write_config(const experiment_config& cfg) {
  std::ostringstream out;
  out << "[experiment]\n";
  out << "name = " << cfg.name << "\n";
  out << "split = " << cfg.split << "\n";
  out << "dataset = " << cfg.dataset_path << "\n";
  out << "train = " << cfg.train_path << "\n";
  out << "test = " << cfg.test_path << "\n";
  out << "folds = " << cfg.folds << "\n";
  out << "repeats = " << cfg.repeats << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "methods = ";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    out << (i ? ", " : "") << cfg.methods[i];
  }
  out << "\n";
  out << "output_dir = " << cfg.output_dir << "\n";
  out << "\n[data]\n";
  out << "header = " << (cfg.header ? "true" : "false") << "\n";
  out << "class_column = " << cfg.class_column << "\n";
  out << "schema = " << cfg.schema_path << "\n";
  out << "\n[network]\n";
  out << "hidden = ";
  for (std::size_t i = 0; i < cfg.hidden.size(); ++i) {
    out << (i ? ", " : "") << cfg.hidden[i];
  }
  out << "\n";
  out << "steepness = " << fmt_double(cfg.steepness) << "\n";
  out << "learning_rate = " << fmt_double(cfg.learning_rate) << "\n";
  out << "epochs = " << cfg.epochs << "\n";
  out << "weight_decay = " << fmt_double(cfg.weight_decay) << "\n";
  out << "\n[extraction]\n";
  out << "min_leaf = " << cfg.min_leaf << "\n";
  out << "prune_fraction = " << fmt_double(cfg.prune_fraction) << "\n";
  out << "minimizer = " << cfg.minimizer << "\n";
  out << "term_cap = " << cfg.term_cap << "\n";
  out << "dump_samples = " << (cfg.dump_samples ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace heretic
