#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "flrce/accounting.hpp"
#include "flrce/earlystop.hpp"
#include "flrce/errors.hpp"
#include "flrce/model.hpp"
#include "flrce/orchestrator.hpp"
#include "flrce/selection.hpp"

namespace flrce {

struct DataConfig {
  enum class Kind { synthetic, csv };
  Kind kind = Kind::synthetic;
  // synthetic
  int classes = 4;
  int per_class = 100;
  int input_dim = 8;
  double spread = 0.08;
  // csv
  std::string path;
  std::string label_column = "label";
};

// Everything one experiment needs, as parsed from a config file. Defaults are
// the desk-scale profile (20 clients, 4 participants, 100 rounds, synthetic
// 4-class data).
struct ExperimentConfig {
  // [experiment]
  int rounds = 100;
  int clients = 20;
  int participants = 4;
  std::uint64_t seed = 42;
  std::vector<StrategyKind> strategies = {StrategyKind::flrce, StrategyKind::flrce_no_es,
                                          StrategyKind::random_fedavg};
  // [selection]
  ExploreSchedule explore;
  // [earlystop]
  std::optional<double> psi;  // default: participants / 2
  bool es_enabled = true;
  // [model]
  std::vector<int> hidden_dims = {};
  Activation activation = Activation::relu;
  // [train]
  double learning_rate = 0.8;
  int local_epochs = 5;
  int batch_size = 16;
  // [data]
  DataConfig data;
  double alpha = 0.1;
  // [cost]
  CostModel cost;

  double effective_psi() const {
    return psi ? *psi : static_cast<double>(participants) / 2.0;
  }

  void validate() const {
    if (rounds < 1) throw ConfigError("experiment.rounds must be >= 1");
    if (clients < 2) throw ConfigError("experiment.clients must be >= 2");
    if (participants < 1) throw ConfigError("experiment.participants must be >= 1");
    if (participants > clients) {
      throw ConfigError("experiment.participants (" + std::to_string(participants) +
                        ") must not exceed experiment.clients (" + std::to_string(clients) + ")");
    }
    if (strategies.empty()) throw ConfigError("experiment.strategies must name at least one strategy");
    explore.validate();
    if (psi && *psi < 0.0) throw ConfigError("earlystop.psi must be >= 0");
    for (const int h : hidden_dims) {
      if (h < 1) throw ConfigError("model.hidden entries must be >= 1");
    }
    if (learning_rate <= 0.0) throw ConfigError("train.learning_rate must be > 0");
    if (local_epochs < 1) throw ConfigError("train.local_epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
    if (alpha <= 0.0) throw ConfigError("data.alpha must be > 0");
    if (data.kind == DataConfig::Kind::synthetic) {
      if (data.classes < 2) throw ConfigError("data.classes must be >= 2");
      if (data.per_class < 1) throw ConfigError("data.per_class must be >= 1");
      if (data.input_dim < 1) throw ConfigError("data.input_dim must be >= 1");
      if (data.spread < 0.0) throw ConfigError("data.spread must be >= 0");
    } else {
      if (data.path.empty()) throw ConfigError("data.path is required when data.kind = csv");
      if (data.label_column.empty()) {
        throw ConfigError("data.label is required when data.kind = csv (set via --label or data.label)");
      }
    }
    cost.validate();
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

template <typename T>
inline T parse_number(const std::string& field, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last || value.empty()) {
    throw ParseError("config: " + field + ": invalid number '" + value + "'");
  }
  return out;
}

inline bool parse_bool(const std::string& field, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ParseError("config: " + field + ": expected true/false, got '" + value + "'");
}

}  // namespace detail

// Parses the flat-section key=value config format. Unknown sections or keys
// are errors so typos surface immediately; '#' and ';' start comments.
inline ExperimentConfig parse_config(std::istream& in, const std::string& origin = "<stream>") {
  ExperimentConfig cfg;
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError(origin + ":" + std::to_string(line_no) + ": unterminated section header");
      }
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    const std::string field = section + "." + key;

    if (section == "experiment") {
      if (key == "rounds") cfg.rounds = detail::parse_number<int>(field, value);
      else if (key == "clients") cfg.clients = detail::parse_number<int>(field, value);
      else if (key == "participants") cfg.participants = detail::parse_number<int>(field, value);
      else if (key == "seed") cfg.seed = detail::parse_number<std::uint64_t>(field, value);
      else if (key == "strategies") {
        cfg.strategies.clear();
        for (const auto& name : detail::split_list(value)) {
          const auto s = strategy_from_name(name);
          if (!s) throw ParseError("config: " + field + ": unknown strategy '" + name + "'");
          cfg.strategies.push_back(*s);
        }
      } else throw ParseError("config: unknown key '" + field + "'");
    } else if (section == "selection") {
      if (key == "explore_init") cfg.explore.initial_prob = detail::parse_number<double>(field, value);
      else if (key == "explore_decay") cfg.explore.decay = detail::parse_number<double>(field, value);
      else throw ParseError("config: unknown key '" + field + "'");
    } else if (section == "earlystop") {
      if (key == "psi") cfg.psi = detail::parse_number<double>(field, value);
      else if (key == "enabled") cfg.es_enabled = detail::parse_bool(field, value);
      else throw ParseError("config: unknown key '" + field + "'");
    } else if (section == "model") {
      if (key == "hidden") {
        cfg.hidden_dims.clear();
        for (const auto& h : detail::split_list(value)) {
          cfg.hidden_dims.push_back(detail::parse_number<int>(field, h));
        }
      } else if (key == "activation") {
        if (value == "relu") cfg.activation = Activation::relu;
        else if (value == "tanh") cfg.activation = Activation::tanh;
        else throw ParseError("config: " + field + ": expected relu or tanh, got '" + value + "'");
      } else throw ParseError("config: unknown key '" + field + "'");
    } else if (section == "train") {
      if (key == "learning_rate") cfg.learning_rate = detail::parse_number<double>(field, value);
      else if (key == "local_epochs") cfg.local_epochs = detail::parse_number<int>(field, value);
      else if (key == "batch_size") cfg.batch_size = detail::parse_number<int>(field, value);
      else throw ParseError("config: unknown key '" + field + "'");
    } else if (section == "data") {
      if (key == "kind") {
        if (value == "synthetic") cfg.data.kind = DataConfig::Kind::synthetic;
        else if (value == "csv") cfg.data.kind = DataConfig::Kind::csv;
        else throw ParseError("config: " + field + ": expected synthetic or csv, got '" + value + "'");
      } else if (key == "classes") cfg.data.classes = detail::parse_number<int>(field, value);
      else if (key == "per_class") cfg.data.per_class = detail::parse_number<int>(field, value);
      else if (key == "input_dim") cfg.data.input_dim = detail::parse_number<int>(field, value);
      else if (key == "spread") cfg.data.spread = detail::parse_number<double>(field, value);
      else if (key == "path") cfg.data.path = value;
      else if (key == "label") cfg.data.label_column = value;
      else if (key == "alpha") cfg.alpha = detail::parse_number<double>(field, value);
      else throw ParseError("config: unknown key '" + field + "'");
    } else if (section == "cost") {
      if (key == "joules_per_sample_epoch") {
        cfg.cost.joules_per_sample_epoch = detail::parse_number<double>(field, value);
      } else if (key == "bytes_per_param") {
        cfg.cost.bytes_per_param = detail::parse_number<std::uint64_t>(field, value);
      } else if (key == "overhead_bytes") {
        cfg.cost.overhead_bytes_per_message = detail::parse_number<std::uint64_t>(field, value);
      } else throw ParseError("config: unknown key '" + field + "'");
    } else {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": unknown section [" + section + "]");
    }
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  return parse_config(in, path);
}

namespace detail {

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

// Serializes back to the same file format parse_config reads.
inline std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[experiment]\n";
  out << "rounds = " << cfg.rounds << "\n";
  out << "clients = " << cfg.clients << "\n";
  out << "participants = " << cfg.participants << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "strategies = ";
  for (std::size_t i = 0; i < cfg.strategies.size(); ++i) {
    if (i) out << ",";
    out << strategy_name(cfg.strategies[i]);
  }
  out << "\n\n[selection]\n";
  out << "explore_init = " << detail::fmt_double(cfg.explore.initial_prob) << "\n";
  out << "explore_decay = " << detail::fmt_double(cfg.explore.decay) << "\n";
  out << "\n[earlystop]\n";
  if (cfg.psi) out << "psi = " << detail::fmt_double(*cfg.psi) << "\n";
  out << "enabled = " << (cfg.es_enabled ? "true" : "false") << "\n";
  out << "\n[model]\n";
  out << "hidden = ";
  for (std::size_t i = 0; i < cfg.hidden_dims.size(); ++i) {
    if (i) out << ",";
    out << cfg.hidden_dims[i];
  }
  out << "\n";
  out << "activation = " << (cfg.activation == Activation::relu ? "relu" : "tanh") << "\n";
  out << "\n[train]\n";
  out << "learning_rate = " << detail::fmt_double(cfg.learning_rate) << "\n";
  out << "local_epochs = " << cfg.local_epochs << "\n";
  out << "batch_size = " << cfg.batch_size << "\n";
  out << "\n[data]\n";
  if (cfg.data.kind == DataConfig::Kind::synthetic) {
    out << "kind = synthetic\n";
    out << "classes = " << cfg.data.classes << "\n";
    out << "per_class = " << cfg.data.per_class << "\n";
    out << "input_dim = " << cfg.data.input_dim << "\n";
    out << "spread = " << detail::fmt_double(cfg.data.spread) << "\n";
  } else {
    out << "kind = csv\n";
    out << "path = " << cfg.data.path << "\n";
    out << "label = " << cfg.data.label_column << "\n";
  }
  out << "alpha = " << detail::fmt_double(cfg.alpha) << "\n";
  out << "\n[cost]\n";
  out << "joules_per_sample_epoch = " << detail::fmt_double(cfg.cost.joules_per_sample_epoch) << "\n";
  out << "bytes_per_param = " << cfg.cost.bytes_per_param << "\n";
  out << "overhead_bytes = " << cfg.cost.overhead_bytes_per_message << "\n";
  return out.str();
}

}  // namespace flrce
