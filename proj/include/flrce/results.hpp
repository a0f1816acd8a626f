#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flrce/accounting.hpp"
#include "flrce/config.hpp"
#include "flrce/runner.hpp"

namespace flrce {

inline constexpr int kResultsSchemaVersion = 1;

namespace detail {

inline nlohmann::json record_to_json(const RoundRecord& r) {
  nlohmann::json j;
  j["round"] = r.round;
  j["mode"] = r.mode == SelectionMode::explore ? "explore" : "exploit";
  j["selected"] = r.selected;
  j["mean_accuracy"] = r.mean_accuracy;
  if (r.conflicts) {
    j["conflicts"] = *r.conflicts;
  } else {
    j["conflicts"] = nullptr;
  }
  j["es_triggered"] = r.es_triggered;
  j["energy_joules"] = r.energy_joules;
  j["bytes"] = r.bytes;
  return j;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["rounds"] = cfg.rounds;
  j["clients"] = cfg.clients;
  j["participants"] = cfg.participants;
  j["seed"] = cfg.seed;
  std::vector<std::string> names;
  for (const auto s : cfg.strategies) names.emplace_back(strategy_name(s));
  j["strategies"] = names;
  j["explore_init"] = cfg.explore.initial_prob;
  j["explore_decay"] = cfg.explore.decay;
  j["psi"] = cfg.effective_psi();
  j["es_enabled"] = cfg.es_enabled;
  j["hidden"] = cfg.hidden_dims;
  j["activation"] = cfg.activation == Activation::relu ? "relu" : "tanh";
  j["learning_rate"] = cfg.learning_rate;
  j["local_epochs"] = cfg.local_epochs;
  j["batch_size"] = cfg.batch_size;
  j["alpha"] = cfg.alpha;
  if (cfg.data.kind == DataConfig::Kind::synthetic) {
    j["data"] = {{"kind", "synthetic"},
                 {"classes", cfg.data.classes},
                 {"per_class", cfg.data.per_class},
                 {"input_dim", cfg.data.input_dim},
                 {"spread", cfg.data.spread}};
  } else {
    j["data"] = {{"kind", "csv"}, {"path", cfg.data.path}, {"label", cfg.data.label_column}};
  }
  j["cost"] = {{"joules_per_sample_epoch", cfg.cost.joules_per_sample_epoch},
               {"bytes_per_param", cfg.cost.bytes_per_param},
               {"overhead_bytes", cfg.cost.overhead_bytes_per_message}};
  return j;
}

inline nlohmann::json strategy_to_json(const StrategyResult& r) {
  nlohmann::json j;
  j["strategy"] = strategy_name(r.strategy);
  j["rounds_run"] = r.rounds_run;
  j["stopped_early"] = r.stopped_early;
  j["final_accuracy"] = r.final_accuracy;
  j["totals"] = {{"energy_joules", r.totals.energy_joules},
                 {"bytes", r.totals.bytes},
                 {"rounds", r.totals.rounds}};
  if (const auto eff = efficiency(r.final_accuracy, r.totals)) {
    j["efficiency"] = {{"accuracy_per_joule", eff->accuracy_per_joule},
                       {"accuracy_per_byte", eff->accuracy_per_byte}};
  } else {
    j["efficiency"] = nullptr;
  }
  auto records = nlohmann::json::array();
  for (const auto& rec : r.records) records.push_back(record_to_json(rec));
  j["records"] = records;

  const int m = r.omega.size();
  auto omega = nlohmann::json::array();
  for (int p = 0; p < m; ++p) {
    auto row = nlohmann::json::array();
    for (int q = 0; q < m; ++q) row.push_back(r.omega.at(p, q));
    omega.push_back(row);
  }
  j["omega"] = omega;
  j["heuristics"] = r.heuristics;
  return j;
}

}  // namespace detail

inline nlohmann::json to_json(const ResultsBundle& bundle) {
  nlohmann::json j;
  j["schema_version"] = kResultsSchemaVersion;
  j["config"] = detail::config_to_json(bundle.config);
  auto strategies = nlohmann::json::array();
  for (const auto& s : bundle.strategies) strategies.push_back(detail::strategy_to_json(s));
  j["strategies"] = strategies;
  return j;
}

// results.json in the output directory. No timestamps or host state, so equal
// configs and seeds produce byte-identical files.
inline std::filesystem::path write_results(const ResultsBundle& bundle,
                                           const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto path = out_dir / "results.json";
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << to_json(bundle).dump(2) << "\n";
  return path;
}

// Plot-ready CSVs: one accuracy-per-round table and one efficiency table.
// Stable column order, 17-significant-digit doubles (exact reload).
inline void export_plot_data(const ResultsBundle& bundle,
                             const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "accuracy_per_round.csv");
    if (!out) throw ParseError("cannot write accuracy_per_round.csv");
    out << "strategy,round,mode,mean_accuracy,conflicts,es_triggered,energy_joules,bytes\n";
    for (const auto& s : bundle.strategies) {
      for (const auto& r : s.records) {
        out << strategy_name(s.strategy) << ',' << r.round << ','
            << (r.mode == SelectionMode::explore ? "explore" : "exploit") << ','
            << detail::fmt_double(r.mean_accuracy) << ',';
        if (r.conflicts) out << detail::fmt_double(*r.conflicts);
        out << ',' << (r.es_triggered ? 1 : 0) << ',' << detail::fmt_double(r.energy_joules)
            << ',' << r.bytes << '\n';
      }
    }
  }
  {
    std::ofstream out(out_dir / "efficiency.csv");
    if (!out) throw ParseError("cannot write efficiency.csv");
    out << "strategy,rounds_run,stopped_early,final_accuracy,energy_joules,bytes,"
           "accuracy_per_joule,accuracy_per_byte\n";
    for (const auto& s : bundle.strategies) {
      out << strategy_name(s.strategy) << ',' << s.rounds_run << ','
          << (s.stopped_early ? 1 : 0) << ',' << detail::fmt_double(s.final_accuracy) << ','
          << detail::fmt_double(s.totals.energy_joules) << ',' << s.totals.bytes << ',';
      if (const auto eff = efficiency(s.final_accuracy, s.totals)) {
        out << detail::fmt_double(eff->accuracy_per_joule) << ','
            << detail::fmt_double(eff->accuracy_per_byte);
      } else {
        out << ',';
      }
      out << '\n';
    }
  }
}

inline void write_psi_sweep_csv(const std::vector<PsiSweepRow>& rows,
                                const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << "psi,stop_round,triggered,final_accuracy,accuracy_per_joule,accuracy_per_byte\n";
  for (const auto& r : rows) {
    out << detail::fmt_double(r.psi) << ',' << r.stop_round << ',' << (r.triggered ? 1 : 0)
        << ',' << detail::fmt_double(r.final_accuracy) << ','
        << detail::fmt_double(r.accuracy_per_joule) << ','
        << detail::fmt_double(r.accuracy_per_byte) << '\n';
  }
}

}  // namespace flrce
