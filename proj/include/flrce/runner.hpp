#pragma once

#include <vector>

#include "flrce/config.hpp"
#include "flrce/data.hpp"
#include "flrce/orchestrator.hpp"

namespace flrce {

// Config resolved into concrete runtime pieces: the model spec, the
// per-client shards and the orchestrator setup. All randomness (data
// generation, partitioning, weight init, server decisions, local shuffles)
// derives from the single config seed.
struct PreparedExperiment {
  ExperimentConfig config;
  ModelSpec model;
  std::vector<Dataset> shards;
  ExperimentSetup setup;
};

inline PreparedExperiment prepare_experiment(const ExperimentConfig& cfg) {
  cfg.validate();

  PreparedExperiment prep;
  prep.config = cfg;

  Dataset data;
  if (cfg.data.kind == DataConfig::Kind::synthetic) {
    data = generate_synthetic(cfg.data.classes, cfg.data.per_class, cfg.data.input_dim,
                              cfg.data.spread, derive_seed(cfg.seed, kStreamData));
  } else {
    data = load_csv(cfg.data.path, cfg.data.label_column);
  }

  PartitionSpec part;
  part.alpha = cfg.alpha;
  part.num_clients = cfg.clients;
  part.seed = derive_seed(cfg.seed, kStreamPartition);
  prep.shards = partition_dirichlet(data, part);

  prep.model.input_dim = data.feature_width;
  prep.model.hidden_dims = cfg.hidden_dims;
  prep.model.output_classes = data.num_classes;
  prep.model.activation = cfg.activation;

  prep.setup.model = prep.model;
  prep.setup.train = TrainConfig{cfg.learning_rate, cfg.local_epochs, cfg.batch_size};
  prep.setup.explore = cfg.explore;
  prep.setup.early_stop = EsConfig{cfg.effective_psi(), cfg.es_enabled};
  prep.setup.cost = cfg.cost;
  prep.setup.max_rounds = cfg.rounds;
  prep.setup.participants = cfg.participants;
  prep.setup.seed = cfg.seed;
  prep.setup.validate(static_cast<int>(prep.shards.size()));
  return prep;
}

struct ResultsBundle {
  ExperimentConfig config;
  std::vector<StrategyResult> strategies;
};

// Runs every configured strategy sequentially on the same prepared data.
inline ResultsBundle run_all(const ExperimentConfig& cfg) {
  const auto prep = prepare_experiment(cfg);
  ResultsBundle bundle;
  bundle.config = prep.config;
  for (const auto strategy : cfg.strategies) {
    bundle.strategies.push_back(run_experiment(prep.setup, prep.shards, strategy));
  }
  return bundle;
}

struct PsiSweepRow {
  double psi = 0.0;
  int stop_round = 0;
  bool triggered = false;
  double final_accuracy = 0.0;
  double accuracy_per_joule = 0.0;
  double accuracy_per_byte = 0.0;
};

// Grid search over early-stopping thresholds; one flrce run per value, same
// seed and data. Rows where the criterion never fires report the full
// horizon and triggered = false.
inline std::vector<PsiSweepRow> sweep_psi(const ExperimentConfig& cfg,
                                          const std::vector<double>& psi_values) {
  if (psi_values.empty()) throw ConfigError("sweep: at least one psi value required");
  const auto prep = prepare_experiment(cfg);
  std::vector<PsiSweepRow> rows;
  rows.reserve(psi_values.size());
  for (const double psi : psi_values) {
    ExperimentSetup setup = prep.setup;
    setup.early_stop = EsConfig{psi, true};
    const auto result = run_experiment(setup, prep.shards, StrategyKind::flrce);
    PsiSweepRow row;
    row.psi = psi;
    row.stop_round = result.rounds_run;
    row.triggered = result.stopped_early;
    row.final_accuracy = result.final_accuracy;
    if (const auto eff = efficiency(result.final_accuracy, result.totals)) {
      row.accuracy_per_joule = eff->accuracy_per_joule;
      row.accuracy_per_byte = eff->accuracy_per_byte;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace flrce
