#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flrce/accounting.hpp"
#include "flrce/data.hpp"
#include "flrce/earlystop.hpp"
#include "flrce/errors.hpp"
#include "flrce/model.hpp"
#include "flrce/param_vector.hpp"
#include "flrce/relationship.hpp"
#include "flrce/rng.hpp"
#include "flrce/selection.hpp"

namespace flrce {

enum class StrategyKind { flrce, flrce_no_es, random_fedavg };

inline const char* strategy_name(StrategyKind s) {
  switch (s) {
    case StrategyKind::flrce: return "flrce";
    case StrategyKind::flrce_no_es: return "flrce_no_es";
    case StrategyKind::random_fedavg: return "random_fedavg";
  }
  return "unknown";
}

inline std::optional<StrategyKind> strategy_from_name(const std::string& name) {
  if (name == "flrce") return StrategyKind::flrce;
  if (name == "flrce_no_es") return StrategyKind::flrce_no_es;
  if (name == "random_fedavg") return StrategyKind::random_fedavg;
  return std::nullopt;
}

// One round of the experiment log.
struct RoundRecord {
  int round = 0;
  SelectionMode mode = SelectionMode::explore;
  std::vector<int> selected;
  double mean_accuracy = 0.0;
  std::optional<double> conflicts;
  bool es_triggered = false;
  double energy_joules = 0.0;
  std::uint64_t bytes = 0;
};

struct ExperimentSetup {
  ModelSpec model;
  TrainConfig train;
  ExploreSchedule explore;
  EsConfig early_stop;
  CostModel cost;
  int max_rounds = 100;   // T
  int participants = 4;   // P
  std::uint64_t seed = 0;

  void validate(int num_clients) const {
    model.validate();
    train.validate();
    explore.validate();
    early_stop.validate();
    cost.validate();
    if (max_rounds < 1) throw ConfigError("experiment.rounds must be >= 1");
    if (participants < 1) throw ConfigError("experiment.participants must be >= 1");
    if (participants > num_clients) {
      throw ConfigError("experiment.participants must not exceed the number of clients");
    }
  }
};

struct StrategyResult {
  StrategyKind strategy = StrategyKind::flrce;
  std::vector<RoundRecord> records;
  ParamVector final_model;
  ResourceTotals totals;
  RelationshipMap omega;            // snapshot at stop
  std::vector<double> heuristics;   // snapshot at stop
  bool stopped_early = false;
  int rounds_run = 0;
  double final_accuracy = 0.0;
};

// Weighted-average aggregation: w_next = w + sum_k p_k u_k with
// p_k = n_k / sum n, over the round's updates.
inline ParamVector aggregate(const ParamVector& global,
                             const std::vector<std::pair<ParamVector, std::size_t>>& updates) {
  if (updates.empty()) throw ConfigError("aggregate: no updates");
  std::size_t total = 0;
  for (const auto& [u, n_k] : updates) {
    if (u.size() != global.size()) throw ConfigError("aggregate: dimension mismatch");
    total += n_k;
  }
  if (total == 0) throw ConfigError("aggregate: all sample counts are zero");
  ParamVector next = global;
  for (const auto& [u, n_k] : updates) {
    const double p = static_cast<double>(n_k) / static_cast<double>(total);
    add_scaled(next, p, u);
  }
  return next;
}

// Unweighted mean of per-client accuracies over all local shards.
inline double evaluate_global(const ParamVector& params, const ModelSpec& spec,
                              const std::vector<Dataset>& shards) {
  if (shards.empty()) throw ConfigError("evaluate_global: no shards");
  double sum = 0.0;
  for (const auto& shard : shards) {
    sum += accuracy(params, spec, shard);
  }
  return sum / static_cast<double>(shards.size());
}

// Optional per-round inspection hook (testing/diagnostics); called after the
// round commits, with the server maps and the model that was broadcast.
using RoundObserver =
    std::function<void(const RoundRecord&, const ServerMaps&, const ParamVector& broadcast,
                       const std::vector<ParamVector>& updates)>;

// Full experiment loop. Per round: select -> local training -> write latest
// update/round maps -> aggregate -> relationship update -> heuristic update ->
// early-stopping check. The two flrce variants share every step except that
// the no-ES variant never triggers a stop; the random baseline selects
// uniformly and skips the relationship machinery entirely.
inline StrategyResult run_experiment(const ExperimentSetup& setup,
                                     const std::vector<Dataset>& shards,
                                     StrategyKind strategy,
                                     const RoundObserver& observer = {}) {
  const int num_clients = static_cast<int>(shards.size());
  setup.validate(num_clients);
  for (const auto& shard : shards) {
    if (shard.size() == 0) throw ConfigError("run_experiment: empty client shard");
  }

  StrategyResult result;
  result.strategy = strategy;

  Rng init_rng(derive_seed(setup.seed, kStreamInit));
  ParamVector global = init_params(setup.model, init_rng);
  Rng server_rng(derive_seed(setup.seed, kStreamServer));
  ServerMaps maps(num_clients);

  EsConfig es = setup.early_stop;
  es.enabled = setup.early_stop.enabled && strategy == StrategyKind::flrce;
  const bool relational = strategy != StrategyKind::random_fedavg;

  for (int t = 1; t <= setup.max_rounds; ++t) {
    Selection sel;
    if (relational) {
      sel = select_clients(maps.heuristics, t, setup.participants, setup.explore, server_rng);
    } else {
      sel.mode = SelectionMode::explore;
      sel.clients = sample_uniform(num_clients, setup.participants, server_rng);
    }

    // Local training fan-out (deterministic per spec: seed depends only on
    // the experiment seed, client id and round).
    std::vector<ParamVector> updates;
    std::vector<std::size_t> sample_counts;
    updates.reserve(sel.clients.size());
    for (const int k : sel.clients) {
      const auto u = local_train(global, shards[static_cast<std::size_t>(k)], setup.model,
                                 setup.train,
                                 derive_seed(setup.seed, kStreamTrain,
                                             static_cast<std::uint64_t>(k),
                                             static_cast<std::uint64_t>(t)));
      if (!u) continue;  // client-skip: no data
      updates.push_back(*u);
      sample_counts.push_back(shards[static_cast<std::size_t>(k)].size());
    }
    if (updates.empty()) throw ConfigError("run_experiment: every selected client skipped");

    // Commit phase, in ascending client-id order: latest-update map first so
    // same-round peers relate synchronously.
    if (relational) {
      for (std::size_t i = 0; i < sel.clients.size(); ++i) {
        maps.latest[static_cast<std::size_t>(sel.clients[i])] =
            AnchoredUpdate{updates[i], global, t};
      }
    }

    std::vector<std::pair<ParamVector, std::size_t>> weighted;
    weighted.reserve(updates.size());
    for (std::size_t i = 0; i < updates.size(); ++i) {
      weighted.emplace_back(updates[i], sample_counts[i]);
    }
    const ParamVector next = aggregate(global, weighted);

    if (relational) {
      for (const int k : sel.clients) {
        const auto& stored = maps.latest[static_cast<std::size_t>(k)];
        update_relationships(maps, k, stored->update, global, t);
        maps.heuristics[static_cast<std::size_t>(k)] = heuristic_of(maps.omega, k);
      }
    }

    const EsOutcome es_out =
        relational ? es_evaluate(sel.mode, updates, setup.participants, es)
                   : EsOutcome{};

    RoundRecord record;
    record.round = t;
    record.mode = sel.mode;
    record.selected = sel.clients;
    record.mean_accuracy = evaluate_global(next, setup.model, shards);
    record.conflicts = es_out.conflicts;
    record.es_triggered = es_out.triggered;
    record.energy_joules = round_energy(sample_counts, setup.train.local_epochs, setup.cost);
    record.bytes = round_bandwidth(static_cast<int>(updates.size()),
                                   setup.model.param_count(), setup.cost);
    result.totals.add_round(record.energy_joules, record.bytes);
    result.records.push_back(record);

    if (observer) observer(record, maps, global, updates);

    global = next;
    if (es_out.triggered) {
      result.stopped_early = true;
      break;
    }
  }

  result.final_model = std::move(global);
  result.omega = maps.omega;
  result.heuristics = maps.heuristics;
  result.rounds_run = static_cast<int>(result.records.size());
  result.final_accuracy = result.records.back().mean_accuracy;
  return result;
}

}  // namespace flrce
