#pragma once

#include <optional>
#include <vector>

#include "flrce/errors.hpp"
#include "flrce/geometry.hpp"
#include "flrce/param_vector.hpp"
#include "flrce/selection.hpp"

namespace flrce {

struct EsConfig {
  double threshold = 0.0;  // psi
  bool enabled = true;

  void validate() const {
    if (threshold < 0.0) throw ConfigError("earlystop.psi must be >= 0");
  }
};

struct EsOutcome {
  std::optional<double> conflicts;  // present on exploit rounds only
  bool triggered = false;
};

// Average conflicting pairs among the round's updates: the number of ordered
// pairs (k, j) with strictly negative cosine similarity, divided by P.
// Zero-norm updates are excluded from pair counting.
inline double average_conflicts(const std::vector<ParamVector>& updates, int participants) {
  int conflicts = 0;
  for (std::size_t k = 0; k < updates.size(); ++k) {
    for (std::size_t j = 0; j < updates.size(); ++j) {
      if (j == k) continue;
      const auto c = cossim(updates[k], updates[j]);
      if (c && *c < 0.0) ++conflicts;
    }
  }
  return static_cast<double>(conflicts) / static_cast<double>(participants);
}

// Early-stopping criterion: never fires on explore rounds; on exploit rounds
// it fires when the average conflicting pairs reach the threshold.
inline EsOutcome es_evaluate(SelectionMode mode, const std::vector<ParamVector>& updates,
                             int participants, const EsConfig& cfg) {
  EsOutcome out;
  if (mode != SelectionMode::exploit) return out;
  out.conflicts = average_conflicts(updates, participants);
  out.triggered = cfg.enabled && *out.conflicts >= cfg.threshold;
  return out;
}

inline bool es_check(SelectionMode mode, const std::vector<ParamVector>& updates,
                     int participants, const EsConfig& cfg) {
  return es_evaluate(mode, updates, participants, cfg).triggered;
}

}  // namespace flrce
