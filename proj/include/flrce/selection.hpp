#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "flrce/errors.hpp"
#include "flrce/rng.hpp"

namespace flrce {

// Per-round probability of exploring instead of exploiting; decays
// geometrically from initial_prob over rounds.
struct ExploreSchedule {
  double initial_prob = 1.0;
  double decay = 0.98;

  void validate() const {
    if (initial_prob < 0.0 || initial_prob > 1.0) {
      throw ConfigError("selection.explore_init must be in [0, 1]");
    }
    if (decay <= 0.0 || decay > 1.0) {
      throw ConfigError("selection.explore_decay must be in (0, 1]");
    }
  }
};

inline double explore_prob(int t, const ExploreSchedule& sched) {
  return sched.initial_prob * std::pow(sched.decay, t - 1);
}

enum class SelectionMode { explore, exploit };

struct Selection {
  std::vector<int> clients;  // ascending ids
  SelectionMode mode = SelectionMode::explore;
};

// Uniform sample of `count` distinct clients. This is the whole selection
// interface available to the random-selection baseline: pool size and rng
// only, no heuristic access.
inline std::vector<int> sample_uniform(int pool_size, int count, Rng& rng) {
  if (count > pool_size) {
    throw ConfigError("selection: participants exceed available clients");
  }
  return rng.sample_indices(pool_size, count);
}

// Explore-exploit selection: one coin per round decides the mode. Exploit
// takes the P clients with the largest heuristic values (ties to the smaller
// id); explore samples P clients uniformly without replacement.
inline Selection select_clients(const std::vector<double>& heuristics, int t, int count,
                                const ExploreSchedule& sched, Rng& rng) {
  const int pool_size = static_cast<int>(heuristics.size());
  if (count > pool_size) {
    throw ConfigError("selection: participants exceed available clients");
  }
  Selection sel;
  if (rng.uniform() < explore_prob(t, sched)) {
    sel.mode = SelectionMode::explore;
    sel.clients = sample_uniform(pool_size, count, rng);
    return sel;
  }
  sel.mode = SelectionMode::exploit;
  std::vector<int> order(static_cast<std::size_t>(pool_size));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return heuristics[static_cast<std::size_t>(a)] > heuristics[static_cast<std::size_t>(b)];
  });
  order.resize(static_cast<std::size_t>(count));
  std::sort(order.begin(), order.end());
  sel.clients = std::move(order);
  return sel;
}

}  // namespace flrce
