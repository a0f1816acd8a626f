#pragma once

#include <optional>
#include <vector>

#include "flrce/geometry.hpp"
#include "flrce/param_vector.hpp"

namespace flrce {

// Pairwise relationship degrees, M x M, entries in [-1, 1]. The diagonal is
// unused and stays 0.
class RelationshipMap {
 public:
  RelationshipMap() = default;
  explicit RelationshipMap(int num_clients)
      : m_(num_clients),
        omega_(static_cast<std::size_t>(num_clients) * static_cast<std::size_t>(num_clients), 0.0) {}

  int size() const { return m_; }

  double at(int p, int q) const {
    return omega_[static_cast<std::size_t>(p) * static_cast<std::size_t>(m_) +
                  static_cast<std::size_t>(q)];
  }

  void set(int p, int q, double value) {
    if (p == q) return;
    omega_[static_cast<std::size_t>(p) * static_cast<std::size_t>(m_) +
           static_cast<std::size_t>(q)] = value;
  }

 private:
  int m_ = 0;
  std::vector<double> omega_;
};

// Heuristic value of client k: the sum of its relationship degrees with all
// peers (diagonal excluded).
inline double heuristic_of(const RelationshipMap& omega, int k) {
  double s = 0.0;
  for (int j = 0; j < omega.size(); ++j) {
    if (j != k) s += omega.at(k, j);
  }
  return s;
}

// Server-side bookkeeping: relationship map, heuristic values, and each
// client's latest anchored update (which also carries the last active round).
struct ServerMaps {
  ServerMaps() = default;
  explicit ServerMaps(int num_clients)
      : omega(num_clients),
        heuristics(static_cast<std::size_t>(num_clients), 0.0),
        latest(static_cast<std::size_t>(num_clients)) {}

  RelationshipMap omega;
  std::vector<double> heuristics;
  std::vector<std::optional<AnchoredUpdate>> latest;

  int num_clients() const { return omega.size(); }

  // 0 when the client has never been active.
  int last_active_round(int k) const {
    const auto& e = latest[static_cast<std::size_t>(k)];
    return e ? e->round : 0;
  }
};

// Relationship modeling for client k's round-t update: refreshes row k of the
// relationship map against every peer with a stored update. Peers active at
// round t-1 or later compare by cosine similarity of updates; staler peers
// compare by the orthogonal-distance change of the global model relative to
// their stored ray. Pairs whose kernel is undefined keep their previous value.
inline void update_relationships(ServerMaps& maps, int k, const ParamVector& u_k,
                                 const ParamVector& global_w, int t) {
  for (int j = 0; j < maps.num_clients(); ++j) {
    if (j == k) continue;
    const auto& stored = maps.latest[static_cast<std::size_t>(j)];
    if (!stored) continue;
    std::optional<double> degree;
    if (stored->round >= t - 1) {
      degree = cossim(stored->update, u_k);
    } else {
      degree = relate_async(global_w, u_k, *stored);
    }
    if (degree) maps.omega.set(k, j, *degree);
  }
}

}  // namespace flrce
