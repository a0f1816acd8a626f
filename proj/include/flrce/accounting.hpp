#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flrce/errors.hpp"

namespace flrce {

// Declared cost model standing in for measured hardware energy and a float32
// wire format. bytes_per_param defaults to 4 (32-bit floats on the wire);
// set 32 to reproduce a bits-as-bytes accounting instead.
struct CostModel {
  double joules_per_sample_epoch = 0.01;
  std::uint64_t bytes_per_param = 4;
  std::uint64_t overhead_bytes_per_message = 0;

  void validate() const {
    if (joules_per_sample_epoch < 0.0) {
      throw ConfigError("cost.joules_per_sample_epoch must be >= 0");
    }
  }
};

struct ResourceTotals {
  double energy_joules = 0.0;
  std::uint64_t bytes = 0;
  int rounds = 0;

  void add_round(double energy, std::uint64_t round_bytes) {
    energy_joules += energy;
    bytes += round_bytes;
    ++rounds;
  }
};

// Bytes exchanged in one round: every selected client downloads and uploads
// one full parameter vector, plus per-message overhead both ways.
inline std::uint64_t round_bandwidth(int participants, std::size_t param_count,
                                     const CostModel& cm) {
  const auto p = static_cast<std::uint64_t>(participants);
  const auto d = static_cast<std::uint64_t>(param_count);
  return 2 * p * d * cm.bytes_per_param + 2 * p * cm.overhead_bytes_per_message;
}

// Energy for one round of local training: linear in samples x epochs over the
// selected clients.
inline double round_energy(const std::vector<std::size_t>& selected_sample_counts,
                           int local_epochs, const CostModel& cm) {
  double total = 0.0;
  for (const std::size_t n_k : selected_sample_counts) {
    total += cm.joules_per_sample_epoch * static_cast<double>(local_epochs) *
             static_cast<double>(n_k);
  }
  return total;
}

struct Efficiency {
  double accuracy_per_joule = 0.0;
  double accuracy_per_byte = 0.0;
};

// Final accuracy divided by total energy and by total bytes. Undefined when
// either total is zero.
inline std::optional<Efficiency> efficiency(double final_accuracy,
                                            const ResourceTotals& totals) {
  if (totals.energy_joules <= 0.0 || totals.bytes == 0) return std::nullopt;
  Efficiency e;
  e.accuracy_per_joule = final_accuracy / totals.energy_joules;
  e.accuracy_per_byte = final_accuracy / static_cast<double>(totals.bytes);
  return e;
}

}  // namespace flrce
