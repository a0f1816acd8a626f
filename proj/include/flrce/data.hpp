#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flrce/errors.hpp"
#include "flrce/rng.hpp"

namespace flrce {

// A labeled feature table. Features are row-major (size() x feature_width),
// min-max normalized to [0, 1] per column at generation/load time.
struct Dataset {
  std::vector<double> features;
  int feature_width = 0;
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t size() const { return labels.size(); }

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * static_cast<std::size_t>(feature_width),
            static_cast<std::size_t>(feature_width)};
  }
};

// Per-class Dirichlet allocation of one dataset into `num_clients` shards.
struct PartitionSpec {
  double alpha = 0.1;
  int num_clients = 2;
  std::uint64_t seed = 0;
};

// Per-column min-max scaling to [0, 1]. Constant columns map to 0.
// Idempotent, so a saved-then-reloaded dataset keeps its values.
inline void normalize_min_max(Dataset& data) {
  const std::size_t n = data.size();
  const int w = data.feature_width;
  if (n == 0 || w == 0) return;
  for (int c = 0; c < w; ++c) {
    double lo = data.features[static_cast<std::size_t>(c)];
    double hi = lo;
    for (std::size_t r = 1; r < n; ++r) {
      const double x = data.features[r * static_cast<std::size_t>(w) + static_cast<std::size_t>(c)];
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    const double range = hi - lo;
    for (std::size_t r = 0; r < n; ++r) {
      double& x = data.features[r * static_cast<std::size_t>(w) + static_cast<std::size_t>(c)];
      x = range > 0.0 ? (x - lo) / range : 0.0;
    }
  }
}

// Gaussian class clusters with seeded per-class means in [0,1]^dim and
// isotropic standard deviation `spread`. Labels are balanced and class-major.
inline Dataset generate_synthetic(int classes, int per_class, int input_dim,
                                  double spread, std::uint64_t seed) {
  if (classes < 2) throw ConfigError("generate_synthetic: classes must be >= 2");
  if (per_class < 1) throw ConfigError("generate_synthetic: per_class must be >= 1");
  if (input_dim < 1) throw ConfigError("generate_synthetic: input_dim must be >= 1");
  if (spread < 0.0) throw ConfigError("generate_synthetic: spread must be >= 0");

  Rng rng(seed);
  std::vector<double> means(static_cast<std::size_t>(classes) * static_cast<std::size_t>(input_dim));
  for (auto& m : means) m = rng.uniform();

  Dataset out;
  out.feature_width = input_dim;
  out.num_classes = classes;
  out.features.reserve(static_cast<std::size_t>(classes) * static_cast<std::size_t>(per_class) *
                       static_cast<std::size_t>(input_dim));
  out.labels.reserve(static_cast<std::size_t>(classes) * static_cast<std::size_t>(per_class));
  for (int c = 0; c < classes; ++c) {
    for (int s = 0; s < per_class; ++s) {
      for (int d = 0; d < input_dim; ++d) {
        const double mu = means[static_cast<std::size_t>(c) * static_cast<std::size_t>(input_dim) +
                                static_cast<std::size_t>(d)];
        out.features.push_back(mu + spread * rng.normal());
      }
      out.labels.push_back(c);
    }
  }
  normalize_min_max(out);
  return out;
}

namespace detail {

// Moves one sample (by source index) between shard index lists.
inline void move_sample(std::vector<std::size_t>& from, std::vector<std::size_t>& to,
                        std::size_t pos_in_from) {
  to.push_back(from[pos_in_from]);
  from.erase(from.begin() + static_cast<std::ptrdiff_t>(pos_in_from));
}

}  // namespace detail

// Splits `data` into num_clients shards. For every class, the proportion each
// client receives is drawn from a symmetric Dirichlet(alpha); samples of that
// class are shuffled and sliced by the cumulative proportions. Every sample is
// assigned exactly once. Shards left empty by the draw are repaired by moving
// one sample of the globally most common class from rotating donor shards.
inline std::vector<Dataset> partition_dirichlet(const Dataset& data,
                                                const PartitionSpec& spec) {
  const std::size_t n = data.size();
  const int m = spec.num_clients;
  if (spec.alpha <= 0.0) throw ConfigError("partition: alpha must be > 0");
  if (m < 2) throw ConfigError("partition: num_clients must be >= 2");
  if (static_cast<std::size_t>(m) > n) {
    throw ConfigError("partition: more clients than samples");
  }

  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(data.num_classes));
  for (std::size_t i = 0; i < n; ++i) {
    by_class[static_cast<std::size_t>(data.labels[i])].push_back(i);
  }
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    if (by_class[c].empty()) {
      throw ConfigError("partition: class " + std::to_string(c) + " has no samples");
    }
  }

  Rng rng(spec.seed);
  std::vector<std::vector<std::size_t>> shard_idx(static_cast<std::size_t>(m));
  for (auto& idx : by_class) {
    rng.shuffle(idx);
    const auto props = rng.dirichlet(spec.alpha, static_cast<std::size_t>(m));
    const std::size_t total = idx.size();
    double cum = 0.0;
    std::size_t prev = 0;
    for (int k = 0; k < m; ++k) {
      cum += props[static_cast<std::size_t>(k)];
      std::size_t cut = k + 1 == m
                            ? total
                            : static_cast<std::size_t>(std::llround(cum * static_cast<double>(total)));
      cut = std::clamp(cut, prev, total);
      for (std::size_t i = prev; i < cut; ++i) {
        shard_idx[static_cast<std::size_t>(k)].push_back(idx[i]);
      }
      prev = cut;
    }
  }

  // Empty-shard repair: the globally most common class donates, round-robin
  // over shards that can spare a sample.
  std::vector<std::size_t> class_counts(static_cast<std::size_t>(data.num_classes), 0);
  for (const int y : data.labels) ++class_counts[static_cast<std::size_t>(y)];
  const int common_class = static_cast<int>(
      std::max_element(class_counts.begin(), class_counts.end()) - class_counts.begin());

  int donor_cursor = 0;
  for (int s = 0; s < m; ++s) {
    auto& shard = shard_idx[static_cast<std::size_t>(s)];
    if (!shard.empty()) continue;
    bool repaired = false;
    for (int step = 0; step < m && !repaired; ++step) {
      const int d = (donor_cursor + step) % m;
      auto& donor = shard_idx[static_cast<std::size_t>(d)];
      if (d == s || donor.size() < 2) continue;
      for (std::size_t i = donor.size(); i > 0; --i) {
        if (data.labels[donor[i - 1]] == common_class) {
          detail::move_sample(donor, shard, i - 1);
          donor_cursor = (d + 1) % m;
          repaired = true;
          break;
        }
      }
    }
    if (!repaired) {
      for (int step = 0; step < m && !repaired; ++step) {
        const int d = (donor_cursor + step) % m;
        auto& donor = shard_idx[static_cast<std::size_t>(d)];
        if (d == s || donor.size() < 2) continue;
        detail::move_sample(donor, shard, donor.size() - 1);
        donor_cursor = (d + 1) % m;
        repaired = true;
      }
    }
    if (!repaired) throw ConfigError("partition: unable to repair empty shard");
  }

  std::vector<Dataset> shards(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    auto& shard = shards[static_cast<std::size_t>(k)];
    shard.feature_width = data.feature_width;
    shard.num_classes = data.num_classes;
    const auto& idx = shard_idx[static_cast<std::size_t>(k)];
    shard.labels.reserve(idx.size());
    shard.features.reserve(idx.size() * static_cast<std::size_t>(data.feature_width));
    for (const std::size_t i : idx) {
      const auto r = data.row(i);
      shard.features.insert(shard.features.end(), r.begin(), r.end());
      shard.labels.push_back(data.labels[i]);
    }
  }
  return shards;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
  }
  return out;
}

inline bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && !s.empty();
}

}  // namespace detail

// Loads a CSV with a required header row. Every column except `label_column`
// must be numeric; label values may be arbitrary strings and are re-indexed
// densely from 0 in order of first appearance. Features are min-max
// normalized after load.
inline Dataset load_csv(const std::string& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  const auto header = detail::split_csv_line(line);
  int label_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == label_column) {
      label_col = static_cast<int>(i);
      break;
    }
  }
  if (label_col < 0) {
    throw ParseError(path + ": label column '" + label_column + "' not found in header");
  }

  Dataset out;
  out.feature_width = static_cast<int>(header.size()) - 1;
  if (out.feature_width < 1) throw ParseError(path + ": no feature columns");

  std::map<std::string, int> label_ids;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (static_cast<int>(i) == label_col) continue;
      double x = 0.0;
      if (!detail::parse_double(fields[i], x) || !std::isfinite(x)) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": non-numeric feature '" +
                         fields[i] + "' in column '" + header[i] + "'");
      }
      out.features.push_back(x);
    }
    const auto [it, inserted] =
        label_ids.try_emplace(fields[static_cast<std::size_t>(label_col)],
                              static_cast<int>(label_ids.size()));
    out.labels.push_back(it->second);
  }
  if (out.labels.empty()) throw ParseError(path + ": no data rows");
  out.num_classes = static_cast<int>(label_ids.size());
  if (out.num_classes < 2) {
    throw ParseError(path + ": needs at least 2 distinct label values");
  }
  normalize_min_max(out);
  return out;
}

// Writes a dataset as CSV (feature columns f0.., then `label`). Doubles use
// 17 significant digits so values reload exactly.
inline void save_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path);
  for (int c = 0; c < data.feature_width; ++c) out << 'f' << c << ',';
  out << "label\n";
  char buf[40];
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto row = data.row(r);
    for (const double x : row) {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out << buf << ',';
    }
    out << data.labels[r] << '\n';
  }
}

}  // namespace flrce
