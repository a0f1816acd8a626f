#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace flrce {

// Flat parameter vector. Global weights, local weights and parameter updates
// all live in the same coordinate space of fixed dimension d.
using ParamVector = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double squared_norm(std::span<const double> a) { return dot(a, a); }

inline double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (const double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline bool all_finite(std::span<const double> a) {
  for (const double x : a) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// y += alpha * x
inline void add_scaled(ParamVector& y, double alpha, std::span<const double> x) {
  assert(y.size() == x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

inline ParamVector subtract(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  ParamVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline ParamVector add(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  ParamVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

}  // namespace flrce
