#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>

#include "flrce/errors.hpp"
#include "flrce/param_vector.hpp"

namespace flrce {

// Absolute noise floor for distances; below this a ratio of distances is
// considered undefined.
inline constexpr double kGeoEpsilon = 1e-9;

// An update vector together with the global model it was computed against.
// The pair defines the ray used by the orthogonal-distance relationship:
// the ray starts at `anchor` and points along `update`.
struct AnchoredUpdate {
  ParamVector update;
  ParamVector anchor;
  int round = 0;
};

// Cosine similarity of two update vectors, clamped to [-1, 1].
// Undefined (nullopt) when either vector has zero norm. Inputs are scaled by
// their largest magnitude first so extreme entries neither overflow nor
// flush to zero.
inline std::optional<double> cossim(std::span<const double> a,
                                    std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ConfigError("cossim: dimension mismatch");
  }
  const double ma = max_abs(a);
  const double mb = max_abs(b);
  if (ma == 0.0 || mb == 0.0) return std::nullopt;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] / ma;
    const double y = b[i] / mb;
    saa += x * x;
    sbb += y * y;
    sab += x * y;
  }
  // Equal sums mean equal scaled vectors (Cauchy-Schwarz equality); report
  // the exact extreme instead of a value one ulp off.
  if (sab == saa && saa == sbb) return 1.0;
  if (sab == -saa && saa == sbb) return -1.0;
  const double denom = std::sqrt(saa) * std::sqrt(sbb);
  if (denom == 0.0) return std::nullopt;
  return std::clamp(sab / denom, -1.0, 1.0);
}

// Euclidean distance from point p to the line through `anchor` with
// direction `direction`. Undefined when the direction has zero norm.
inline std::optional<double> orth_dist(std::span<const double> p,
                                       std::span<const double> anchor,
                                       std::span<const double> direction) {
  if (p.size() != anchor.size() || p.size() != direction.size()) {
    throw ConfigError("orth_dist: dimension mismatch");
  }
  const double md = max_abs(direction);
  if (md == 0.0) return std::nullopt;
  double sdd = 0.0;
  for (const double d : direction) {
    const double x = d / md;
    sdd += x * x;
  }
  const double s = std::sqrt(sdd);  // |direction| / md
  // t = (p - anchor) . unit(direction)
  double t = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    t += (p[i] - anchor[i]) * (direction[i] / md / s);
  }
  double res = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = (p[i] - anchor[i]) - t * (direction[i] / md / s);
    res += r * r;
  }
  return std::sqrt(res);
}

inline std::optional<double> orth_dist(std::span<const double> p,
                                       const AnchoredUpdate& line) {
  return orth_dist(p, line.anchor, line.update);
}

// Relationship degree between a fresh update u_p and a stale stored update,
// from the change of the global model's orthogonal distance to the stored
// ray: max(1 - d_p / d_o, -1) with d_o = dist(w, ray), d_p = dist(w + u_p, ray).
// Positive when applying u_p moves the global model toward the ray, negative
// when it moves away. Undefined when the ray direction is zero or when the
// model already sits on the ray (d_o below the noise floor).
inline std::optional<double> relate_async(std::span<const double> global_w,
                                          std::span<const double> u_p,
                                          const AnchoredUpdate& stored) {
  const auto d_o = orth_dist(global_w, stored);
  if (!d_o || *d_o < kGeoEpsilon) return std::nullopt;
  ParamVector moved(global_w.begin(), global_w.end());
  add_scaled(moved, 1.0, u_p);
  const auto d_p = orth_dist(moved, stored);
  if (!d_p) return std::nullopt;
  return std::max(1.0 - *d_p / *d_o, -1.0);
}

}  // namespace flrce
