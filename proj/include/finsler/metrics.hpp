#pragma once

#include "finsler/core.hpp"

namespace finsler::metrics {

struct MetricValue {
  double F = 0.0;   ///< F_{t,k}(z; v)
  double F2 = 0.0;  ///< squared value, F = sqrt(F2)
};

/// F^2_{t,k}(z; v) = [ sum_l |v^l|^2/(1-|z^l|^2)^2
///                     + t * ( sum_l |v^l|^{2k}/(1-|z^l|^2)^{2k} )^{1/k} ] / (1+t)
MetricValue eval_F2(const MetricParams& p, const PolydiscPoint& z, const TangentVector& v);

/// Norm at the origin: phi^2_{t,k}(v) = F^2_{t,k}(0; v).
double eval_phi2(const MetricParams& p, const TangentVector& v);

/// Bergman metric, i.e. the t = 0 member for every k.
double eval_bergman_F2(const PolydiscPoint& z, const TangentVector& v);

/// Minkowski functional of the polydisc: p(z) = max_l |z^l|.
/// Accepts any vector in C^m, not only interior points.
double minkowski_p(const CVector& z);

/// Strict membership v in I_{phi_{t,k}} = { phi_{t,k}(v) < 1 }. No tolerance.
bool indicatrix_contains(const MetricParams& p, const TangentVector& v);

/// Scale factor r with phi_{t,k}(r * dir) = 1; requires dir != 0.
double indicatrix_radius(const MetricParams& p, const TangentVector& dir);

}  // namespace finsler::metrics
