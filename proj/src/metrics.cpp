#include "finsler/metrics.hpp"

#include <cmath>

namespace finsler::metrics {

namespace {

// Shared kernel on the per-coordinate weights b_l = |v^l|^2 / (1-|z^l|^2)^2.
// The k-power sum is rescaled by its largest term before rooting, so large k
// cannot overflow; b identically zero gives 0 (v = 0).
double f2_from_weights(const MetricParams& p, const Eigen::VectorXd& b) {
  const double quad = b.sum();
  if (p.t == 0.0) return quad;
  const double bmax = b.maxCoeff();
  double tterm = 0.0;
  if (bmax > 0.0) {
    double s = 0.0;
    for (Eigen::Index l = 0; l < b.size(); ++l) {
      const double beta = b[l] / bmax;
      double pk = 1.0;
      for (int j = 0; j < p.k; ++j) pk *= beta;
      s += pk;
    }
    tterm = bmax * std::pow(s, 1.0 / p.k);
  }
  return (quad + p.t * tterm) / (1.0 + p.t);
}

Eigen::VectorXd weights(const PolydiscPoint& z, const TangentVector& v) {
  Eigen::VectorXd b(v.dim());
  for (int l = 0; l < v.dim(); ++l) {
    const double g = 1.0 - std::norm(z[l]);
    b[l] = std::norm(v[l]) / (g * g);
  }
  return b;
}

}  // namespace

MetricValue eval_F2(const MetricParams& p, const PolydiscPoint& z, const TangentVector& v) {
  require_same_dim(z, v);
  const double f2 = f2_from_weights(p, weights(z, v));
  return MetricValue{std::sqrt(f2), f2};
}

double eval_phi2(const MetricParams& p, const TangentVector& v) {
  Eigen::VectorXd b(v.dim());
  for (int l = 0; l < v.dim(); ++l) b[l] = std::norm(v[l]);
  return f2_from_weights(p, b);
}

double eval_bergman_F2(const PolydiscPoint& z, const TangentVector& v) {
  require_same_dim(z, v);
  return weights(z, v).sum();
}

double minkowski_p(const CVector& z) {
  double s = 0.0;
  for (Eigen::Index l = 0; l < z.size(); ++l) s = std::max(s, std::abs(z[l]));
  return s;
}

bool indicatrix_contains(const MetricParams& p, const TangentVector& v) {
  return eval_phi2(p, v) < 1.0;
}

double indicatrix_radius(const MetricParams& p, const TangentVector& dir) {
  if (dir.is_zero()) throw std::invalid_argument("indicatrix_radius: direction must be nonzero");
  return 1.0 / std::sqrt(eval_phi2(p, dir));
}

}  // namespace finsler::metrics
