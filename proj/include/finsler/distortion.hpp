#pragma once

#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "finsler/core.hpp"
#include "finsler/metrics.hpp"

#include <json.hpp>

namespace finsler::distortion {

/// Normalized convex factors on the unit disc (f(0) = 0, f'(0) = 1).
struct HalfPlaneMoebius {
  Complex c;  ///< |c| <= 1; f(z) = z/(1-cz), f'(z) = 1/(1-cz)^2
};
struct LogHalf {};        ///< f(z) = log((1+z)/(1-z))/2, f'(z) = 1/(1-z^2)
struct IdentityFactor {};

using ConvexFactor = std::variant<HalfPlaneMoebius, LogHalf, IdentityFactor>;

ConvexFactor make_half_plane_moebius(Complex c);

Complex factor_value(const ConvexFactor& f, Complex z);
Complex factor_derivative(const ConvexFactor& f, Complex z);

/// Coordinatewise product of normalized convex factors,
/// f(z) = (f_1(z^1), ..., f_m(z^m)); the general normalized biholomorphic
/// convex mapping of the polydisc after the usual diagonal normalization.
struct ConvexMapping {
  std::vector<ConvexFactor> factors;
  int dim() const { return static_cast<int>(factors.size()); }
};

CVector eval_convex(const ConvexMapping& f, const PolydiscPoint& z);
CVector derivative_diag(const ConvexMapping& f, const PolydiscPoint& z);

struct LoewnerBounds {
  double lower;  ///< 1/(1+|z|)^2
  double value;  ///< |f'(z)|
  double upper;  ///< 1/(1-|z|)^2
};

/// Returns the one-variable distortion sandwich and checks it holds.
LoewnerBounds loewner_bounds(const ConvexFactor& f, Complex z);

struct DistortionReport {
  long trials = 0;
  /// max over trials of F^2(0; f_* v) / upper bound, and min over lower bound
  double max_upper_ratio = 0.0;
  double min_lower_ratio = std::numeric_limits<double>::infinity();
  bool violated = false;
  std::optional<CVector> worst_z;
};

struct DistortionOptions {
  double radius_cap = 0.95;
  Tolerance tol{};
};

/// Theorem-level check of
///   [(1-p)/(1+p)]^2 F^2(z;v) <= F^2(0; f_*(z)v) <= [(1+p)/(1-p)]^2 F^2(z;v)
/// over random (z, v), p = minkowski_p(z).
DistortionReport verify_distortion(const MetricParams& p, const ConvexMapping& f, long trials,
                                   Rng rng, const DistortionOptions& opt = {});

struct RadialDistortionReport {
  long trials = 0;
  double max_upper_ratio = 0.0;
  double min_lower_ratio = std::numeric_limits<double>::infinity();
  /// residuals of the sandwich p^2/(1-p^2)^2 <= F^2(z;z) <= M p^2/(1-p^2)^2
  double max_sandwich_upper = 0.0;
  double min_sandwich_lower = std::numeric_limits<double>::infinity();
  bool violated = false;
  std::optional<CVector> worst_z;
};

/// Radial corollary: p^2/(1+p)^4 <= F^2(0; f_*(z)z) <= M p^2/(1-p)^4
/// with M = (m + t m^{1/k})/(1+t), plus the F^2(z;z) sandwich it rests on.
RadialDistortionReport verify_distortion_radial(const MetricParams& p, const ConvexMapping& f,
                                                long trials, Rng rng,
                                                const DistortionOptions& opt = {});

ConvexMapping sample_convex_mapping(Rng& rng, int m);

nlohmann::json to_json(const ConvexMapping& f);
ConvexMapping convex_from_json(const nlohmann::json& j);

}  // namespace finsler::distortion
