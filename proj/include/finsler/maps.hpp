#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "finsler/automorphisms.hpp"
#include "finsler/core.hpp"
#include "finsler/distortion.hpp"
#include "finsler/metrics.hpp"

#include <json.hpp>

namespace finsler::maps {

struct HolomorphicMap;

/// w = weights * z with weights an n-by-m complex matrix; row l carries the
/// coefficients of target coordinate l. Construction checks the row-sum
/// criterion, which is necessary and sufficient for mapping P_m into P_n.
struct Linear {
  CMatrix weights;
};

/// Per-target disc Moebius factor applied to one chosen source coordinate:
///   w^l = e^{i phase_l} (z^{source_l} - a_l) / (1 - conj(a_l) z^{source_l}).
struct CoordMoebius {
  struct Coord {
    int source = 0;
    Complex a;      ///< |a| < 1
    double phase = 0.0;
  };
  int source_dim = 0;
  std::vector<Coord> coords;
};

/// The sharpness witness f_0(z) = (z^1, ..., z^1).
struct Extremal {
  int source_dim = 0;
  int target_dim = 0;
};

/// Coordinatewise N-th power of a 1-homogeneous inner map, so that
/// f(lambda z) = lambda^N f(z).
struct HomogeneousPower {
  std::shared_ptr<const HolomorphicMap> inner;
  int degree = 1;
};

/// Diagonal convex mapping reused as a map node; its image need not stay in
/// the polydisc, eval rejects points that leave it.
struct ConvexProduct {
  distortion::ConvexMapping mapping;
};

/// stages[0] applied first.
struct Composed {
  std::vector<HolomorphicMap> stages;
};

struct HolomorphicMap {
  std::variant<Linear, CoordMoebius, Extremal, HomogeneousPower, ConvexProduct, Composed> node;

  int source_dim() const;
  int target_dim() const;
};

enum class MapFamily { linear, coord_moebius, extremal, homogeneous, convex_product, composed };

HolomorphicMap make_linear(CMatrix weights);
HolomorphicMap make_coord_moebius(int source_dim, std::vector<CoordMoebius::Coord> coords);
HolomorphicMap make_extremal(int m, int n);
HolomorphicMap make_homogeneous(HolomorphicMap inner, int degree);
HolomorphicMap make_convex_product(distortion::ConvexMapping mapping);
HolomorphicMap make_composed(std::vector<HolomorphicMap> stages);

/// View g in Aut(P_m) as a polydisc-to-polydisc map node.
HolomorphicMap from_automorphism(const aut::AutElement& g);

PolydiscPoint eval(const HolomorphicMap& f, const PolydiscPoint& z);

/// Exact complex Jacobian, entries J(l, i) = d f_l / d z^i at z.
CMatrix jacobian(const HolomorphicMap& f, const PolydiscPoint& z);

TangentVector pushforward(const HolomorphicMap& f, const PolydiscPoint& z,
                          const TangentVector& v);

/// (f^* F~^2)(z; v) = F~^2_{t~,k~}(f(z); f_*(v)).
double pullback_F2(const MetricParams& p_target, const HolomorphicMap& f, const PolydiscPoint& z,
                   const TangentVector& v);

/// Row-sum criterion: every target row satisfies sum_i |a_{il}| <= 1 + slack.
bool row_sum_admissible(const CMatrix& weights, double slack = 0.0);

/// Linear part of a map fixing the origin; admissible by the Schwarz lemma
/// for the linear terms.
HolomorphicMap linear_part(const HolomorphicMap& f);

/// Sampled Linear maps draw nonnegative row weights summing to <= 1 and then
/// random phases, so admissibility holds by construction.
HolomorphicMap sample_map(Rng& rng, MapFamily family, int m, int n, double moebius_cap = 0.95);

nlohmann::json to_json(const HolomorphicMap& f);
HolomorphicMap map_from_json(const nlohmann::json& j);

}  // namespace finsler::maps
