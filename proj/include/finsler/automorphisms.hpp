#pragma once

#include <vector>

#include "finsler/core.hpp"

#include <json.hpp>

namespace finsler::aut {

/// Element of Aut(P_m) in the normal form
///   g(z)_l = e^{i phases[l]} * (z^{perm[l]} - center_l) / (1 - conj(center_l) z^{perm[l]}).
/// perm is 0-based; target coordinate l reads source coordinate perm[l].
struct AutElement {
  CVector center;            ///< Moebius centers, all strictly inside the disc
  Eigen::VectorXd phases;    ///< theta_l
  std::vector<int> perm;     ///< bijection of {0,...,m-1}

  int dim() const { return static_cast<int>(perm.size()); }
};

AutElement identity(int m);
AutElement make_aut(CVector center, Eigen::VectorXd phases, std::vector<int> perm);

PolydiscPoint apply(const AutElement& g, const PolydiscPoint& z);

/// Exact pushforward g_*(v) at z; each factor differentiates to
/// (1-|a|^2)/(1-conj(a) z)^2, no numerical differentiation.
TangentVector differential(const AutElement& g, const PolydiscPoint& z, const TangentVector& v);

/// Composition in closed normal form; apply(compose(g,h), z) == apply(g, apply(h,z)).
AutElement compose(const AutElement& g, const AutElement& h);
AutElement invert(const AutElement& g);

/// h_{z0}: trivial phases and permutation, sends z0 to the origin.
AutElement moebius_transport(const PolydiscPoint& z0);

/// Random element of the isotropy subgroup at 0 (phases + permutation).
AutElement sample_isotropy(Rng& rng, int m);

/// Random element of the full group: center, phases and permutation.
AutElement sample_aut(Rng& rng, int m, double radius_cap);

nlohmann::json to_json(const AutElement& g);
AutElement aut_from_json(const nlohmann::json& j);

}  // namespace finsler::aut
