#include "finsler/automorphisms.hpp"

#include <algorithm>
#include <cmath>

namespace finsler::aut {

namespace {

Complex moebius(Complex a, Complex z) { return (z - a) / (1.0 - std::conj(a) * z); }

Complex phase(double th) { return Complex(std::cos(th), std::sin(th)); }

void validate(const AutElement& g) {
  const int m = g.dim();
  if (g.center.size() != m || g.phases.size() != m)
    throw std::invalid_argument("AutElement: field dimensions disagree");
  std::vector<char> seen(m, 0);
  for (int l = 0; l < m; ++l) {
    if (g.perm[l] < 0 || g.perm[l] >= m || seen[g.perm[l]])
      throw std::invalid_argument("AutElement: perm must be a bijection");
    seen[g.perm[l]] = 1;
    if (!(std::norm(g.center[l]) < 1.0))
      throw std::invalid_argument("AutElement: centers must lie inside the disc");
    if (!std::isfinite(g.phases[l]))
      throw std::invalid_argument("AutElement: phases must be finite");
  }
}

}  // namespace

AutElement identity(int m) {
  AutElement g{CVector::Zero(m), Eigen::VectorXd::Zero(m), std::vector<int>(m)};
  for (int l = 0; l < m; ++l) g.perm[l] = l;
  return g;
}

AutElement make_aut(CVector center, Eigen::VectorXd phases, std::vector<int> perm) {
  AutElement g{std::move(center), std::move(phases), std::move(perm)};
  validate(g);
  return g;
}

PolydiscPoint apply(const AutElement& g, const PolydiscPoint& z) {
  const int m = g.dim();
  if (z.dim() != m) throw std::invalid_argument("apply: dimension mismatch");
  CVector w(m);
  for (int l = 0; l < m; ++l) w[l] = phase(g.phases[l]) * moebius(g.center[l], z[g.perm[l]]);
  return PolydiscPoint(std::move(w));
}

TangentVector differential(const AutElement& g, const PolydiscPoint& z, const TangentVector& v) {
  const int m = g.dim();
  if (z.dim() != m || v.dim() != m) throw std::invalid_argument("differential: dimension mismatch");
  CVector w(m);
  for (int l = 0; l < m; ++l) {
    const Complex den = 1.0 - std::conj(g.center[l]) * z[g.perm[l]];
    w[l] = phase(g.phases[l]) * (1.0 - std::norm(g.center[l])) / (den * den) * v[g.perm[l]];
  }
  return TangentVector(std::move(w));
}

AutElement compose(const AutElement& g, const AutElement& h) {
  const int m = g.dim();
  if (h.dim() != m) throw std::invalid_argument("compose: dimension mismatch");
  AutElement out{CVector(m), Eigen::VectorXd(m), std::vector<int>(m)};
  for (int l = 0; l < m; ++l) {
    const int j = g.perm[l];
    // e^{ia} phi_a'(e^{ib} phi_b(u)) with phi_a the disc Moebius factor:
    // absorb the inner phase into the center, then contract the two factors.
    const Complex ap = g.center[l] * std::conj(phase(h.phases[j]));
    const Complex b = h.center[j];
    const Complex num = 1.0 + ap * std::conj(b);
    const Complex mu = num / std::conj(num);
    out.center[l] = (ap + b) / num;
    out.phases[l] = g.phases[l] + h.phases[j] + std::arg(mu);
    out.perm[l] = h.perm[j];
  }
  validate(out);
  return out;
}

AutElement invert(const AutElement& g) {
  const int m = g.dim();
  std::vector<int> inv(m);
  for (int l = 0; l < m; ++l) inv[g.perm[l]] = l;
  AutElement out{CVector(m), Eigen::VectorXd(m), std::vector<int>(m)};
  for (int j = 0; j < m; ++j) {
    const int l = inv[j];
    out.perm[j] = l;
    out.phases[j] = -g.phases[l];
    out.center[j] = -g.center[l] * phase(g.phases[l]);
  }
  validate(out);
  return out;
}

AutElement moebius_transport(const PolydiscPoint& z0) {
  AutElement g = identity(z0.dim());
  g.center = z0.coords();
  return g;
}

AutElement sample_isotropy(Rng& rng, int m) {
  if (m < 1) throw std::invalid_argument("sample_isotropy: m must be >= 1");
  AutElement g = identity(m);
  for (int l = 0; l < m; ++l) g.phases[l] = rng.angle();
  for (int l = m - 1; l > 0; --l) std::swap(g.perm[l], g.perm[rng.below(l + 1)]);
  return g;
}

AutElement sample_aut(Rng& rng, int m, double radius_cap) {
  AutElement g = sample_isotropy(rng, m);
  g.center = sample_polydisc_point(rng, m, radius_cap).coords();
  return g;
}

nlohmann::json to_json(const AutElement& g) {
  nlohmann::json j;
  for (int l = 0; l < g.dim(); ++l) {
    j["center"].push_back({g.center[l].real(), g.center[l].imag()});
    j["phases"].push_back(g.phases[l]);
    j["perm"].push_back(g.perm[l]);
  }
  return j;
}

AutElement aut_from_json(const nlohmann::json& j) {
  const auto& c = j.at("center");
  const int m = static_cast<int>(c.size());
  AutElement g{CVector(m), Eigen::VectorXd(m), std::vector<int>(m)};
  for (int l = 0; l < m; ++l) {
    g.center[l] = Complex(c[l][0].get<double>(), c[l][1].get<double>());
    g.phases[l] = j.at("phases")[l].get<double>();
    g.perm[l] = j.at("perm")[l].get<int>();
  }
  validate(g);
  return g;
}

}  // namespace finsler::aut
