#include "finsler/distortion.hpp"

#include <cmath>

namespace finsler::distortion {

namespace {

double sup_bound_factor(const MetricParams& p, int m) {
  return (m + p.t * std::pow(static_cast<double>(m), 1.0 / p.k)) / (1.0 + p.t);
}

}  // namespace

ConvexFactor make_half_plane_moebius(Complex c) {
  if (!(std::abs(c) <= 1.0 + 1e-15))
    throw std::invalid_argument("HalfPlaneMoebius: |c| <= 1 required");
  return HalfPlaneMoebius{c};
}

Complex factor_value(const ConvexFactor& f, Complex z) {
  return std::visit(
      [&](const auto& fac) -> Complex {
        using T = std::decay_t<decltype(fac)>;
        if constexpr (std::is_same_v<T, HalfPlaneMoebius>)
          return z / (1.0 - fac.c * z);
        else if constexpr (std::is_same_v<T, LogHalf>)
          return 0.5 * std::log((1.0 + z) / (1.0 - z));
        else
          return z;
      },
      f);
}

Complex factor_derivative(const ConvexFactor& f, Complex z) {
  return std::visit(
      [&](const auto& fac) -> Complex {
        using T = std::decay_t<decltype(fac)>;
        if constexpr (std::is_same_v<T, HalfPlaneMoebius>) {
          const Complex d = 1.0 - fac.c * z;
          return 1.0 / (d * d);
        } else if constexpr (std::is_same_v<T, LogHalf>) {
          return 1.0 / (1.0 - z * z);
        } else {
          return Complex(1.0, 0.0);
        }
      },
      f);
}

CVector eval_convex(const ConvexMapping& f, const PolydiscPoint& z) {
  if (z.dim() != f.dim()) throw std::invalid_argument("eval_convex: dimension mismatch");
  CVector w(f.dim());
  for (int l = 0; l < f.dim(); ++l) w[l] = factor_value(f.factors[l], z[l]);
  return w;
}

CVector derivative_diag(const ConvexMapping& f, const PolydiscPoint& z) {
  if (z.dim() != f.dim()) throw std::invalid_argument("derivative_diag: dimension mismatch");
  CVector w(f.dim());
  for (int l = 0; l < f.dim(); ++l) w[l] = factor_derivative(f.factors[l], z[l]);
  return w;
}

LoewnerBounds loewner_bounds(const ConvexFactor& f, Complex z) {
  const double r = std::abs(z);
  if (!(r < 1.0)) throw std::invalid_argument("loewner_bounds: |z| < 1 required");
  LoewnerBounds b{1.0 / ((1.0 + r) * (1.0 + r)), std::abs(factor_derivative(f, z)),
                  1.0 / ((1.0 - r) * (1.0 - r))};
  if (b.value < b.lower * (1.0 - 1e-12) || b.value > b.upper * (1.0 + 1e-12))
    throw std::logic_error("loewner_bounds: distortion sandwich violated");
  return b;
}

DistortionReport verify_distortion(const MetricParams& p, const ConvexMapping& f, long trials,
                                   Rng rng, const DistortionOptions& opt) {
  if (trials < 1) throw std::invalid_argument("verify_distortion: trials >= 1 required");
  const int m = f.dim();
  DistortionReport rep;
  rep.trials = trials;
  const PolydiscPoint origin = PolydiscPoint::origin(m);
  for (long i = 0; i < trials; ++i) {
    Rng s = rng.stream(static_cast<std::uint64_t>(i));
    const PolydiscPoint z = sample_polydisc_point(s, m, opt.radius_cap);
    const TangentVector v = sample_tangent(s, m);
    const double pz = metrics::minkowski_p(z.coords());
    const double base = metrics::eval_F2(p, z, v).F2;
    const double lo = std::pow((1.0 - pz) / (1.0 + pz), 2) * base;
    const double hi = std::pow((1.0 + pz) / (1.0 - pz), 2) * base;
    const CVector fd = derivative_diag(f, z);
    const double mid = metrics::eval_F2(p, origin, TangentVector(fd.cwiseProduct(v.coords()))).F2;
    const double upper_ratio = mid / hi;
    const double lower_ratio = mid / lo;
    const bool bad = mid > hi * (1.0 + opt.tol.rel_eq) || mid < lo * (1.0 - opt.tol.rel_eq);
    if (bad || upper_ratio > rep.max_upper_ratio) rep.worst_z = z.coords();
    rep.max_upper_ratio = std::max(rep.max_upper_ratio, upper_ratio);
    rep.min_lower_ratio = std::min(rep.min_lower_ratio, lower_ratio);
    rep.violated = rep.violated || bad;
  }
  return rep;
}

RadialDistortionReport verify_distortion_radial(const MetricParams& p, const ConvexMapping& f,
                                                long trials, Rng rng,
                                                const DistortionOptions& opt) {
  if (trials < 1) throw std::invalid_argument("verify_distortion_radial: trials >= 1 required");
  const int m = f.dim();
  const double M = sup_bound_factor(p, m);
  RadialDistortionReport rep;
  rep.trials = trials;
  const PolydiscPoint origin = PolydiscPoint::origin(m);
  for (long i = 0; i < trials; ++i) {
    Rng s = rng.stream(static_cast<std::uint64_t>(i));
    const PolydiscPoint z = sample_polydisc_point(s, m, opt.radius_cap);
    const double pz = metrics::minkowski_p(z.coords());
    if (pz == 0.0) continue;
    const CVector fd = derivative_diag(f, z);
    const double mid =
        metrics::eval_F2(p, origin, TangentVector(fd.cwiseProduct(z.coords()))).F2;
    const double lo = pz * pz / std::pow(1.0 + pz, 4);
    const double hi = M * pz * pz / std::pow(1.0 - pz, 4);
    // sandwich the corollary rests on, with v = z
    const double f2zz = metrics::eval_F2(p, z, TangentVector(z.coords())).F2;
    const double slo = pz * pz / std::pow(1.0 - pz * pz, 2);
    const double shi = M * slo;
    const bool bad = mid > hi * (1.0 + opt.tol.rel_eq) || mid < lo * (1.0 - opt.tol.rel_eq) ||
                     f2zz > shi * (1.0 + opt.tol.rel_eq) || f2zz < slo * (1.0 - opt.tol.rel_eq);
    if (bad || mid / hi > rep.max_upper_ratio) rep.worst_z = z.coords();
    rep.max_upper_ratio = std::max(rep.max_upper_ratio, mid / hi);
    rep.min_lower_ratio = std::min(rep.min_lower_ratio, mid / lo);
    rep.max_sandwich_upper = std::max(rep.max_sandwich_upper, f2zz / shi);
    rep.min_sandwich_lower = std::min(rep.min_sandwich_lower, f2zz / slo);
    rep.violated = rep.violated || bad;
  }
  return rep;
}

ConvexMapping sample_convex_mapping(Rng& rng, int m) {
  if (m < 1) throw std::invalid_argument("sample_convex_mapping: m must be >= 1");
  ConvexMapping f;
  f.factors.reserve(m);
  for (int l = 0; l < m; ++l) {
    switch (rng.below(4)) {
      case 0:
        f.factors.emplace_back(LogHalf{});
        break;
      case 1:
        f.factors.emplace_back(IdentityFactor{});
        break;
      case 2: {
        const double th = rng.angle();  // unimodular parameter: half-plane image
        f.factors.push_back(make_half_plane_moebius(Complex(std::cos(th), std::sin(th))));
        break;
      }
      default:
        f.factors.push_back(make_half_plane_moebius(rng.unit_disc(1.0)));
    }
  }
  return f;
}

nlohmann::json to_json(const ConvexMapping& f) {
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& fac : f.factors) {
    std::visit(
        [&](const auto& ff) {
          using T = std::decay_t<decltype(ff)>;
          if constexpr (std::is_same_v<T, HalfPlaneMoebius>)
            factors.push_back({{"type", "moebius"}, {"c", {ff.c.real(), ff.c.imag()}}});
          else if constexpr (std::is_same_v<T, LogHalf>)
            factors.push_back({{"type", "log"}});
          else
            factors.push_back({{"type", "id"}});
        },
        fac);
  }
  return nlohmann::json{{"factors", factors}};
}

ConvexMapping convex_from_json(const nlohmann::json& j) {
  ConvexMapping f;
  for (const auto& fac : j.at("factors")) {
    const std::string type = fac.at("type").get<std::string>();
    if (type == "moebius")
      f.factors.push_back(make_half_plane_moebius(
          Complex(fac.at("c")[0].get<double>(), fac.at("c")[1].get<double>())));
    else if (type == "log")
      f.factors.emplace_back(LogHalf{});
    else if (type == "id")
      f.factors.emplace_back(IdentityFactor{});
    else
      throw std::invalid_argument("convex_from_json: unknown factor type '" + type + "'");
  }
  if (f.factors.empty()) throw std::invalid_argument("convex_from_json: no factors");
  return f;
}

}  // namespace finsler::distortion
