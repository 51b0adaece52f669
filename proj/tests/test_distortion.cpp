#include <doctest.h>

#include <cmath>

#include "finsler/distortion.hpp"

using namespace finsler;
using namespace finsler::distortion;

namespace {

ConvexMapping all_moebius(int m, const std::vector<double>& thetas) {
  ConvexMapping f;
  for (int l = 0; l < m; ++l)
    f.factors.push_back(make_half_plane_moebius(std::polar(1.0, thetas[l])));
  return f;
}

ConvexMapping identity_mapping(int m) {
  ConvexMapping f;
  for (int l = 0; l < m; ++l) f.factors.emplace_back(IdentityFactor{});
  return f;
}

}  // namespace

TEST_CASE("factor values and derivatives") {
  const ConvexFactor id = IdentityFactor{};
  const ConvexFactor lg = LogHalf{};
  const ConvexFactor mo = make_half_plane_moebius(Complex(1.0, 0.0));

  CHECK(factor_value(id, Complex(0.3, -0.4)) == Complex(0.3, -0.4));
  CHECK(factor_derivative(id, Complex(0.9, 0.0)) == Complex(1.0, 0.0));

  CHECK(std::abs(factor_value(lg, Complex(0.0, 0.0))) == 0.0);
  CHECK(factor_derivative(lg, Complex(0.0, 0.0)) == Complex(1.0, 0.0));
  CHECK(std::abs(factor_derivative(lg, Complex(0.5, 0.0)) - 4.0 / 3.0) <= 1e-15);

  const double b = 0.37;
  CHECK(std::abs(factor_derivative(mo, Complex(b, 0.0)) - 1.0 / ((1 - b) * (1 - b))) <= 1e-14);
  CHECK_THROWS_AS(make_half_plane_moebius(Complex(1.1, 0.0)), std::invalid_argument);
}

TEST_CASE("convex mapping evaluation is coordinatewise") {
  ConvexMapping f = identity_mapping(2);
  f.factors[1] = LogHalf{};
  CVector z(2);
  z << Complex(0.2, 0.1), Complex(0.4, 0.0);
  const PolydiscPoint zp(z);
  const CVector w = eval_convex(f, zp);
  CHECK(w[0] == z[0]);
  CHECK(std::abs(w[1] - 0.5 * std::log((1.0 + z[1]) / (1.0 - z[1]))) <= 1e-15);
  const CVector d = derivative_diag(f, zp);
  CHECK(d[0] == Complex(1.0, 0.0));
}

TEST_CASE("loewner sandwich") {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    Rng s = rng.stream(i);
    const Complex z = s.unit_disc(0.97);
    const ConvexFactor fac = [&]() -> ConvexFactor {
      switch (s.below(3)) {
        case 0: return IdentityFactor{};
        case 1: return LogHalf{};
        default: return make_half_plane_moebius(s.unit_disc(1.0));
      }
    }();
    const auto b = loewner_bounds(fac, z);
    CHECK(b.lower <= b.value * (1.0 + 1e-12));
    CHECK(b.value <= b.upper * (1.0 + 1e-12));
  }
  // c = 1 attains the upper bound on the positive real axis
  const auto up = loewner_bounds(make_half_plane_moebius(Complex(1.0, 0.0)), Complex(0.6, 0.0));
  CHECK(up.value == doctest::Approx(up.upper).epsilon(1e-14));
  const auto mid = loewner_bounds(LogHalf{}, Complex(0.5, 0.0));
  CHECK(mid.value == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(mid.value > mid.lower);
  CHECK(mid.value < mid.upper);
  CHECK_THROWS_AS(loewner_bounds(LogHalf{}, Complex(1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("identity mapping satisfies the distortion bounds by brute force") {
  Rng rng(7);
  for (double t : {0.0, 1.0})
    for (int k : {2, 3}) {
      const MetricParams p(t, k);
      const ConvexMapping f = identity_mapping(3);
      const PolydiscPoint origin = PolydiscPoint::origin(3);
      for (int i = 0; i < 1000; ++i) {
        Rng s = rng.stream(i);
        const PolydiscPoint z = sample_polydisc_point(s, 3, 0.95);
        const TangentVector v = sample_tangent(s, 3);
        const double pz = metrics::minkowski_p(z.coords());
        const double base = metrics::eval_F2(p, z, v).F2;
        const double mid = metrics::eval_F2(p, origin, v).F2;  // f' == 1
        CHECK(mid >= std::pow((1 - pz) / (1 + pz), 2) * base * (1 - 1e-12));
        CHECK(mid <= std::pow((1 + pz) / (1 - pz), 2) * base * (1 + 1e-12));
      }
    }
}

TEST_CASE("upper and lower equality witnesses") {
  const int m = 3;
  std::vector<double> thetas{0.0, 0.0, 0.0};
  const ConvexMapping f = all_moebius(m, thetas);  // f_l = z/(1-z)
  const PolydiscPoint origin = PolydiscPoint::origin(m);
  Rng rng(11);
  for (double t : {0.0, 0.5, 1.0, 3.0})
    for (int k : {2, 3, 5}) {
      const MetricParams p(t, k);
      for (double b : {0.1, 0.5, 0.9}) {
        const PolydiscPoint zb(CVector::Constant(m, Complex(b, 0.0)));
        const PolydiscPoint za(CVector::Constant(m, Complex(-b, 0.0)));
        for (int q = 0; q < 5; ++q) {
          Rng s = rng.stream(q);
          const TangentVector v = sample_tangent(s, m);
          const double fb = metrics::eval_F2(p, zb, v).F2;
          const double fa = metrics::eval_F2(p, za, v).F2;
          const double mid_b = metrics::eval_F2(
              p, origin, TangentVector(derivative_diag(f, zb).cwiseProduct(v.coords()))).F2;
          const double mid_a = metrics::eval_F2(
              p, origin, TangentVector(derivative_diag(f, za).cwiseProduct(v.coords()))).F2;
          CHECK(mid_b == doctest::Approx(std::pow((1 + b) / (1 - b), 2) * fb).epsilon(1e-10));
          CHECK(mid_a == doctest::Approx(std::pow((1 - b) / (1 + b), 2) * fa).epsilon(1e-10));
        }
      }
    }
}

TEST_CASE("randomized distortion verification never violates") {
  Rng rng(13);
  for (double t : {0.0, 1.0, 3.0})
    for (int k : {2, 5}) {
      const MetricParams p(t, k);
      for (int q = 0; q < 8; ++q) {
        Rng s = rng.stream(q);
        const ConvexMapping f = sample_convex_mapping(s, 2 + s.below(2));
        const auto rep = verify_distortion(p, f, 1000, Rng(100 + q));
        CHECK_FALSE(rep.violated);
        CHECK(rep.max_upper_ratio <= 1.0 + 1e-9);
        CHECK(rep.min_lower_ratio >= 1.0 - 1e-9);
        const auto rrep = verify_distortion_radial(p, f, 1000, Rng(200 + q));
        CHECK_FALSE(rrep.violated);
      }
    }
}

TEST_CASE("radial corollary equality with matched phases") {
  const int m = 3;
  Rng rng(17);
  for (double t : {0.0, 1.0})
    for (int k : {2, 3}) {
      const MetricParams p(t, k);
      const double M = (m + t * std::pow(static_cast<double>(m), 1.0 / k)) / (1.0 + t);
      for (int q = 0; q < 20; ++q) {
        Rng s = rng.stream(q);
        const double b = s.uniform(0.05, 0.9);
        std::vector<double> psi(m);
        CVector z0(m);
        ConvexMapping f;
        for (int l = 0; l < m; ++l) {
          psi[l] = s.angle();
          z0[l] = std::polar(b, psi[l]);
          // factor parameter conjugate-aligned so c_l z0^l = b
          f.factors.push_back(make_half_plane_moebius(std::polar(1.0, -psi[l])));
        }
        const PolydiscPoint zp(z0);
        const double mid = metrics::eval_F2(
            p, PolydiscPoint::origin(m),
            TangentVector(derivative_diag(f, zp).cwiseProduct(z0))).F2;
        const double rhs = M * b * b / std::pow(1.0 - b, 4);
        CHECK(mid == doctest::Approx(rhs).epsilon(1e-10));
      }
    }
}

TEST_CASE("radial bounds vanish quadratically at the origin") {
  const MetricParams p(1.0, 2);
  ConvexMapping f = identity_mapping(2);
  const double eps = 1e-7;
  const PolydiscPoint z(CVector::Constant(2, Complex(eps, 0.0)));
  const double mid = metrics::eval_F2(p, PolydiscPoint::origin(2),
                                      TangentVector(derivative_diag(f, z).cwiseProduct(
                                          z.coords()))).F2;
  CHECK(mid <= 4.0 * eps * eps);
}

TEST_CASE("m=1, t=0 radial bounds are the one-variable distortion bounds") {
  const MetricParams p(0.0, 2);
  Rng rng(19);
  for (int i = 0; i < 500; ++i) {
    Rng s = rng.stream(i);
    const Complex z = s.unit_disc(0.9);
    if (std::abs(z) < 1e-3) continue;
    ConvexMapping f;
    f.factors.push_back(s.below(2) == 0
                            ? ConvexFactor(LogHalf{})
                            : make_half_plane_moebius(s.unit_disc(1.0)));
    CVector zc(1);
    zc << z;
    const PolydiscPoint zp(zc);
    const double mid = metrics::eval_F2(p, PolydiscPoint::origin(1),
                                        TangentVector(derivative_diag(f, zp).cwiseProduct(zc)))
                           .F2;
    const double r = std::abs(z);
    const double fp = std::abs(factor_derivative(f.factors[0], z));
    // middle term is |f'(z)|^2 |z|^2, so the bounds divide back to Loewner
    CHECK(mid == doctest::Approx(fp * fp * r * r).epsilon(1e-12));
    CHECK(fp >= 1.0 / std::pow(1.0 + r, 2) * (1 - 1e-12));
    CHECK(fp <= 1.0 / std::pow(1.0 - r, 2) * (1 + 1e-12));
  }
}

TEST_CASE("proof-step inequalities hold coordinatewise") {
  Rng rng(23);
  for (int i = 0; i < 2000; ++i) {
    Rng s = rng.stream(i);
    const int m = 1 + s.below(4);
    const PolydiscPoint z = sample_polydisc_point(s, m, 0.97);
    const double pz = metrics::minkowski_p(z.coords());
    for (int l = 0; l < m; ++l) {
      const double r = std::abs(z[l]);
      const double lhs_u = 1.0 / std::pow(1.0 - r, 4);
      const double rhs_u =
          1.0 / std::pow(1.0 - r * r, 2) * std::pow((1.0 + pz) / (1.0 - pz), 2);
      CHECK(lhs_u <= rhs_u * (1.0 + 1e-12));
      const double lhs_d = 1.0 / std::pow(1.0 + r, 4);
      const double rhs_d =
          1.0 / std::pow(1.0 - r * r, 2) * std::pow((1.0 - pz) / (1.0 + pz), 2);
      CHECK(lhs_d >= rhs_d * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("convex mapping json round trip") {
  Rng rng(29);
  for (int i = 0; i < 100; ++i) {
    Rng s = rng.stream(i);
    const int m = 1 + s.below(4);
    const ConvexMapping f = sample_convex_mapping(s, m);
    const ConvexMapping g = convex_from_json(to_json(f));
    const PolydiscPoint z = sample_polydisc_point(s, m, 0.9);
    CHECK((eval_convex(f, z) - eval_convex(g, z)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((derivative_diag(f, z) - derivative_diag(g, z)).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(convex_from_json(nlohmann::json{{"factors", nlohmann::json::array()}}),
                  std::invalid_argument);
}
