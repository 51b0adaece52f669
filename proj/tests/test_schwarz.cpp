#include <doctest.h>

#include <array>
#include <cmath>

#include "finsler/schwarz.hpp"

using namespace finsler;
using namespace finsler::schwarz;

TEST_CASE("sharp constant degenerations") {
  for (int n : {1, 2, 3, 5}) {
    CHECK(sharp_constant(n, MetricParams(0.0, 2)) == doctest::Approx(n).epsilon(1e-15));
    CHECK(sharp_constant(n, MetricParams(0.0, 5)) == doctest::Approx(n).epsilon(1e-15));
  }
  for (double t : {0.0, 0.5, 1.0, 3.0})
    for (int k : {2, 3, 5})
      CHECK(sharp_constant(1, MetricParams(t, k)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sharp_constant(2, MetricParams(1.0, 2)) ==
        doctest::Approx((2.0 + std::sqrt(2.0)) / 2.0).epsilon(1e-15));
}

TEST_CASE("the extremal witness achieves the constant exactly") {
  for (int n : {1, 2, 3, 5})
    for (double tt : {0.0, 0.5, 1.0, 3.0})
      for (int kk : {2, 3, 5}) {
        const MetricParams pt(tt, kk);
        const double ratio =
            schwarz_ratio(MetricParams(1.0, 2), pt, maps::make_extremal(3, n),
                          PolydiscPoint::origin(3), TangentVector::axis(3, 0));
        CHECK(std::abs(ratio - sharp_constant(n, pt)) <= 1e-12);
      }
}

TEST_CASE("verify_schwarz reports the witness ratio and never a violation") {
  const std::array fams{maps::MapFamily::linear, maps::MapFamily::coord_moebius,
                        maps::MapFamily::extremal};
  const MetricParams ps(0.5, 3);
  const MetricParams pt(1.0, 2);
  const auto rep = verify_schwarz(ps, pt, fams, 2, 3, 2000, Rng(42));
  CHECK_FALSE(rep.violated);
  CHECK(rep.max_ratio == doctest::Approx(rep.sharp_constant).epsilon(1e-12));
  CHECK(rep.worst.has_value());
  CHECK(rep.trials == 2000);
}

TEST_CASE("identity map never expands, Bergman target bounded by n") {
  const std::array id_only{maps::MapFamily::linear};
  // identity map only: equal params, m = n, ratio <= 1
  Rng rng(5);
  const MetricParams p(1.5, 3);
  for (int i = 0; i < 500; ++i) {
    Rng s = rng.stream(i);
    const PolydiscPoint z = sample_polydisc_point(s, 3, 0.95);
    const TangentVector v = sample_tangent(s, 3);
    const double r =
        schwarz_ratio(p, p, maps::make_linear(CMatrix::Identity(3, 3)), z, v);
    CHECK(r <= 1.0 + 1e-12);
  }
  // t~ = 0 target: constant equals n
  const auto rep =
      verify_schwarz(p, MetricParams(0.0, 2), id_only, 2, 4, 3000, Rng(77));
  CHECK(rep.sharp_constant == doctest::Approx(4.0));
  CHECK(rep.max_ratio <= 4.0 * (1.0 + 1e-9));
  CHECK_FALSE(rep.violated);
}

TEST_CASE("norm-level lemma: bound, witnesses and degenerate map") {
  const MetricParams ps(0.5, 2);
  const MetricParams pt(1.0, 2);

  // extremal on the first axis attains equality
  const auto f0 = maps::make_extremal(3, 4);
  CVector z(3);
  z << Complex(0.55, -0.2), Complex(0.0, 0.0), Complex(0.0, 0.0);
  CHECK(norm_schwarz_ratio(ps, pt, f0, PolydiscPoint(z)) ==
        doctest::Approx(sharp_constant(4, pt)).epsilon(1e-12));

  const auto rep = verify_norm_schwarz(ps, pt, f0, 3000, Rng(11));
  CHECK_FALSE(rep.violated);

  // zero map stays at zero
  const auto zero = maps::make_linear(CMatrix::Zero(2, 3));
  CHECK(norm_schwarz_ratio(ps, pt, zero, PolydiscPoint(z)) == 0.0);

  // degree-N axis witness: equality against phi^{2N}
  for (int N : {1, 2, 3}) {
    const auto fN = maps::make_homogeneous(maps::make_extremal(3, 2), N);
    const double ratio = norm_schwarz_ratio(ps, pt, fN, PolydiscPoint(z));
    CHECK(std::abs(ratio - sharp_constant(2, pt)) <= 1e-10);
    const auto repN = verify_norm_schwarz(ps, pt, fN, 2000, Rng(13));
    CHECK_FALSE(repN.violated);
  }

  // maps that move the origin are rejected
  const auto moved = maps::make_coord_moebius(2, {{0, Complex(0.4, 0.0), 0.0},
                                                  {1, Complex(0.0, 0.0), 0.0}});
  CHECK_THROWS_AS(verify_norm_schwarz(ps, pt, moved, 10, Rng(1)), std::invalid_argument);
}

TEST_CASE("axis equality characterization") {
  const MetricParams ps(0.5, 2);
  const MetricParams pt(1.0, 3);

  CHECK(check_equality_axis(ps, pt, maps::make_extremal(3, 2), 0, 1));
  CHECK_FALSE(check_equality_axis(ps, pt, maps::make_extremal(3, 2), 1, 1));

  // a genuine Moebius factor moves the origin, so the precondition rejects it;
  // brute force confirms its axis restriction is no unimodular-linear map
  const auto moeb = maps::make_coord_moebius(
      2, {{0, Complex(0.3, 0.1), 0.2}, {0, Complex(0.0, 0.0), 0.0}});
  CHECK_THROWS_AS(check_equality_axis(ps, pt, moeb, 0, 1), std::invalid_argument);
  {
    auto axis_value = [&](double r) {
      CVector z = CVector::Zero(2);
      z[0] = Complex(r, 0.0);
      return eval(moeb, PolydiscPoint(z)).coords()[0];
    };
    const Complex c0 = (axis_value(0.2) - axis_value(0.0)) / 0.2;  // secant coefficient
    double dev = 0.0;
    for (int q = 1; q <= 100; ++q) {
      const double r = 0.8 * q / 100.0;
      dev = std::max(dev, std::abs(axis_value(r) - (axis_value(0.0) + c0 * r)));
    }
    CHECK(dev > 1e-3);
  }

  // phase rotations on the axis are exactly the equality family
  const auto rot = maps::make_coord_moebius(2, {{1, Complex(0.0, 0.0), 0.9},
                                                {1, Complex(0.0, 0.0), -0.4}});
  CHECK(check_equality_axis(ps, pt, rot, 1, 1));
  CHECK_FALSE(check_equality_axis(ps, pt, rot, 0, 1));

  // degree-N family
  for (int N : {2, 3}) {
    const auto fN = maps::make_homogeneous(maps::make_extremal(2, 3), N);
    CHECK(check_equality_axis(ps, pt, fN, 0, N));
    CHECK_FALSE(check_equality_axis(ps, pt, fN, 0, 1));
  }
}

TEST_CASE("equality at the origin matches the axis characterization on samples") {
  const MetricParams ps(0.0, 2);
  const MetricParams pt(2.0, 3);
  Rng rng(21);
  int positives = 0;
  for (int i = 0; i < 60; ++i) {
    Rng s = rng.stream(i);
    const int m = 1 + s.below(2), n = 1 + s.below(2);
    maps::HolomorphicMap f = s.below(2) == 0
                                 ? maps::sample_map(s, maps::MapFamily::linear, m, n)
                                 : maps::make_extremal(m, n);
    const double C = sharp_constant(n, pt);
    const double lhs = maps::pullback_F2(pt, f, PolydiscPoint::origin(m),
                                         TangentVector::axis(m, 0));
    const bool metric_equal = std::abs(lhs - C) <= 1e-10;
    const bool axis_equal = check_equality_axis(ps, pt, f, 0, 1);
    CHECK(metric_equal == axis_equal);
    positives += axis_equal ? 1 : 0;
  }
  CHECK(positives > 0);  // extremal draws guarantee both branches exercised
}

TEST_CASE("cartan rigidity diagnostic") {
  const MetricParams p(1.0, 2);
  Rng rng(31);

  // automorphisms: unit determinant modulus, hypothesis holds with equality
  for (int i = 0; i < 50; ++i) {
    Rng s = rng.stream(i);
    const int m = 1 + s.below(3);
    const auto g = aut::sample_aut(s, m, 0.9);
    const PolydiscPoint z0 = sample_polydisc_point(s, m, 0.9);
    const auto diag = cartan_rigidity_diagnostic(p, maps::from_automorphism(g), z0, 8,
                                                 Rng(1000 + i));
    CHECK(diag.det_modulus == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(diag.det_at_least_one);
    CHECK(diag.hypothesis_held);
  }

  // contraction z/2: hypothesis fails, |det| = 2^{-m}
  const int m = 3;
  const auto half = maps::make_linear(CMatrix(0.5 * CMatrix::Identity(m, m)));
  const auto diag = cartan_rigidity_diagnostic(p, half, PolydiscPoint::origin(m), 16, Rng(5));
  CHECK(diag.det_modulus == doctest::Approx(std::pow(2.0, -m)).epsilon(1e-13));
  CHECK_FALSE(diag.det_at_least_one);
  CHECK_FALSE(diag.hypothesis_held);
  for (int i = 0; i < m; ++i)
    CHECK(diag.eigenvalue_moduli[i] == doctest::Approx(0.5).epsilon(1e-13));

  const auto idm = maps::make_linear(CMatrix::Identity(m, m));
  const auto diag_id = cartan_rigidity_diagnostic(p, idm, PolydiscPoint::origin(m), 8, Rng(6));
  CHECK(diag_id.det_modulus == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(diag_id.det_at_least_one);
  CHECK(diag_id.hypothesis_held);
}

TEST_CASE("schwarz report serializes with a replayable worst case") {
  const std::array fams{maps::MapFamily::extremal};
  const auto rep = verify_schwarz(MetricParams(0.0, 2), MetricParams(1.0, 2), fams, 2, 2, 50,
                                  Rng(3));
  const auto j = to_json(rep);
  CHECK(j.at("max_ratio").get<double>() == rep.max_ratio);
  CHECK(j.contains("worst_case"));
  const auto f = maps::map_from_json(j.at("worst_case").at("map_spec"));
  CHECK(f.target_dim() == 2);
}
