#include <doctest.h>

#include <cmath>

#include "finsler/automorphisms.hpp"
#include "finsler/metrics.hpp"

using namespace finsler;
using namespace finsler::aut;

namespace {

double max_abs_diff(const CVector& a, const CVector& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("moebius transport sends its center to the origin") {
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    Rng s = rng.stream(i);
    const int m = 1 + s.below(4);
    const PolydiscPoint z0 = sample_polydisc_point(s, m, 0.95);
    const AutElement h = moebius_transport(z0);
    CHECK(apply(h, z0).coords().cwiseAbs().maxCoeff() <= 1e-15);
    // differential at the center is diag(1/(1-|z0^l|^2))
    const TangentVector v = sample_tangent(s, m);
    const TangentVector dv = differential(h, z0, v);
    for (int l = 0; l < m; ++l)
      CHECK(std::abs(dv[l] - v[l] / (1.0 - std::norm(z0[l]))) <= 1e-12 * std::abs(dv[l]) + 1e-15);
  }
  CHECK(apply(moebius_transport(PolydiscPoint::origin(3)), PolydiscPoint::origin(3))
            .coords()
            .isZero());
}

TEST_CASE("identity and pure permutations act as expected") {
  const AutElement id = identity(2);
  CVector z(2);
  z << Complex(0.2, 0.1), Complex(-0.4, 0.3);
  const PolydiscPoint zp(z);
  CHECK(max_abs_diff(apply(id, zp).coords(), z) == 0.0);
  CHECK(max_abs_diff(differential(id, zp, TangentVector(z)).coords(), z) == 0.0);

  AutElement swap = identity(2);
  swap.perm = {1, 0};
  const auto w = apply(swap, zp);
  CHECK(w[0] == z[1]);
  CHECK(w[1] == z[0]);
}

TEST_CASE("group laws hold pointwise") {
  Rng rng(43);
  for (int i = 0; i < 100; ++i) {
    Rng s = rng.stream(i);
    const int m = 1 + s.below(3);
    const AutElement g = sample_aut(s, m, 0.9);
    const AutElement h = sample_aut(s, m, 0.9);
    const AutElement f = sample_aut(s, m, 0.9);
    const AutElement gh = compose(g, h);
    const AutElement ginv = invert(g);
    for (int q = 0; q < 5; ++q) {
      const PolydiscPoint z = sample_polydisc_point(s, m, 0.9);
      CHECK(max_abs_diff(apply(gh, z).coords(), apply(g, apply(h, z)).coords()) <= 1e-13);
      CHECK(max_abs_diff(apply(compose(g, ginv), z).coords(), z.coords()) <= 1e-13);
      CHECK(max_abs_diff(apply(compose(ginv, g), z).coords(), z.coords()) <= 1e-13);
      // associativity
      CHECK(max_abs_diff(apply(compose(compose(g, h), f), z).coords(),
                         apply(compose(g, compose(h, f)), z).coords()) <= 1e-13);
      // chain rule
      const TangentVector v = sample_tangent(s, m);
      CHECK(max_abs_diff(differential(gh, z, v).coords(),
                         differential(g, apply(h, z), differential(h, z, v)).coords()) <=
            1e-11);
    }
  }
  const AutElement id = identity(3);
  const AutElement idinv = invert(id);
  CHECK(idinv.center.isZero());
  CHECK(idinv.phases.isZero());
  CHECK(idinv.perm == id.perm);
}

TEST_CASE("normalized conjugation fixes the origin") {
  Rng rng(47);
  for (int i = 0; i < 100; ++i) {
    Rng s = rng.stream(i);
    const int m = 1 + s.below(3);
    const AutElement phi = sample_aut(s, m, 0.9);
    const PolydiscPoint z0 = sample_polydisc_point(s, m, 0.9);
    const PolydiscPoint b = apply(phi, z0);
    const AutElement conj =
        compose(moebius_transport(b), compose(phi, invert(moebius_transport(z0))));
    CHECK(apply(conj, PolydiscPoint::origin(m)).coords().cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("isotropy elements fix the origin and preserve phi") {
  Rng rng(53);
  for (int i = 0; i < 500; ++i) {
    Rng s = rng.stream(i);
    const int m = 1 + s.below(4);
    const AutElement g = sample_isotropy(s, m);
    CHECK(apply(g, PolydiscPoint::origin(m)).coords().isZero());

    const MetricParams p(s.uniform(0.0, 4.0), 2 + s.below(5));
    const TangentVector v = sample_tangent(s, m);
    const TangentVector gv = differential(g, PolydiscPoint::origin(m), v);
    CHECK(metrics::eval_phi2(p, gv) == doctest::Approx(metrics::eval_phi2(p, v)).epsilon(1e-13));

    const AutElement gg = compose(g, g);
    CHECK(gg.center.isZero());  // subgroup closure in normal form
  }
}

TEST_CASE("transport identity ties the metric to the origin norm") {
  Rng rng(59);
  for (int i = 0; i < 1000; ++i) {
    Rng s = rng.stream(i);
    const int m = 1 + s.below(4);
    const MetricParams p(s.uniform(0.0, 4.0), 2 + s.below(5));
    const PolydiscPoint z0 = sample_polydisc_point(s, m, 0.95);
    const TangentVector v = sample_tangent(s, m);
    const TangentVector hv = differential(moebius_transport(z0), z0, v);
    CHECK(metrics::eval_F2(p, z0, v).F2 ==
          doctest::Approx(metrics::eval_phi2(p, hv)).epsilon(1e-11));
  }
}

TEST_CASE("metric invariance under the full group") {
  Rng rng(61);
  for (int i = 0; i < 1000; ++i) {
    Rng s = rng.stream(i);
    const int m = 1 + s.below(4);
    const MetricParams p(s.uniform(0.0, 4.0), 2 + s.below(5));
    const AutElement g = sample_aut(s, m, 0.95);
    const PolydiscPoint z = sample_polydisc_point(s, m, 0.95);
    const TangentVector v = sample_tangent(s, m);
    const double before = metrics::eval_F2(p, z, v).F2;
    const double after = metrics::eval_F2(p, apply(g, z), differential(g, z, v)).F2;
    CHECK(after == doctest::Approx(before).epsilon(1e-9));
  }
}

TEST_CASE("json round trip preserves the action") {
  Rng rng(67);
  for (int i = 0; i < 50; ++i) {
    Rng s = rng.stream(i);
    const int m = 1 + s.below(4);
    const AutElement g = sample_aut(s, m, 0.9);
    const AutElement g2 = aut_from_json(to_json(g));
    for (int q = 0; q < 4; ++q) {
      const PolydiscPoint z = sample_polydisc_point(s, m, 0.9);
      CHECK(max_abs_diff(apply(g, z).coords(), apply(g2, z).coords()) == 0.0);
    }
  }
}

TEST_CASE("aut element validation") {
  CHECK_THROWS_AS(make_aut(CVector::Zero(2), Eigen::VectorXd::Zero(2), {0, 0}),
                  std::invalid_argument);
  CVector c(1);
  c << Complex(1.0, 0.0);
  CHECK_THROWS_AS(make_aut(c, Eigen::VectorXd::Zero(1), {0}), std::invalid_argument);
  CHECK_THROWS_AS(apply(identity(2), PolydiscPoint::origin(3)), std::invalid_argument);
}
