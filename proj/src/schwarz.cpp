#include "finsler/schwarz.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace finsler::schwarz {

namespace {

int homogeneity_degree(const maps::HolomorphicMap& f) {
  if (const auto* hp = std::get_if<maps::HomogeneousPower>(&f.node)) return hp->degree;
  return 1;
}

void update_worst(SchwarzReport& rep, long trial, const maps::HolomorphicMap& f, const CVector& z,
                  const CVector& v, double ratio) {
  if (!rep.worst || ratio > rep.worst->ratio)
    rep.worst = WorstCase{trial, maps::to_json(f), z, v, ratio};
}

}  // namespace

double sharp_constant(int n, const MetricParams& p_target) {
  if (n < 1) throw std::invalid_argument("sharp_constant: n >= 1 required");
  return (n + p_target.t * std::pow(static_cast<double>(n), 1.0 / p_target.k)) /
         (1.0 + p_target.t);
}

double schwarz_ratio(const MetricParams& p_src, const MetricParams& p_tgt,
                     const maps::HolomorphicMap& f, const PolydiscPoint& z,
                     const TangentVector& v) {
  if (v.is_zero()) throw std::invalid_argument("schwarz_ratio: v must be nonzero");
  const double f2 = metrics::eval_F2(p_src, z, v).F2;
  const TangentVector vhat(v.coords() / std::sqrt(f2));
  return maps::pullback_F2(p_tgt, f, z, vhat);
}

SchwarzReport verify_schwarz(const MetricParams& p_src, const MetricParams& p_tgt,
                             std::span<const maps::MapFamily> families, int m, int n, long trials,
                             Rng rng, const SchwarzOptions& opt) {
  if (trials < 1) throw std::invalid_argument("verify_schwarz: trials >= 1 required");
  if (families.empty()) throw std::invalid_argument("verify_schwarz: families must be nonempty");
  SchwarzReport rep;
  rep.trials = trials;
  rep.sharp_constant = sharp_constant(n, p_tgt);
  const bool has_extremal =
      std::find(families.begin(), families.end(), maps::MapFamily::extremal) != families.end();

  // Per-trial streams make the trials order-independent; the reduction keeps
  // the lowest trial index on ties, so threaded and sequential runs agree
  // bit for bit.
  struct Best {
    double ratio = -1.0;
    long trial = -1;
    std::optional<maps::HolomorphicMap> f;
    CVector z, v;
  };
  auto run_range = [&](long lo, long hi) {
    Best best;
    for (long i = lo; i < hi; ++i) {
      Rng s = rng.stream(static_cast<std::uint64_t>(i));
      maps::HolomorphicMap f = maps::make_extremal(m, n);
      PolydiscPoint z = PolydiscPoint::origin(m);
      TangentVector v = TangentVector::axis(m, 0);
      if (!(i == 0 && has_extremal && opt.force_extremal_witness)) {
        f = maps::sample_map(s, families[static_cast<std::size_t>(i) % families.size()], m, n);
        z = sample_polydisc_point(s, m, opt.radius_cap);
        v = sample_tangent(s, m);
      }
      const double ratio = schwarz_ratio(p_src, p_tgt, f, z, v);
      if (ratio > best.ratio) best = Best{ratio, i, std::move(f), z.coords(), v.coords()};
    }
    return best;
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const long chunk = 16384;
  Best best;
  if (trials < 2 * chunk || hw == 1) {
    best = run_range(0, trials);
  } else {
    const unsigned nthreads = static_cast<unsigned>(
        std::min<long>(hw, (trials + chunk - 1) / chunk));
    std::vector<Best> partial(nthreads);
    std::vector<std::thread> pool;
    const long stride = (trials + nthreads - 1) / nthreads;
    for (unsigned q = 0; q < nthreads; ++q)
      pool.emplace_back([&, q] {
        partial[q] = run_range(q * stride, std::min<long>(trials, (q + 1) * stride));
      });
    for (auto& th : pool) th.join();
    for (auto& b : partial)
      if (b.ratio > best.ratio || (b.ratio == best.ratio && b.trial < best.trial))
        best = std::move(b);
  }
  rep.max_ratio = std::max(0.0, best.ratio);
  if (best.f) update_worst(rep, best.trial, *best.f, best.z, best.v, best.ratio);
  rep.violated = rep.max_ratio > rep.sharp_constant * (1.0 + opt.tol.rel_eq);
  return rep;
}

double norm_schwarz_ratio(const MetricParams& p_src, const MetricParams& p_tgt,
                          const maps::HolomorphicMap& f, const PolydiscPoint& z) {
  const int N = homogeneity_degree(f);
  const double phi2 = metrics::eval_phi2(p_src, TangentVector(z.coords()));
  if (phi2 == 0.0) return 0.0;
  const double lhs =
      metrics::eval_phi2(p_tgt, TangentVector(eval(f, z).coords()));
  return lhs / std::pow(phi2, N);
}

SchwarzReport verify_norm_schwarz(const MetricParams& p_src, const MetricParams& p_tgt,
                                  const maps::HolomorphicMap& f, long trials, Rng rng,
                                  const SchwarzOptions& opt) {
  if (trials < 1) throw std::invalid_argument("verify_norm_schwarz: trials >= 1 required");
  const int m = f.source_dim();
  const CVector f0 = eval(f, PolydiscPoint::origin(m)).coords();
  if (f0.lpNorm<Eigen::Infinity>() > 1e-12)
    throw std::invalid_argument("verify_norm_schwarz: f(0) = 0 required");
  SchwarzReport rep;
  rep.trials = trials;
  rep.sharp_constant = sharp_constant(f.target_dim(), p_tgt);
  for (long i = 0; i < trials; ++i) {
    Rng s = rng.stream(static_cast<std::uint64_t>(i));
    const PolydiscPoint z = sample_polydisc_point(s, m, opt.radius_cap);
    const double ratio = norm_schwarz_ratio(p_src, p_tgt, f, z);
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      update_worst(rep, i, f, z.coords(), CVector::Zero(m), ratio);
    }
  }
  rep.violated = rep.max_ratio > rep.sharp_constant * (1.0 + opt.tol.rel_eq);
  return rep;
}

bool check_equality_axis(const MetricParams& p_src, const MetricParams& p_tgt,
                         const maps::HolomorphicMap& f, int axis, int degree,
                         const Tolerance& tol) {
  const int m = f.source_dim();
  const int n = f.target_dim();
  if (axis < 0 || axis >= m) throw std::invalid_argument("check_equality_axis: bad axis");
  if (degree < 1) throw std::invalid_argument("check_equality_axis: degree >= 1 required");
  const CVector f0 = eval(f, PolydiscPoint::origin(m)).coords();
  if (f0.lpNorm<Eigen::Infinity>() > 1e-12)
    throw std::invalid_argument("check_equality_axis: f(0) = 0 required");

  // axis samples: fit one coefficient per target component, then require it
  // to be unimodular and to explain every sample
  constexpr int kSamples = 12;
  const double golden = 2.399963229728653;
  std::vector<Complex> zeta(kSamples);
  std::vector<CVector> w(kSamples);
  for (int s = 0; s < kSamples; ++s) {
    const double r = 0.15 + 0.05 * s;
    zeta[s] = Complex(r * std::cos(golden * s), r * std::sin(golden * s));
    CVector zc = CVector::Zero(m);
    zc[axis] = zeta[s];
    w[s] = eval(f, PolydiscPoint(zc)).coords();
  }
  auto zpow = [&](Complex zc) {
    Complex r(1.0, 0.0);
    for (int i = 0; i < degree; ++i) r *= zc;
    return r;
  };
  for (int j = 0; j < n; ++j) {
    const Complex coeff = w[0][j] / zpow(zeta[0]);
    if (std::abs(std::abs(coeff) - 1.0) > 1e-8) return false;
    for (int s = 1; s < kSamples; ++s)
      if (std::abs(w[s][j] - coeff * zpow(zeta[s])) > 1e-8) return false;
  }
  // metric-level consistency: the characterized equality must hold on the axis
  const double C = sharp_constant(n, p_tgt);
  CVector zc = CVector::Zero(m);
  zc[axis] = Complex(0.5, 0.0);
  const double phi2 = metrics::eval_phi2(p_src, TangentVector(zc));
  const double lhs = metrics::eval_phi2(p_tgt, TangentVector(eval(f, PolydiscPoint(zc)).coords()));
  return approx_eq(lhs, C * std::pow(phi2, degree), tol);
}

CartanDiagnostic cartan_rigidity_diagnostic(const MetricParams& p, const maps::HolomorphicMap& f,
                                            const PolydiscPoint& z0, int probe_vectors, Rng rng,
                                            const Tolerance& tol) {
  const int m = f.source_dim();
  if (f.target_dim() != m)
    throw std::invalid_argument("cartan_rigidity_diagnostic: f must map P_m into itself");
  const PolydiscPoint w0 = eval(f, z0);

  // differential at the fixed point of h_{f(z0)} o f o h_{z0}^{-1}
  CMatrix D = jacobian(f, z0);
  for (int l = 0; l < m; ++l) {
    D.row(l) *= 1.0 / (1.0 - std::norm(w0[l]));
    D.col(l) *= 1.0 - std::norm(z0[l]);
  }

  CartanDiagnostic diag;
  diag.probes = probe_vectors;
  Eigen::ComplexEigenSolver<CMatrix> es(D, /*computeEigenvectors=*/false);
  diag.eigenvalue_moduli = es.eigenvalues().cwiseAbs();
  diag.det_modulus = std::abs(D.determinant());
  diag.det_at_least_one = diag.det_modulus >= 1.0 - tol.rel_eq;
  diag.hypothesis_held = true;
  for (int i = 0; i < probe_vectors; ++i) {
    Rng s = rng.stream(static_cast<std::uint64_t>(i));
    const TangentVector v = sample_tangent(s, m);
    const double lhs = maps::pullback_F2(p, f, z0, v);
    const double rhs = metrics::eval_F2(p, z0, v).F2;
    if (lhs < rhs * (1.0 - tol.rel_eq)) diag.hypothesis_held = false;
  }
  return diag;
}

nlohmann::json to_json(const SchwarzReport& rep) {
  nlohmann::json j{{"trials", rep.trials},
                   {"max_ratio", rep.max_ratio},
                   {"sharp_constant", rep.sharp_constant},
                   {"violated", rep.violated}};
  if (rep.worst) {
    nlohmann::json w{{"trial", rep.worst->trial},
                     {"map_spec", rep.worst->map_spec},
                     {"ratio", rep.worst->ratio}};
    for (Eigen::Index l = 0; l < rep.worst->z.size(); ++l)
      w["z"].push_back({rep.worst->z[l].real(), rep.worst->z[l].imag()});
    for (Eigen::Index l = 0; l < rep.worst->v.size(); ++l)
      w["v"].push_back({rep.worst->v[l].real(), rep.worst->v[l].imag()});
    j["worst_case"] = w;
  }
  return j;
}

}  // namespace finsler::schwarz
