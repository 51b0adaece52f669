#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

namespace finsler {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Comparison and eigenvalue thresholds shared by every module.
/// All fields must be strictly positive.
struct Tolerance {
  double abs_eq = 1e-10;       ///< absolute floor for approx_eq
  double rel_eq = 1e-9;        ///< relative term for approx_eq
  double fd_rel = 1e-5;        ///< closed-form vs finite-difference agreement
  double psd_min_eig = 1e-12;  ///< positive-definiteness threshold

  void validate() const;
};

/// |a-b| <= abs_eq + rel_eq * max(|a|,|b|)
bool approx_eq(double a, double b, const Tolerance& tol = {});

/// Counter-based deterministic generator (splitmix64 core).
///
/// `Rng(seed).stream(i)` is a pure function of (seed, i): campaigns can hand
/// one stream to each trial and stay bit-reproducible under any scheduling.
/// Value semantics throughout; nothing is shared across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Child generator for trial `index`; independent of draws made on *this.
  Rng stream(std::uint64_t index) const;

  std::uint64_t next_u64();
  double uniform();                    ///< [0, 1)
  double uniform(double a, double b);  ///< [a, b)
  double angle();                      ///< [0, 2*pi)
  double normal();                     ///< standard Gaussian (Box-Muller)
  int below(int n);                    ///< uniform integer in [0, n)
  Complex unit_disc(double radius_cap);  ///< uniform on the disc |z| < cap

 private:
  Rng(std::uint64_t state, std::uint64_t base);
  std::uint64_t state_;
  std::uint64_t base_;  // stream root, kept so nested splits stay pure
};

/// Family parameters (t, k); t = 0 degenerates to the Bergman metric.
struct MetricParams {
  double t = 0.0;
  int k = 2;

  MetricParams() = default;
  MetricParams(double t_, int k_);
};

/// Point of the open unit polydisc: every coordinate strictly inside the disc.
class PolydiscPoint {
 public:
  explicit PolydiscPoint(CVector coords);
  static PolydiscPoint origin(int m);

  int dim() const { return static_cast<int>(coords_.size()); }
  const CVector& coords() const { return coords_; }
  Complex operator[](int l) const { return coords_[l]; }
  double sup_norm() const;

 private:
  CVector coords_;
};

/// Holomorphic tangent vector; zero is allowed, coordinates must be finite.
class TangentVector {
 public:
  explicit TangentVector(CVector coords);
  static TangentVector zero(int m);
  static TangentVector axis(int m, int l);

  int dim() const { return static_cast<int>(coords_.size()); }
  const CVector& coords() const { return coords_; }
  Complex operator[](int l) const { return coords_[l]; }
  bool is_zero() const;

 private:
  CVector coords_;
};

/// Each coordinate uniform on the disc of radius `radius_cap` (0 < cap < 1).
/// The cap keeps 1/(1-|z|^2)^2 well conditioned in sampled campaigns.
PolydiscPoint sample_polydisc_point(Rng& rng, int m, double radius_cap);

/// Gaussian complex coordinates; resampled if numerically zero.
TangentVector sample_tangent(Rng& rng, int m);

void require_same_dim(const PolydiscPoint& z, const TangentVector& v);

}  // namespace finsler
