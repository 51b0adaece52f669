#include "finsler/core.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace finsler {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

}  // namespace

void Tolerance::validate() const {
  if (!(abs_eq > 0.0) || !(rel_eq > 0.0) || !(fd_rel > 0.0) || !(psd_min_eig > 0.0))
    throw std::invalid_argument("Tolerance: all thresholds must be strictly positive");
}

bool approx_eq(double a, double b, const Tolerance& tol) {
  tol.validate();
  return std::abs(a - b) <= tol.abs_eq + tol.rel_eq * std::max(std::abs(a), std::abs(b));
}

Rng::Rng(std::uint64_t seed) : state_(mix64(seed + kGolden)), base_(state_) {}

Rng::Rng(std::uint64_t state, std::uint64_t base) : state_(state), base_(base) {}

Rng Rng::stream(std::uint64_t index) const {
  const std::uint64_t s = mix64(base_ ^ mix64(index + kGolden));
  return Rng(s, s);
}

std::uint64_t Rng::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::angle() { return uniform(0.0, 2.0 * std::numbers::pi); }

double Rng::normal() {
  // Box-Muller, cosine branch only; draws stay aligned to the stream.
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::below(int n) {
  if (n <= 0) throw std::invalid_argument("Rng::below: n must be positive");
  return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                           static_cast<unsigned __int128>(n)) >>
                          64);
}

Complex Rng::unit_disc(double radius_cap) {
  const double r = radius_cap * std::sqrt(uniform());
  const double th = angle();
  return Complex(r * std::cos(th), r * std::sin(th));
}

MetricParams::MetricParams(double t_, int k_) : t(t_), k(k_) {
  if (!std::isfinite(t) || t < 0.0)
    throw std::invalid_argument("MetricParams: t must be finite and >= 0");
  if (k < 2) throw std::invalid_argument("MetricParams: k must be an integer >= 2");
}

PolydiscPoint::PolydiscPoint(CVector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 1) throw std::invalid_argument("PolydiscPoint: dimension must be >= 1");
  for (Eigen::Index l = 0; l < coords_.size(); ++l) {
    if (!finite(coords_[l]))
      throw std::invalid_argument("PolydiscPoint: coordinates must be finite");
    if (!(std::norm(coords_[l]) < 1.0))
      throw std::invalid_argument("PolydiscPoint: |z^l| < 1 required (strict interior)");
  }
}

PolydiscPoint PolydiscPoint::origin(int m) { return PolydiscPoint(CVector::Zero(m)); }

double PolydiscPoint::sup_norm() const {
  double s = 0.0;
  for (Eigen::Index l = 0; l < coords_.size(); ++l) s = std::max(s, std::abs(coords_[l]));
  return s;
}

TangentVector::TangentVector(CVector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 1) throw std::invalid_argument("TangentVector: dimension must be >= 1");
  for (Eigen::Index l = 0; l < coords_.size(); ++l)
    if (!finite(coords_[l]))
      throw std::invalid_argument("TangentVector: coordinates must be finite");
}

TangentVector TangentVector::zero(int m) { return TangentVector(CVector::Zero(m)); }

TangentVector TangentVector::axis(int m, int l) {
  if (l < 0 || l >= m) throw std::invalid_argument("TangentVector::axis: index out of range");
  CVector c = CVector::Zero(m);
  c[l] = Complex(1.0, 0.0);
  return TangentVector(std::move(c));
}

bool TangentVector::is_zero() const {
  for (Eigen::Index l = 0; l < coords_.size(); ++l)
    if (coords_[l] != Complex(0.0, 0.0)) return false;
  return true;
}

PolydiscPoint sample_polydisc_point(Rng& rng, int m, double radius_cap) {
  if (m < 1) throw std::invalid_argument("sample_polydisc_point: m must be >= 1");
  if (!(radius_cap > 0.0) || !(radius_cap < 1.0))
    throw std::invalid_argument("sample_polydisc_point: 0 < radius_cap < 1 required");
  CVector c(m);
  for (int l = 0; l < m; ++l) c[l] = rng.unit_disc(radius_cap);
  return PolydiscPoint(std::move(c));
}

TangentVector sample_tangent(Rng& rng, int m) {
  if (m < 1) throw std::invalid_argument("sample_tangent: m must be >= 1");
  CVector c(m);
  for (;;) {
    for (int l = 0; l < m; ++l) c[l] = Complex(rng.normal(), rng.normal());
    if (c.norm() > 1e-12) break;
  }
  return TangentVector(c);
}

void require_same_dim(const PolydiscPoint& z, const TangentVector& v) {
  if (z.dim() != v.dim())
    throw std::invalid_argument("dimension mismatch between base point and tangent vector");
}

}  // namespace finsler
