#pragma once

#include <optional>
#include <span>
#include <vector>

#include "finsler/core.hpp"
#include "finsler/metrics.hpp"

namespace finsler::geometry {

/// G = F^2 together with its fiber Levi matrix and the real fiber Hessian.
struct LeviReport {
  double G = 0.0;                    ///< F^2_{t,k}(z; v)
  CMatrix levi;                      ///< G_{i jbar} = d^2 G / dv^i d conj(v^j)
  CMatrix levi_inverse;              ///< G^{sbar i}
  double min_eigenvalue = 0.0;       ///< of the (Hermitian) Levi matrix
  Eigen::MatrixXd hessian_real;      ///< G_{ab} in the 2m real fiber coordinates
  double hessian_min_eigenvalue = 0.0;
};

struct ConnectionReport {
  CMatrix gamma_nl;    ///< Gamma^i_{;l}, nonlinear Chern-Finsler coefficients
  /// Gamma^i_{j;l} = d Gamma^i_{;l} / dv^j, flattened as gamma_h[i](j, l)
  std::vector<CMatrix> gamma_h;
  CMatrix berwald_nl;  ///< G^i_l, derivative of the spray coefficients
  std::vector<CMatrix> berwald;  ///< G^i_{jl}
  double kahler_residual = 0.0;     ///< max |Gamma^i_{j;l} - Gamma^i_{l;j}|
  double berwald_v_residual = 0.0;  ///< max variation of Gamma^i_{j;l} over v probes
  /// max deviation from the diagonal per-factor Hermitian connection
  double hermitian_match_residual = 0.0;
};

struct Tensor4 {
  int m = 0;
  std::vector<Complex> data;  ///< indexed (s, l, i, r)

  explicit Tensor4(int m_) : m(m_), data(static_cast<std::size_t>(m_) * m_ * m_ * m_) {}
  Complex& operator()(int s, int l, int i, int r) {
    return data[static_cast<std::size_t>(((s * m + l) * m + i)) * m + r];
  }
  Complex operator()(int s, int l, int i, int r) const {
    return data[static_cast<std::size_t>(((s * m + l) * m + i)) * m + r];
  }
};

struct CurvatureReport {
  Tensor4 R;                     ///< R^s_{l i rbar}; diagonal-supported
  CMatrix mean_curvature;        ///< K^s_l contracted against the Bergman metric
  std::optional<Complex> einstein_factor;
  double fd_diag_rel_err = 0.0;  ///< analytic diagonal vs -d/dzbar of Gamma-hat
  double offdiag_max_abs = 0.0;  ///< differenced full connection, off-diagonal blocks
  double hermitian_match_residual = 0.0;
};

/// Closed-form Levi matrix of G = F^2_{t,k} plus the finite-difference real
/// Hessian; v must avoid the zero section.
LeviReport levi_matrix(const MetricParams& p, const PolydiscPoint& z, const TangentVector& v,
                       const Tolerance& tol = {});

/// Real 2m-by-2m Hessian of G in the fiber coordinates, central differences
/// (step 1e-5) with symmetrization.
Eigen::MatrixXd real_hessian(const MetricParams& p, const PolydiscPoint& z,
                             const TangentVector& v);

/// First Wirtinger fiber derivative dG/dv (closed form); dG/d conj(v) is its
/// conjugate.
CVector dG_dv(const MetricParams& p, const PolydiscPoint& z, const CVector& v);

/// Closed-form Levi matrix G_{i jbar} alone, without the report machinery.
CMatrix levi_closed(const MetricParams& p, const PolydiscPoint& z, const CVector& v);

/// Mixed second derivatives d^2 G / d conj(v^s) d z^l (closed form, m x m).
CMatrix mixed_vbar_z(const MetricParams& p, const PolydiscPoint& z, const CVector& v);

/// Nonlinear coefficients Gamma^i_{;l} = G^{sbar i} d^2G/d conj(v^s) dz^l at (z; v).
CMatrix gamma_nl(const MetricParams& p, const PolydiscPoint& z, const CVector& v);

/// Connection-level report; probe_vectors (if empty, deterministic internal
/// probes) drive the Berwald v-independence residual.
ConnectionReport connection(const MetricParams& p, const PolydiscPoint& z, const TangentVector& v,
                            std::span<const TangentVector> probe_vectors = {});

/// Hermitian connection coefficient of the disc factor, 2 conj(z)/(1-|z|^2).
Complex hermitian_gamma(Complex zl);

/// Horizontal curvature blocks at z; diagonal entries -2/(1-|z^l|^2)^2 with
/// finite-difference cross-checks, off-diagonal blocks checked against zero.
CurvatureReport curvature(const MetricParams& p, const PolydiscPoint& z,
                          const Tolerance& tol = {});

/// Samples z and asserts the partial mean curvature equals -2 * identity
/// against the Bergman base metric; the factor is reported only when every
/// sample agrees and the full Finsler connection matches the diagonal
/// Hermitian one.
CurvatureReport einstein_check(const MetricParams& p, int m, int samples, Rng rng,
                               double radius_cap = 0.95, const Tolerance& tol = {});

/// Matrix-level relative disagreement between the closed-form derivatives and
/// single-level central-difference oracles on the primal data.
struct DerivativeAgreement {
  double dG_rel = 0.0;     ///< dG/dv vs differencing of G
  double levi_rel = 0.0;   ///< Levi matrix vs differencing of dG/d conj(v)
  double mixed_rel = 0.0;  ///< d^2G/d conj(v) dz vs z-differencing of dG/d conj(v)
};

DerivativeAgreement fd_cross_check(const MetricParams& p, const PolydiscPoint& z,
                                   const TangentVector& v);

}  // namespace finsler::geometry
