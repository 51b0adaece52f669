#pragma once

#include <complex>
#include <functional>

#include "finsler/core.hpp"

namespace finsler::fd {

/// Central-difference Wirtinger derivatives in coordinate j of a complex
/// vector argument. Scalar variants take F: CVector -> Complex-convertible;
/// the matrix variant takes F: CVector -> CMatrix.

template <typename F>
Complex wirtinger_dv_scalar(F&& f, const CVector& v, int j, double h) {
  CVector vp = v, vm = v, vip = v, vim = v;
  vp[j] += h;
  vm[j] -= h;
  vip[j] += Complex(0.0, h);
  vim[j] -= Complex(0.0, h);
  const Complex re = (Complex(f(vp)) - Complex(f(vm))) / (2.0 * h);
  const Complex im = (Complex(f(vip)) - Complex(f(vim))) / (2.0 * h);
  return 0.5 * (re - Complex(0.0, 1.0) * im);
}

template <typename F>
Complex wirtinger_dvbar_scalar(F&& f, const CVector& v, int j, double h) {
  CVector vp = v, vm = v, vip = v, vim = v;
  vp[j] += h;
  vm[j] -= h;
  vip[j] += Complex(0.0, h);
  vim[j] -= Complex(0.0, h);
  const Complex re = (Complex(f(vp)) - Complex(f(vm))) / (2.0 * h);
  const Complex im = (Complex(f(vip)) - Complex(f(vim))) / (2.0 * h);
  return 0.5 * (re + Complex(0.0, 1.0) * im);
}

template <typename F>
CMatrix wirtinger_dv_matrix(F&& f, const CVector& v, int j, double h) {
  CVector vp = v, vm = v, vip = v, vim = v;
  vp[j] += h;
  vm[j] -= h;
  vip[j] += Complex(0.0, h);
  vim[j] -= Complex(0.0, h);
  const CMatrix fp = f(vp);
  const CMatrix fm = f(vm);
  const CMatrix fip = f(vip);
  const CMatrix fim = f(vim);
  const CMatrix re = (fp - fm) / (2.0 * h);
  const CMatrix im = (fip - fim) / (2.0 * h);
  return 0.5 * (re - Complex(0.0, 1.0) * im);
}

/// d/d conj(z) of a scalar function of one complex variable.
template <typename F>
Complex wirtinger_dzbar_1d(F&& f, Complex z, double h) {
  const Complex re = (Complex(f(z + h)) - Complex(f(z - h))) / (2.0 * h);
  const Complex im =
      (Complex(f(z + Complex(0.0, h))) - Complex(f(z - Complex(0.0, h)))) / (2.0 * h);
  return 0.5 * (re + Complex(0.0, 1.0) * im);
}

/// d/dz of a scalar function of one complex variable.
template <typename F>
Complex wirtinger_dz_1d(F&& f, Complex z, double h) {
  const Complex re = (Complex(f(z + h)) - Complex(f(z - h))) / (2.0 * h);
  const Complex im =
      (Complex(f(z + Complex(0.0, h))) - Complex(f(z - Complex(0.0, h)))) / (2.0 * h);
  return 0.5 * (re - Complex(0.0, 1.0) * im);
}

/// Mixed second Wirtinger derivative d^2 G / dv^i d conj(v^j) of a real
/// function, assembled from four real second-order central differences.
template <typename F>
Complex mixed_vvbar_4point(F&& g, const CVector& v, int i, int j, double h) {
  auto second = [&](int wi, int wj) {
    // wi/wj: 0 differentiates the real part, 1 the imaginary part
    if (i == j && wi == wj) {
      CVector wp = v, wm = v;
      const Complex step = wi == 0 ? Complex(h, 0.0) : Complex(0.0, h);
      wp[i] += step;
      wm[i] -= step;
      return (g(wp) - 2.0 * g(v) + g(wm)) / (h * h);
    }
    auto shifted = [&](double si, double sj) {
      CVector w = v;
      w[i] += wi == 0 ? Complex(si, 0.0) : Complex(0.0, si);
      w[j] += wj == 0 ? Complex(sj, 0.0) : Complex(0.0, sj);
      return w;
    };
    return (g(shifted(h, h)) - g(shifted(h, -h)) - g(shifted(-h, h)) + g(shifted(-h, -h))) /
           (4.0 * h * h);
  };
  const double pp = second(0, 0);
  const double qq = second(1, 1);
  const double pq = second(0, 1);
  const double qp = second(1, 0);
  return 0.25 * Complex(pp + qq, pq - qp);
}

/// Real Hessian in the 2m fiber coordinates (u^l, u^{m+l}) = (Re v^l, Im v^l),
/// symmetrized central differences.
Eigen::MatrixXd real_hessian_fd(const std::function<double(const CVector&)>& g, const CVector& v,
                                double h);

}  // namespace finsler::fd
