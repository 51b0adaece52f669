#include "finsler/fd.hpp"

namespace finsler::fd {

Eigen::MatrixXd real_hessian_fd(const std::function<double(const CVector&)>& g, const CVector& v,
                                double h) {
  const int m = static_cast<int>(v.size());
  const int dim = 2 * m;
  auto shifted = [&](int a, double s) {
    // u^a for a < m is Re v^a, for a >= m is Im v^{a-m}
    CVector w = v;
    if (a < m)
      w[a] += Complex(s, 0.0);
    else
      w[a - m] += Complex(0.0, s);
    return w;
  };
  Eigen::MatrixXd H(dim, dim);
  const double g0 = g(v);
  for (int a = 0; a < dim; ++a) {
    H(a, a) = (g(shifted(a, h)) - 2.0 * g0 + g(shifted(a, -h))) / (h * h);
    for (int b = a + 1; b < dim; ++b) {
      auto shifted2 = [&](double sa, double sb) {
        CVector w = shifted(a, sa);
        if (b < m)
          w[b] += Complex(sb, 0.0);
        else
          w[b - m] += Complex(0.0, sb);
        return w;
      };
      const double mixed = (g(shifted2(h, h)) - g(shifted2(h, -h)) - g(shifted2(-h, h)) +
                            g(shifted2(-h, -h))) /
                           (4.0 * h * h);
      H(a, b) = mixed;
      H(b, a) = mixed;
    }
  }
  return 0.5 * (H + H.transpose());
}

}  // namespace finsler::fd
