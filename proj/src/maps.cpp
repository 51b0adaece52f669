#include "finsler/maps.hpp"

#include <cmath>

namespace finsler::maps {

namespace {

constexpr double kAdmissibleSlack = 1e-12;  // absorbs |e^{i theta}| rounding

Complex phase(double th) { return Complex(std::cos(th), std::sin(th)); }

Complex cpow(Complex z, int n) {
  Complex r(1.0, 0.0);
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

bool fixes_origin(const HolomorphicMap& f) {
  const CVector w = eval(f, PolydiscPoint::origin(f.source_dim())).coords();
  return w.lpNorm<Eigen::Infinity>() <= 1e-12;
}

// degree-1 homogeneity of the inner map of a power node
bool is_one_homogeneous(const HolomorphicMap& f) {
  return std::visit(
      [](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Linear> || std::is_same_v<T, Extremal>)
          return true;
        else if constexpr (std::is_same_v<T, CoordMoebius>) {
          for (const auto& c : node.coords)
            if (c.a != Complex(0.0, 0.0)) return false;
          return true;
        } else {
          return false;
        }
      },
      f.node);
}

}  // namespace

int HolomorphicMap::source_dim() const {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Linear>)
          return static_cast<int>(n.weights.cols());
        else if constexpr (std::is_same_v<T, CoordMoebius>)
          return n.source_dim;
        else if constexpr (std::is_same_v<T, Extremal>)
          return n.source_dim;
        else if constexpr (std::is_same_v<T, HomogeneousPower>)
          return n.inner->source_dim();
        else if constexpr (std::is_same_v<T, ConvexProduct>)
          return n.mapping.dim();
        else
          return n.stages.front().source_dim();
      },
      node);
}

int HolomorphicMap::target_dim() const {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Linear>)
          return static_cast<int>(n.weights.rows());
        else if constexpr (std::is_same_v<T, CoordMoebius>)
          return static_cast<int>(n.coords.size());
        else if constexpr (std::is_same_v<T, Extremal>)
          return n.target_dim;
        else if constexpr (std::is_same_v<T, HomogeneousPower>)
          return n.inner->target_dim();
        else if constexpr (std::is_same_v<T, ConvexProduct>)
          return n.mapping.dim();
        else
          return n.stages.back().target_dim();
      },
      node);
}

HolomorphicMap make_linear(CMatrix weights) {
  if (weights.rows() < 1 || weights.cols() < 1)
    throw std::invalid_argument("make_linear: empty matrix");
  if (!row_sum_admissible(weights, kAdmissibleSlack))
    throw std::invalid_argument("make_linear: row sums exceed 1, map would exit the polydisc");
  return HolomorphicMap{Linear{std::move(weights)}};
}

HolomorphicMap make_coord_moebius(int source_dim, std::vector<CoordMoebius::Coord> coords) {
  if (source_dim < 1 || coords.empty())
    throw std::invalid_argument("make_coord_moebius: bad dimensions");
  for (const auto& c : coords) {
    if (c.source < 0 || c.source >= source_dim)
      throw std::invalid_argument("make_coord_moebius: source index out of range");
    if (!(std::norm(c.a) < 1.0))
      throw std::invalid_argument("make_coord_moebius: |a| < 1 required");
  }
  return HolomorphicMap{CoordMoebius{source_dim, std::move(coords)}};
}

HolomorphicMap make_extremal(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("make_extremal: bad dimensions");
  return HolomorphicMap{Extremal{m, n}};
}

HolomorphicMap make_homogeneous(HolomorphicMap inner, int degree) {
  if (degree < 1) throw std::invalid_argument("make_homogeneous: degree >= 1 required");
  if (!is_one_homogeneous(inner))
    throw std::invalid_argument(
        "make_homogeneous: inner map must be 1-homogeneous (linear / extremal / "
        "zero-center coord factors)");
  return HolomorphicMap{
      HomogeneousPower{std::make_shared<const HolomorphicMap>(std::move(inner)), degree}};
}

HolomorphicMap make_convex_product(distortion::ConvexMapping mapping) {
  if (mapping.dim() < 1) throw std::invalid_argument("make_convex_product: no factors");
  return HolomorphicMap{ConvexProduct{std::move(mapping)}};
}

HolomorphicMap make_composed(std::vector<HolomorphicMap> stages) {
  if (stages.empty()) throw std::invalid_argument("make_composed: empty stage list");
  for (std::size_t i = 1; i < stages.size(); ++i)
    if (stages[i].source_dim() != stages[i - 1].target_dim())
      throw std::invalid_argument("make_composed: stage dimensions do not chain");
  return HolomorphicMap{Composed{std::move(stages)}};
}

HolomorphicMap from_automorphism(const aut::AutElement& g) {
  std::vector<CoordMoebius::Coord> coords(g.dim());
  for (int l = 0; l < g.dim(); ++l) coords[l] = {g.perm[l], g.center[l], g.phases[l]};
  return make_coord_moebius(g.dim(), std::move(coords));
}

PolydiscPoint eval(const HolomorphicMap& f, const PolydiscPoint& z) {
  if (z.dim() != f.source_dim()) throw std::invalid_argument("eval: dimension mismatch");
  return std::visit(
      [&](const auto& n) -> PolydiscPoint {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Linear>) {
          return PolydiscPoint(n.weights * z.coords());
        } else if constexpr (std::is_same_v<T, CoordMoebius>) {
          CVector w(n.coords.size());
          for (std::size_t l = 0; l < n.coords.size(); ++l) {
            const auto& c = n.coords[l];
            const Complex zl = z[c.source];
            w[l] = phase(c.phase) * (zl - c.a) / (1.0 - std::conj(c.a) * zl);
          }
          return PolydiscPoint(std::move(w));
        } else if constexpr (std::is_same_v<T, Extremal>) {
          return PolydiscPoint(CVector::Constant(n.target_dim, z[0]));
        } else if constexpr (std::is_same_v<T, HomogeneousPower>) {
          CVector w = eval(*n.inner, z).coords();
          for (Eigen::Index l = 0; l < w.size(); ++l) w[l] = cpow(w[l], n.degree);
          return PolydiscPoint(std::move(w));
        } else if constexpr (std::is_same_v<T, ConvexProduct>) {
          CVector w = distortion::eval_convex(n.mapping, z);
          for (Eigen::Index l = 0; l < w.size(); ++l)
            if (!(std::norm(w[l]) < 1.0))
              throw std::domain_error("eval: convex-product image left the target polydisc");
          return PolydiscPoint(std::move(w));
        } else {
          PolydiscPoint w = z;
          for (const auto& stage : n.stages) w = eval(stage, w);
          return w;
        }
      },
      f.node);
}

CMatrix jacobian(const HolomorphicMap& f, const PolydiscPoint& z) {
  if (z.dim() != f.source_dim()) throw std::invalid_argument("jacobian: dimension mismatch");
  return std::visit(
      [&](const auto& n) -> CMatrix {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Linear>) {
          return n.weights;
        } else if constexpr (std::is_same_v<T, CoordMoebius>) {
          CMatrix J = CMatrix::Zero(n.coords.size(), n.source_dim);
          for (std::size_t l = 0; l < n.coords.size(); ++l) {
            const auto& c = n.coords[l];
            const Complex den = 1.0 - std::conj(c.a) * z[c.source];
            J(l, c.source) = phase(c.phase) * (1.0 - std::norm(c.a)) / (den * den);
          }
          return J;
        } else if constexpr (std::is_same_v<T, Extremal>) {
          CMatrix J = CMatrix::Zero(n.target_dim, n.source_dim);
          J.col(0).setOnes();
          return J;
        } else if constexpr (std::is_same_v<T, HomogeneousPower>) {
          const CVector w = eval(*n.inner, z).coords();
          CMatrix J = jacobian(*n.inner, z);
          for (Eigen::Index l = 0; l < J.rows(); ++l)
            J.row(l) *= static_cast<double>(n.degree) * cpow(w[l], n.degree - 1);
          return J;
        } else if constexpr (std::is_same_v<T, ConvexProduct>) {
          return CMatrix(distortion::derivative_diag(n.mapping, z).asDiagonal());
        } else {
          CMatrix J = jacobian(n.stages.front(), z);
          PolydiscPoint w = eval(n.stages.front(), z);
          for (std::size_t i = 1; i < n.stages.size(); ++i) {
            J = jacobian(n.stages[i], w) * J;
            if (i + 1 < n.stages.size()) w = eval(n.stages[i], w);
          }
          return J;
        }
      },
      f.node);
}

TangentVector pushforward(const HolomorphicMap& f, const PolydiscPoint& z,
                          const TangentVector& v) {
  require_same_dim(z, v);
  return TangentVector(jacobian(f, z) * v.coords());
}

double pullback_F2(const MetricParams& p_target, const HolomorphicMap& f, const PolydiscPoint& z,
                   const TangentVector& v) {
  return metrics::eval_F2(p_target, eval(f, z), pushforward(f, z, v)).F2;
}

bool row_sum_admissible(const CMatrix& weights, double slack) {
  for (Eigen::Index l = 0; l < weights.rows(); ++l) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < weights.cols(); ++i) s += std::abs(weights(l, i));
    if (s > 1.0 + slack) return false;
  }
  return true;
}

HolomorphicMap linear_part(const HolomorphicMap& f) {
  if (!fixes_origin(f)) throw std::invalid_argument("linear_part: f(0) = 0 required");
  return make_linear(jacobian(f, PolydiscPoint::origin(f.source_dim())));
}

HolomorphicMap sample_map(Rng& rng, MapFamily family, int m, int n, double moebius_cap) {
  switch (family) {
    case MapFamily::linear: {
      CMatrix W(n, m);
      for (int l = 0; l < n; ++l) {
        Eigen::VectorXd e(m);
        for (int i = 0; i < m; ++i) e[i] = -std::log1p(-rng.uniform());
        e *= rng.uniform() / e.sum();
        for (int i = 0; i < m; ++i) W(l, i) = e[i] * phase(rng.angle());
      }
      return make_linear(std::move(W));
    }
    case MapFamily::coord_moebius: {
      std::vector<CoordMoebius::Coord> coords(n);
      for (int l = 0; l < n; ++l)
        coords[l] = {rng.below(m), rng.unit_disc(moebius_cap), rng.angle()};
      return make_coord_moebius(m, std::move(coords));
    }
    case MapFamily::extremal:
      return make_extremal(m, n);
    default:
      throw std::invalid_argument("sample_map: unsupported family");
  }
}

nlohmann::json to_json(const HolomorphicMap& f) {
  return std::visit(
      [&](const auto& n) -> nlohmann::json {
        using T = std::decay_t<decltype(n)>;
        nlohmann::json j;
        if constexpr (std::is_same_v<T, Linear>) {
          j["type"] = "linear";
          nlohmann::json rows = nlohmann::json::array();
          for (Eigen::Index l = 0; l < n.weights.rows(); ++l) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index i = 0; i < n.weights.cols(); ++i)
              row.push_back({n.weights(l, i).real(), n.weights(l, i).imag()});
            rows.push_back(row);
          }
          j["matrix"] = rows;
        } else if constexpr (std::is_same_v<T, CoordMoebius>) {
          j["type"] = "coord_moebius";
          j["m"] = n.source_dim;
          nlohmann::json cs = nlohmann::json::array();
          for (const auto& c : n.coords)
            cs.push_back({{"source", c.source},
                          {"a", {c.a.real(), c.a.imag()}},
                          {"phase", c.phase}});
          j["coords"] = cs;
        } else if constexpr (std::is_same_v<T, Extremal>) {
          j["type"] = "extremal";
          j["m"] = n.source_dim;
          j["n"] = n.target_dim;
        } else if constexpr (std::is_same_v<T, HomogeneousPower>) {
          j["type"] = "homogeneous";
          j["degree"] = n.degree;
          j["inner"] = to_json(*n.inner);
        } else if constexpr (std::is_same_v<T, ConvexProduct>) {
          j = distortion::to_json(n.mapping);
          j["type"] = "convex_product";
        } else {
          j["type"] = "composed";
          nlohmann::json stages = nlohmann::json::array();
          for (const auto& s : n.stages) stages.push_back(to_json(s));
          j["maps"] = stages;
        }
        return j;
      },
      f.node);
}

HolomorphicMap map_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "linear") {
    const auto& rows = j.at("matrix");
    const int n = static_cast<int>(rows.size());
    const int m = static_cast<int>(rows[0].size());
    CMatrix W(n, m);
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < m; ++i)
        W(l, i) = Complex(rows[l][i][0].get<double>(), rows[l][i][1].get<double>());
    return make_linear(std::move(W));
  }
  if (type == "coord_moebius") {
    std::vector<CoordMoebius::Coord> coords;
    for (const auto& c : j.at("coords"))
      coords.push_back({c.at("source").get<int>(),
                        Complex(c.at("a")[0].get<double>(), c.at("a")[1].get<double>()),
                        c.at("phase").get<double>()});
    return make_coord_moebius(j.at("m").get<int>(), std::move(coords));
  }
  if (type == "extremal") return make_extremal(j.at("m").get<int>(), j.at("n").get<int>());
  if (type == "homogeneous")
    return make_homogeneous(map_from_json(j.at("inner")), j.at("degree").get<int>());
  if (type == "convex_product") return make_convex_product(distortion::convex_from_json(j));
  if (type == "composed") {
    std::vector<HolomorphicMap> stages;
    for (const auto& s : j.at("maps")) stages.push_back(map_from_json(s));
    return make_composed(std::move(stages));
  }
  throw std::invalid_argument("map_from_json: unknown map type '" + type + "'");
}

}  // namespace finsler::maps
