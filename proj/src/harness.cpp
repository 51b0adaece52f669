#include "finsler/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "finsler/distortion.hpp"
#include "finsler/geometry.hpp"
#include "finsler/maps.hpp"
#include "finsler/schwarz.hpp"

namespace finsler::harness {

namespace {

constexpr std::uint64_t kIndicatrixSeed = 0x1D1CA7B0ull;

nlohmann::json cvec_json(const CVector& z) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index l = 0; l < z.size(); ++l) j.push_back({z[l].real(), z[l].imag()});
  return j;
}

CVector parse_cvec(const nlohmann::json& j) {
  CVector z(j.size());
  for (std::size_t l = 0; l < j.size(); ++l)
    z[static_cast<Eigen::Index>(l)] = Complex(j[l][0].get<double>(), j[l][1].get<double>());
  return z;
}

maps::MapFamily family_from_string(const std::string& s) {
  if (s == "linear") return maps::MapFamily::linear;
  if (s == "coord_moebius") return maps::MapFamily::coord_moebius;
  if (s == "extremal") return maps::MapFamily::extremal;
  throw std::invalid_argument("unknown sampling family '" + s + "'");
}

nlohmann::json grid_cell(double t, int k, double tt, int kk, int m, int n) {
  return {{"t", t}, {"k", k}, {"tt", tt}, {"kk", kk}, {"m", m}, {"n", n}};
}

void validate_config(const CampaignConfig& c) {
  if (c.t.empty() || c.k.empty() || c.tt.empty() || c.kk.empty() || c.m.empty() || c.n.empty())
    throw std::invalid_argument("grid lists must be nonempty");
  if (c.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(c.radius_cap > 0.0 && c.radius_cap < 1.0))
    throw std::invalid_argument("radius_cap must lie in (0, 1)");
  c.tol.validate();
}

bool run_verify_schwarz(const CampaignConfig& c, nlohmann::json& cells) {
  std::vector<maps::MapFamily> fams;
  for (const auto& f : c.families) fams.push_back(family_from_string(f));
  schwarz::SchwarzOptions opt{c.radius_cap, c.tol, true};
  bool violated = false;
  std::uint64_t cell = 0;
  Rng root(c.seed);
  for (double t : c.t)
    for (int k : c.k)
      for (double tt : c.tt)
        for (int kk : c.kk)
          for (int m : c.m)
            for (int n : c.n) {
              const auto rep =
                  schwarz::verify_schwarz(MetricParams(t, k), MetricParams(tt, kk), fams, m, n,
                                          c.trials, root.stream(cell++), opt);
              nlohmann::json cj = schwarz::to_json(rep);
              cj["grid_cell"] = grid_cell(t, k, tt, kk, m, n);
              cells.push_back(cj);
              violated = violated || rep.violated;
            }
  return violated;
}

bool run_verify_norm_schwarz(const CampaignConfig& c, nlohmann::json& cells) {
  schwarz::SchwarzOptions opt{c.radius_cap, c.tol, true};
  bool violated = false;
  std::uint64_t cell = 0;
  Rng root(c.seed);
  for (double t : c.t)
    for (int k : c.k)
      for (double tt : c.tt)
        for (int kk : c.kk)
          for (int m : c.m)
            for (int n : c.n) {
              Rng cr = root.stream(cell++);
              std::vector<maps::HolomorphicMap> suite;
              if (c.map_spec) {
                suite.push_back(maps::map_from_json(*c.map_spec));
              } else {
                suite.push_back(maps::make_extremal(m, n));
                Rng s0 = cr.stream(1u << 20);
                suite.push_back(maps::sample_map(s0, maps::MapFamily::linear, m, n));
                for (int deg : {2, 3})
                  suite.push_back(maps::make_homogeneous(maps::make_extremal(m, n), deg));
              }
              const long per = std::max<long>(1, c.trials / static_cast<long>(suite.size()));
              nlohmann::json mreps = nlohmann::json::array();
              double cell_max = 0.0;
              double cnst = 0.0;
              for (std::size_t q = 0; q < suite.size(); ++q) {
                const auto rep = schwarz::verify_norm_schwarz(
                    MetricParams(t, k), MetricParams(tt, kk), suite[q], per, cr.stream(q), opt);
                mreps.push_back(schwarz::to_json(rep));
                violated = violated || rep.violated;
                cell_max = std::max(cell_max, rep.max_ratio);
                cnst = rep.sharp_constant;
              }
              cells.push_back({{"grid_cell", grid_cell(t, k, tt, kk, m, n)},
                               {"trials", per * static_cast<long>(suite.size())},
                               {"max_ratio", cell_max},
                               {"sharp_constant", cnst},
                               {"maps", mreps}});
            }
  return violated;
}

bool run_verify_distortion(const CampaignConfig& c, nlohmann::json& cells) {
  distortion::DistortionOptions opt{c.radius_cap, c.tol};
  bool violated = false;
  std::uint64_t cell = 0;
  Rng root(c.seed);
  for (double t : c.t)
    for (int k : c.k)
      for (int m : c.m) {
        Rng cr = root.stream(cell++);
        const MetricParams p(t, k);
        std::vector<distortion::ConvexMapping> suite;
        if (c.map_spec) {
          suite.push_back(distortion::convex_from_json(*c.map_spec));
        } else {
          Rng fs = cr.stream(1u << 20);
          for (int q = 0; q < 16; ++q) suite.push_back(distortion::sample_convex_mapping(fs, m));
        }
        const long per = std::max<long>(1, c.trials / static_cast<long>(suite.size()));
        double max_up = 0.0, min_lo = std::numeric_limits<double>::infinity();
        double rad_up = 0.0, rad_lo = std::numeric_limits<double>::infinity();
        for (std::size_t q = 0; q < suite.size(); ++q) {
          const auto rep = distortion::verify_distortion(p, suite[q], per, cr.stream(2 * q), opt);
          const auto rrep =
              distortion::verify_distortion_radial(p, suite[q], per, cr.stream(2 * q + 1), opt);
          violated = violated || rep.violated || rrep.violated;
          max_up = std::max(max_up, rep.max_upper_ratio);
          min_lo = std::min(min_lo, rep.min_lower_ratio);
          rad_up = std::max(rad_up, rrep.max_upper_ratio);
          rad_lo = std::min(rad_lo, rrep.min_lower_ratio);
        }
        cells.push_back({{"grid_cell", grid_cell(t, k, 0.0, 2, m, m)},
                         {"trials", per * static_cast<long>(suite.size())},
                         {"max_upper_ratio", max_up},
                         {"min_lower_ratio", min_lo},
                         {"radial_max_upper_ratio", rad_up},
                         {"radial_min_lower_ratio", rad_lo}});
      }
  return violated;
}

bool run_check_levi(const CampaignConfig& c, nlohmann::json& cells) {
  bool violated = false;
  std::uint64_t cell = 0;
  Rng root(c.seed);
  for (double t : c.t)
    for (int k : c.k)
      for (int m : c.m) {
        Rng cr = root.stream(cell++);
        const MetricParams p(t, k);
        double min_levi = std::numeric_limits<double>::infinity();
        double min_hess = min_levi;
        geometry::DerivativeAgreement worst;
        for (long i = 0; i < c.trials; ++i) {
          Rng s = cr.stream(static_cast<std::uint64_t>(i));
          const PolydiscPoint z = sample_polydisc_point(s, m, c.radius_cap);
          const TangentVector v = sample_tangent(s, m);
          const auto rep = geometry::levi_matrix(p, z, v, c.tol);
          min_levi = std::min(min_levi, rep.min_eigenvalue);
          min_hess = std::min(min_hess, rep.hessian_min_eigenvalue);
          const auto agree = geometry::fd_cross_check(p, z, v);
          worst.dG_rel = std::max(worst.dG_rel, agree.dG_rel);
          worst.levi_rel = std::max(worst.levi_rel, agree.levi_rel);
          worst.mixed_rel = std::max(worst.mixed_rel, agree.mixed_rel);
        }
        const bool bad = min_levi <= c.tol.psd_min_eig || min_hess <= c.tol.psd_min_eig ||
                         worst.dG_rel > c.tol.fd_rel || worst.levi_rel > c.tol.fd_rel ||
                         worst.mixed_rel > c.tol.fd_rel;
        violated = violated || bad;
        cells.push_back({{"grid_cell", grid_cell(t, k, 0.0, 2, m, m)},
                         {"trials", c.trials},
                         {"min_levi_eigenvalue", min_levi},
                         {"min_hessian_eigenvalue", min_hess},
                         {"residuals",
                          {{"dG_rel", worst.dG_rel},
                           {"levi_rel", worst.levi_rel},
                           {"mixed_rel", worst.mixed_rel}}},
                         {"violated", bad}});
      }
  return violated;
}

bool run_check_kahler_berwald(const CampaignConfig& c, nlohmann::json& cells) {
  bool violated = false;
  std::uint64_t cell = 0;
  Rng root(c.seed);
  for (double t : c.t)
    for (int k : c.k)
      for (int m : c.m) {
        Rng cr = root.stream(cell++);
        const MetricParams p(t, k);
        double kr = 0.0, br = 0.0, hm = 0.0;
        for (long i = 0; i < c.trials; ++i) {
          Rng s = cr.stream(static_cast<std::uint64_t>(i));
          const PolydiscPoint z = sample_polydisc_point(s, m, c.radius_cap);
          const TangentVector v = sample_tangent(s, m);
          std::vector<TangentVector> probes;
          for (int q = 1; q < c.vsamples; ++q) probes.push_back(sample_tangent(s, m));
          const auto rep = geometry::connection(p, z, v, probes);
          kr = std::max(kr, rep.kahler_residual);
          br = std::max(br, rep.berwald_v_residual);
          hm = std::max(hm, rep.hermitian_match_residual);
        }
        const bool bad = kr > c.residual_tol || br > c.residual_tol;
        violated = violated || bad;
        cells.push_back({{"grid_cell", grid_cell(t, k, 0.0, 2, m, m)},
                         {"trials", c.trials},
                         {"residuals",
                          {{"kahler_residual", kr},
                           {"berwald_v_residual", br},
                           {"hermitian_match_residual", hm}}},
                         {"violated", bad}});
      }
  return violated;
}

bool run_check_einstein(const CampaignConfig& c, nlohmann::json& cells) {
  bool violated = false;
  std::uint64_t cell = 0;
  Rng root(c.seed);
  for (double t : c.t)
    for (int k : c.k)
      for (int m : c.m) {
        const MetricParams p(t, k);
        const auto rep = geometry::einstein_check(p, m, static_cast<int>(c.trials),
                                                  root.stream(cell++), c.radius_cap, c.tol);
        const bool bad = !rep.einstein_factor.has_value();
        violated = violated || bad;
        nlohmann::json cj{{"grid_cell", grid_cell(t, k, 0.0, 2, m, m)},
                          {"trials", c.trials},
                          {"residuals",
                           {{"fd_diag_rel_err", rep.fd_diag_rel_err},
                            {"offdiag_max_abs", rep.offdiag_max_abs},
                            {"hermitian_match_residual", rep.hermitian_match_residual}}},
                          {"violated", bad}};
        if (rep.einstein_factor)
          cj["einstein_factor"] = {rep.einstein_factor->real(), rep.einstein_factor->imag()};
        cells.push_back(cj);
      }
  return violated;
}

bool run_eval(const CampaignConfig& c, nlohmann::json& cells) {
  if (!c.z || !c.v) throw std::invalid_argument("eval requires --z and --v");
  const MetricParams p(c.t.front(), c.k.front());
  const PolydiscPoint z(parse_cvec(*c.z));
  const TangentVector v(parse_cvec(*c.v));
  const auto mv = metrics::eval_F2(p, z, v);
  cells.push_back({{"grid_cell", grid_cell(p.t, p.k, 0.0, 2, z.dim(), z.dim())},
                   {"F2", mv.F2},
                   {"F", mv.F},
                   {"phi2", metrics::eval_phi2(p, v)},
                   {"bergman_F2", metrics::eval_bergman_F2(z, v)},
                   {"minkowski_p", metrics::minkowski_p(z.coords())}});
  return false;
}

bool run_emit_indicatrix(const CampaignConfig& c, nlohmann::json& cells) {
  const MetricParams p(c.t.front(), c.k.front());
  const int m = c.m.front();
  const auto rows = emit_indicatrix(p, m, c.resolution);
  double min_euclid = std::numeric_limits<double>::infinity();
  double max_sup = 0.0;
  for (const auto& row : rows) {
    const CVector pt = row.radius * row.dir;
    min_euclid = std::min(min_euclid, pt.norm());
    max_sup = std::max(max_sup, metrics::minkowski_p(pt));
  }
  bool bad = min_euclid < 1.0 - 1e-10 || max_sup > 1.0 + 1e-10;
  if (p.t == 0.0)
    for (const auto& row : rows) bad = bad || std::abs(row.radius - 1.0) > 1e-12;
  const std::string path = c.out.empty() ? "indicatrix.csv" : c.out;
  write_file_atomic(path, indicatrix_csv(rows));
  cells.push_back({{"grid_cell", grid_cell(p.t, p.k, 0.0, 2, m, m)},
                   {"points", rows.size()},
                   {"min_euclidean_norm", min_euclid},
                   {"max_sup_norm", max_sup},
                   {"csv", path},
                   {"violated", bad}});
  return bad;
}

}  // namespace

int exit_code_for(const nlohmann::json& report) {
  return report.value("violated", false) ? 2 : 0;
}

RunResult run(const CampaignConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  nlohmann::json report;
  try {
    validate_config(config);
    nlohmann::json cells = nlohmann::json::array();
    bool violated = false;
    if (config.command == "verify-schwarz")
      violated = run_verify_schwarz(config, cells);
    else if (config.command == "verify-norm-schwarz")
      violated = run_verify_norm_schwarz(config, cells);
    else if (config.command == "verify-distortion")
      violated = run_verify_distortion(config, cells);
    else if (config.command == "check-levi")
      violated = run_check_levi(config, cells);
    else if (config.command == "check-kahler-berwald")
      violated = run_check_kahler_berwald(config, cells);
    else if (config.command == "check-einstein")
      violated = run_check_einstein(config, cells);
    else if (config.command == "eval")
      violated = run_eval(config, cells);
    else if (config.command == "emit-indicatrix")
      violated = run_emit_indicatrix(config, cells);
    else
      throw std::invalid_argument("unknown command '" + config.command + "'");

    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    report = {{"command", config.command},
              {"seed", config.seed},
              {"trials", config.trials},
              {"elapsed_ms", elapsed},
              {"violated", violated},
              {"cells", cells}};
  } catch (const std::exception& e) {
    return RunResult{1, nlohmann::json{{"error", e.what()}}};
  }
  if (!config.out.empty() && config.command != "emit-indicatrix")
    write_file_atomic(config.out, report.dump(2) + "\n");
  return RunResult{exit_code_for(report), report};
}

std::vector<IndicatrixRow> emit_indicatrix(const MetricParams& p, int m, int resolution) {
  if (m < 1) throw std::invalid_argument("emit_indicatrix: m >= 1 required");
  if (resolution < 8) throw std::invalid_argument("emit_indicatrix: resolution >= 8 required");
  std::vector<IndicatrixRow> rows;
  auto push = [&](CVector dir) {
    dir /= dir.norm();
    const double r = metrics::indicatrix_radius(p, TangentVector(dir));
    rows.push_back({std::move(dir), r});
  };
  for (int l = 0; l < m; ++l) {
    CVector e = CVector::Zero(m);
    e[l] = Complex(1.0, 0.0);
    push(e);
    e[l] = Complex(0.0, 1.0);
    push(e);
  }
  push(CVector::Constant(m, Complex(1.0, 0.0)));
  Rng rng(kIndicatrixSeed);
  const int count = resolution * resolution;
  for (int q = 0; q < count; ++q) {
    Rng s = rng.stream(static_cast<std::uint64_t>(q));
    push(sample_tangent(s, m).coords());
  }
  return rows;
}

std::string indicatrix_csv(const std::vector<IndicatrixRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  const int m = rows.empty() ? 0 : static_cast<int>(rows.front().dir.size());
  for (int l = 1; l <= m; ++l) os << "dir_re_" << l << ",dir_im_" << l << ",";
  os << "radius\n";
  for (const auto& row : rows) {
    for (int l = 0; l < m; ++l) os << row.dir[l].real() << "," << row.dir[l].imag() << ",";
    os << row.radius << "\n";
  }
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
  }
  fs::rename(tmp, target);
}

}  // namespace finsler::harness
