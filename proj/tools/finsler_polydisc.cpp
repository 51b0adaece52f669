// finsler-polydisc: seeded verification campaigns for the invariant
// Kahler-Berwald metrics on unit polydiscs. Emits JSON reports and
// plot-ready CSV; see README.md for the schemas.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "finsler/harness.hpp"

namespace {

struct CliFlags {
  finsler::harness::CampaignConfig cfg;
  std::string map_file;
  std::string z_json;
  std::string v_json;
};

void add_common(CLI::App* sub, CliFlags& f) {
  sub->fallthrough();  // parent-level flags like --config may follow the subcommand
  sub->add_option("--t", f.cfg.t, "source t grid")->delimiter(',');
  sub->add_option("--k", f.cfg.k, "source k grid (integers >= 2)")->delimiter(',');
  sub->add_option("--tt", f.cfg.tt, "target t~ grid")->delimiter(',');
  sub->add_option("--kk", f.cfg.kk, "target k~ grid")->delimiter(',');
  sub->add_option("--m", f.cfg.m, "source dimensions")->delimiter(',');
  sub->add_option("--n", f.cfg.n, "target dimensions")->delimiter(',');
  sub->add_option("--trials", f.cfg.trials, "trials (or samples) per grid cell");
  sub->add_option("--seed", f.cfg.seed, "campaign seed");
  sub->add_option("--radius-cap", f.cfg.radius_cap, "sampling radius cap in (0,1)");
  sub->add_option("--abs-eq", f.cfg.tol.abs_eq, "absolute comparison tolerance");
  sub->add_option("--rel-eq", f.cfg.tol.rel_eq, "relative comparison tolerance");
  sub->add_option("--fd-rel", f.cfg.tol.fd_rel, "finite-difference agreement tolerance");
  sub->add_option("--psd-min-eig", f.cfg.tol.psd_min_eig, "positive-definiteness threshold");
  sub->add_option("--residual-tol", f.cfg.residual_tol, "connection residual threshold");
  sub->add_option("--out", f.cfg.out, "report output path (default: stdout only)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holomorphic-invariant Kahler-Berwald metrics on polydiscs: "
               "verification campaigns"};
  app.set_config("--config", "", "TOML config file; command-line flags win");
  app.require_subcommand(1);

  CliFlags f;
  auto* eval = app.add_subcommand("eval", "evaluate the metric at one (z; v)");
  auto* schwarz = app.add_subcommand("verify-schwarz", "randomized sharp Schwarz inequality");
  auto* nschwarz =
      app.add_subcommand("verify-norm-schwarz", "norm-level Schwarz lemma for maps fixing 0");
  auto* disto = app.add_subcommand("verify-distortion", "convex-mapping distortion bounds");
  auto* levi = app.add_subcommand("check-levi", "strong pseudoconvexity / convexity");
  auto* kb = app.add_subcommand("check-kahler-berwald", "connection symmetry and v-independence");
  auto* einst = app.add_subcommand("check-einstein", "partial mean curvature factor");
  auto* indic = app.add_subcommand("emit-indicatrix", "indicatrix boundary CSV");
  for (auto* sub : {eval, schwarz, nschwarz, disto, levi, kb, einst, indic}) add_common(sub, f);

  eval->add_option("--z", f.z_json, "base point as JSON [[re,im],...]")->required();
  eval->add_option("--v", f.v_json, "tangent vector as JSON [[re,im],...]")->required();
  schwarz->add_option("--families", f.cfg.families,
                      "sampling families: linear, coord_moebius, extremal")
      ->delimiter(',');
  nschwarz->add_option("--map", f.map_file, "JSON map spec file (must fix the origin)");
  disto->add_option("--map", f.map_file, "JSON convex-mapping spec file");
  kb->add_option("--vsamples", f.cfg.vsamples, "fiber probes per base point");
  indic->add_option("--resolution", f.cfg.resolution, "sampling resolution (>= 8)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // config errors are exit 1 by contract
  }

  try {
    f.cfg.command = app.get_subcommands().front()->get_name();
    if (!f.map_file.empty()) {
      std::ifstream in(f.map_file);
      if (!in) throw std::runtime_error("cannot read map spec " + f.map_file);
      f.cfg.map_spec = nlohmann::json::parse(in);
    }
    if (!f.z_json.empty()) f.cfg.z = nlohmann::json::parse(f.z_json);
    if (!f.v_json.empty()) f.cfg.v = nlohmann::json::parse(f.v_json);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  const auto result = finsler::harness::run(f.cfg);
  if (result.exit_code == 1) {
    std::cerr << "config error: " << result.report.value("error", "invalid configuration")
              << "\n";
    return 1;
  }
  std::cout << result.report.dump(2) << std::endl;
  return result.exit_code;
}
