#include <doctest.h>

#include <cmath>

#include "finsler/harness.hpp"
#include "finsler/metrics.hpp"

using namespace finsler;
using namespace finsler::harness;

TEST_CASE("verify-schwarz campaign: exit code, determinism, witness ratio") {
  CampaignConfig cfg;
  cfg.command = "verify-schwarz";
  cfg.t = {0.0, 1.0};
  cfg.k = {2};
  cfg.tt = {1.0};
  cfg.kk = {2};
  cfg.m = {2};
  cfg.n = {3};
  cfg.trials = 400;
  cfg.seed = 42;

  const auto r1 = run(cfg);
  const auto r2 = run(cfg);
  CHECK(r1.exit_code == 0);
  nlohmann::json a = r1.report, b = r2.report;
  a.erase("elapsed_ms");
  b.erase("elapsed_ms");
  CHECK(a.dump() == b.dump());  // replayable bit for bit, wall-clock aside
  for (const auto& cell : r1.report.at("cells")) {
    CHECK(cell.at("max_ratio").get<double>() <=
          cell.at("sharp_constant").get<double>() * (1.0 + 1e-9));
    // forced witness pins the max ratio at the constant
    CHECK(cell.at("max_ratio").get<double>() ==
          doctest::Approx(cell.at("sharp_constant").get<double>()).epsilon(1e-12));
  }
}

TEST_CASE("config errors exit 1") {
  CampaignConfig cfg;
  cfg.command = "verify-schwarz";
  cfg.trials = 0;
  CHECK(run(cfg).exit_code == 1);
  cfg.trials = 10;
  cfg.command = "no-such-command";
  CHECK(run(cfg).exit_code == 1);
  cfg.command = "verify-schwarz";
  cfg.radius_cap = 1.0;
  CHECK(run(cfg).exit_code == 1);
}

TEST_CASE("violation mapping to exit code 2") {
  nlohmann::json rep{{"violated", true}};
  CHECK(exit_code_for(rep) == 2);
  rep["violated"] = false;
  CHECK(exit_code_for(rep) == 0);
}

TEST_CASE("geometry campaigns pass on a small grid") {
  CampaignConfig cfg;
  cfg.t = {0.0, 1.0};
  cfg.k = {2};
  cfg.m = {2};
  cfg.trials = 5;

  cfg.command = "check-levi";
  CHECK(run(cfg).exit_code == 0);

  cfg.command = "check-kahler-berwald";
  cfg.vsamples = 5;
  CHECK(run(cfg).exit_code == 0);

  cfg.command = "check-einstein";
  cfg.trials = 10;
  const auto r = run(cfg);
  CHECK(r.exit_code == 0);
  for (const auto& cell : r.report.at("cells"))
    CHECK(cell.at("einstein_factor")[0].get<double>() == -2.0);
}

TEST_CASE("eval command reports the closed-form values") {
  CampaignConfig cfg;
  cfg.command = "eval";
  cfg.t = {1.0};
  cfg.k = {2};
  cfg.z = nlohmann::json::parse("[[0.0,0.0],[0.0,0.0]]");
  cfg.v = nlohmann::json::parse("[[1.0,0.0],[1.0,0.0]]");
  const auto r = run(cfg);
  CHECK(r.exit_code == 0);
  const auto& cell = r.report.at("cells")[0];
  CHECK(cell.at("F2").get<double>() ==
        doctest::Approx((2.0 + std::sqrt(2.0)) / 2.0).epsilon(1e-14));
  CHECK(cell.at("bergman_F2").get<double>() == 2.0);
}

TEST_CASE("indicatrix rows satisfy the inclusion sandwich") {
  for (double t : {0.0, 1.0, 3.0}) {
    const MetricParams p(t, 2);
    const auto rows = emit_indicatrix(p, 2, 10);
    CHECK(rows.size() >= 100);
    for (const auto& row : rows) {
      const CVector point = row.radius * row.dir;
      CHECK(point.norm() >= 1.0 - 1e-10);
      CHECK(metrics::minkowski_p(point) <= 1.0 + 1e-10);
      if (t == 0.0) CHECK(std::abs(row.radius - 1.0) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(emit_indicatrix(MetricParams(1.0, 2), 2, 4), std::invalid_argument);
}

TEST_CASE("indicatrix csv has the documented header") {
  const auto rows = emit_indicatrix(MetricParams(1.0, 2), 2, 8);
  const std::string csv = indicatrix_csv(rows);
  CHECK(csv.rfind("dir_re_1,dir_im_1,dir_re_2,dir_im_2,radius\n", 0) == 0);
}
