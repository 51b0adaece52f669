#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finsler/core.hpp"
#include "finsler/metrics.hpp"

#include <json.hpp>

namespace finsler::harness {

/// One seeded verification campaign; grids are cross products of the lists.
struct CampaignConfig {
  std::string command;  ///< eval | verify-schwarz | verify-norm-schwarz |
                        ///< verify-distortion | check-levi |
                        ///< check-kahler-berwald | check-einstein | emit-indicatrix
  std::vector<double> t{0.0, 1.0};
  std::vector<int> k{2};
  std::vector<double> tt{1.0};
  std::vector<int> kk{2};
  std::vector<int> m{2};
  std::vector<int> n{2};
  long trials = 1000;
  std::uint64_t seed = 42;
  double radius_cap = 0.95;
  Tolerance tol{};
  double residual_tol = 1e-8;  ///< Kahler/Berwald certification threshold
  int resolution = 32;         ///< indicatrix sampling resolution
  int vsamples = 20;           ///< fiber probes per base point
  std::vector<std::string> families{"linear", "coord_moebius", "extremal"};
  std::optional<nlohmann::json> map_spec;  ///< fixed map / convex mapping override
  std::optional<nlohmann::json> z;         ///< eval input, [[re,im],...]
  std::optional<nlohmann::json> v;         ///< eval input
  std::string out;                         ///< report path; empty = stdout only
};

struct RunResult {
  int exit_code = 0;  ///< 0 clean, 1 config error, 2 violated invariant
  nlohmann::json report;
};

/// Executes the campaign; deterministic given the seed. Any violated
/// invariant flips the exit code to 2 and carries a replayable worst case.
RunResult run(const CampaignConfig& config);

/// Exit-code mapping used by run(): 2 when the report says violated.
int exit_code_for(const nlohmann::json& report);

/// Indicatrix boundary sample: point radius * dir has phi_{t,k} = 1.
struct IndicatrixRow {
  CVector dir;  ///< unit Euclidean direction in C^m
  double radius = 0.0;
};

/// Deterministic boundary sampling of the indicatrix at the origin; includes
/// the coordinate axes and the main diagonal among resolution^2 directions.
std::vector<IndicatrixRow> emit_indicatrix(const MetricParams& p, int m, int resolution);

/// Header dir_re_1,dir_im_1,...,radius followed by one row per sample.
std::string indicatrix_csv(const std::vector<IndicatrixRow>& rows);

/// Atomic write: temp file in the target directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace finsler::harness
