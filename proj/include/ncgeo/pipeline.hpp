#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncgeo/config.hpp"
#include "ncgeo/linearized.hpp"
#include "ncgeo/report.hpp"
#include "ncgeo/search.hpp"

namespace ncgeo {

struct RecordAnalysis {
  bool has_poincare = false;
  double symplectic_defect = 0.0;
  double symmetry_defect = 0.0;
  int elliptic_height = 0;
  int map_nullity = 0;
  bool has_index = false;
  MorseIndexEstimate morse;
};

struct PipelineResult {
  ExperimentConfig config;
  std::string metric_id;
  double lambda = 1.0;
  SearchResult search;
  std::vector<RecordAnalysis> analyses;
  std::optional<CountingReport> counting;
  std::vector<CheckResult> checks;
  /// Message of the stage that threw, empty on success.
  std::string error;

  bool pass() const;
  ReportBundle bundle() const;
};

/// Search, per-record analysis and bound checks. Stage failures are captured
/// in `error`; configuration errors propagate.
PipelineResult run_pipeline(const ExperimentConfig& cfg);

/// Record analysis only: Poincare map, spectrum and Hessian index for every record.
void analyze_records(const MetricSpec& m, const SpaceFormSpec& sf, std::vector<GeodesicRecord>& records,
                     std::vector<RecordAnalysis>& analyses, bool poincare, bool index_oracle, double tol_geo);

/// Writes <name>.json, <name>.csv and the optional SVG and loop files to
/// cfg.out_dir. Files of a failed run get a `.partial` suffix. `formats` is a
/// subset of {"json", "csv", "svg"}; empty means all enabled by the config.
/// Returns the written paths. Throws IoError.
std::vector<std::string> emit_report(const PipelineResult& result, const std::vector<std::string>& formats = {},
                                     bool with_timestamp = true);

}  // namespace ncgeo
