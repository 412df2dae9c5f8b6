#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ncgeo/loop.hpp"
#include "ncgeo/search.hpp"
#include "ncgeo/topology.hpp"

namespace ncgeo {

/// The serialized fields of a GeodesicRecord.
struct RecordFields {
  double length = 0.0;
  double energy = 0.0;
  int index = -1;
  int nullity = -1;
  double residual = 0.0;
  bool simple = true;
  int class_power = 1;
  std::vector<std::complex<double>> eigenvalues;

  static RecordFields from(const GeodesicRecord& r);
  bool operator==(const RecordFields&) const = default;
};

struct CheckResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct ReportBundle {
  std::string metric_id;
  int n = 2;
  int p = 2;
  int class_power = 1;
  double lambda = 1.0;
  std::optional<double> delta;
  std::uint64_t rng_seed = 0;
  std::vector<RecordFields> records;
  std::vector<CheckResult> checks;
  std::optional<CountingReport> counting;
  int seeds_run = 0;
  int seeds_converged = 0;
  bool partial = false;
  std::string error;
  /// Omitted from the output when empty.
  std::string timestamp;
};

/// "%.17g"; non-finite values become null.
std::string format_double(double v);

std::string records_json(const std::vector<RecordFields>& records);
std::string report_json(const ReportBundle& bundle);
/// JSON object with keys N, bound_c1, bound_c2, branch, thm3_count and the supporting values.
std::string counting_report_json(const CountingReport& rep);

/// Accepts a bare record array or a report object with a "geodesics" array.
/// Throws DataError on schema violations.
std::vector<RecordFields> parse_records_json(const std::string& text);

/// Header plus one row per record; eigenvalues as "re:im" pairs joined by ';'.
std::string records_csv(const std::vector<RecordFields>& records);

/// N rows of n + 1 coordinates.
std::string loop_csv(const DiscreteLoop& g);

/// Bar chart of lengths with optional horizontal reference lines.
std::string svg_length_spectrum(const std::vector<RecordFields>& records,
                                const std::vector<std::pair<std::string, double>>& references = {});
/// Poincare map eigenvalues on the unit circle, one colour per record.
std::string svg_eigenvalues(const std::vector<RecordFields>& records);

/// Throws IoError.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ncgeo
