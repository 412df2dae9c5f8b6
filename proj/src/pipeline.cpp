#include "ncgeo/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>

#include "ncgeo/errors.hpp"
#include "ncgeo/index_calculus.hpp"
#include "ncgeo/topology.hpp"

namespace ncgeo {

namespace {

constexpr double kMapDefectTol = 1e-6;
constexpr double kSymmetryTol = 1e-5;

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void add(std::vector<CheckResult>& checks, std::string name, bool pass, std::string detail) {
  checks.push_back({std::move(name), pass, std::move(detail)});
}

void bound_checks(PipelineResult& r, const MetricSpec& m) {
  const auto& cfg = r.config;
  const auto& recs = r.search.records;
  if (!cfg.delta) return;
  const double delta = *cfg.delta;
  const double lo = std::pow(m.lambda / (m.lambda + 1.0), 2);
  const bool admissible = delta > lo;

  if (admissible || cfg.n % 2 == 0) {
    const double floor_len = bound_min_length(m.lambda) / cfg.p;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      add(r.checks, "length.lower_bound[" + std::to_string(i) + "]", recs[i].length >= floor_len * (1.0 - 1e-6),
          "L = " + num(recs[i].length) + ", pi (lambda+1)/(lambda p) = " + num(floor_len));
    }
  }
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (recs[i].index < 0) continue;
    const long long need = bound_index_from_length(recs[i].length, delta, cfg.n);
    add(r.checks, "index.length_bound[" + std::to_string(i) + "]", recs[i].index >= need,
        "index " + std::to_string(recs[i].index) + " >= " + std::to_string(need));
  }
  if (!admissible) {
    add(r.checks, "thm1.hypotheses", true, "delta <= (lambda/(lambda+1))^2, counting bounds not applicable");
    return;
  }
  r.counting = thm1_counting(delta, m.lambda);
  const auto& c = *r.counting;
  if (!recs.empty()) {
    add(r.checks, "thm1.c1_length", recs[0].length <= c.bound_c1 * (1.0 + 1e-9),
        "L(c1) = " + num(recs[0].length) + " <= " + num(c.bound_c1));
  }
  if (cfg.n == 2 && recs.size() >= 2) {
    add(r.checks, "thm1.c2_length", recs[1].length <= c.bound_c2 * (1.0 + 1e-9),
        "L(c2) = " + num(recs[1].length) + " <= " + num(c.bound_c2) + " (N = " + std::to_string(c.N) + ", " +
            c.branch + ")");
  }
  add(r.checks, "thm1.branch_within_closed_form", c.branch_within_closed_form,
      num(c.bound_c2) + " <= " + num(c.closed_form_c2));
}

}  // namespace

bool PipelineResult::pass() const {
  return error.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

ReportBundle PipelineResult::bundle() const {
  ReportBundle b;
  b.metric_id = metric_id;
  b.n = config.n;
  b.p = config.p;
  b.class_power = config.class_power;
  b.lambda = lambda;
  b.delta = config.delta;
  b.rng_seed = config.search.rng_seed;
  for (const auto& r : search.records) b.records.push_back(RecordFields::from(r));
  b.checks = checks;
  b.counting = counting;
  b.seeds_run = config.search.seeds;
  for (const auto& d : search.diagnostics) {
    if (d.route == "descent" && d.converged) ++b.seeds_converged;
  }
  b.partial = search.partial || !error.empty();
  b.error = error;
  return b;
}

void analyze_records(const MetricSpec& m, const SpaceFormSpec& sf, std::vector<GeodesicRecord>& records,
                     std::vector<RecordAnalysis>& analyses, bool poincare, bool index_oracle, double tol_geo) {
  analyses.assign(records.size(), {});
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& rec = records[i];
    auto& a = analyses[i];
    if (poincare) {
      const PoincareMap pm = poincare_map(m, sf, rec.loop);
      const SpectralSummary ss = spectral_summary(pm.matrix);
      rec.eigenvalues = ss.eigenvalues;
      a.has_poincare = true;
      a.symplectic_defect = pm.defect;
      a.symmetry_defect = spectral_symmetry_defect(ss.eigenvalues);
      a.elliptic_height = ss.elliptic_height;
      a.map_nullity = ss.nullity;
    }
    if (index_oracle) {
      a.morse = numerical_morse_index(m, rec.loop, std::max(tol_geo, 1e-6));
      a.has_index = true;
      rec.index = a.morse.index;
      rec.nullity = std::max(0, a.morse.nullity_est - 1);
    }
  }
}

PipelineResult run_pipeline(const ExperimentConfig& cfg) {
  cfg.validate();
  PipelineResult r;
  r.config = cfg;
  SpaceFormSpec sf;
  MetricSpec m;
  try {
    sf = SpaceFormSpec::make(cfg.n, cfg.p);
    m = MetricSpec::make(cfg.metric, cfg.n, cfg.alpha, cfg.grid);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  r.metric_id = m.id();
  r.lambda = m.lambda;
  try {
    r.search = find_geodesics(m, sf, cfg.class_power, cfg.search);
    int converged = 0;
    for (const auto& d : r.search.diagnostics) converged += d.route == "descent" && d.converged;
    add(r.checks, "search.converged", !r.search.partial,
        std::to_string(converged) + "/" + std::to_string(cfg.search.seeds) + " descent runs converged");
    add(r.checks, "search.nonempty", !r.search.records.empty(),
        std::to_string(r.search.records.size()) + " closed geodesics");
    if (cfg.expected_count) {
      add(r.checks, "search.expected_count", static_cast<int>(r.search.records.size()) == *cfg.expected_count,
          std::to_string(r.search.records.size()) + " found, " + std::to_string(*cfg.expected_count) + " expected");
    }

    analyze_records(m, sf, r.search.records, r.analyses, cfg.poincare, cfg.index_oracle, cfg.search.tol_geo);
    for (std::size_t i = 0; i < r.analyses.size(); ++i) {
      const auto& a = r.analyses[i];
      if (!a.has_poincare) continue;
      const std::string tag = "[" + std::to_string(i) + "]";
      add(r.checks, "poincare.symplectic" + tag, a.symplectic_defect <= kMapDefectTol,
          "defect " + num(a.symplectic_defect));
      add(r.checks, "poincare.spectral_symmetry" + tag, a.symmetry_defect <= kSymmetryTol,
          "defect " + num(a.symmetry_defect));
    }
    if (cfg.index_oracle && !r.search.records.empty()) {
      std::vector<std::pair<int, int>> in;
      for (const auto& rec : r.search.records) in.emplace_back(rec.index, rec.nullity);
      const SandwichReport sw = index_sandwich_check(in, cfg.n);
      std::string detail;
      for (const auto& row : sw.rows) {
        detail += "k=" + std::to_string(row.k) + ":" + (row.present ? (row.pass ? "pass" : "fail") : "missing") + " ";
      }
      if (sw.incomplete) detail += "(incomplete)";
      add(r.checks, "index.sandwich", sw.pass, detail);
    }
    if (cfg.simplicity) {
      const auto bad = std::count_if(r.search.records.begin(), r.search.records.end(),
                                     [](const GeodesicRecord& g) { return !g.simple; });
      const PinchResult pinch = metric_pinch_check(m, m.lambda, cfg.grid);
      add(r.checks, "simplicity", bad == 0 || !pinch.holds,
          std::to_string(bad) + " non-simple; pinch condition " + (pinch.holds ? "holds" : "fails"));
    }
    bound_checks(r, m);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    r.error = e.what();
  }
  return r;
}

std::vector<std::string> emit_report(const PipelineResult& result, const std::vector<std::string>& formats,
                                     bool with_timestamp) {
  const auto& cfg = result.config;
  auto wanted = [&](const std::string& f) {
    if (formats.empty()) return f != "svg" || cfg.svg;
    return std::find(formats.begin(), formats.end(), f) != formats.end();
  };
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create '" + cfg.out_dir + "': " + ec.message());
  ReportBundle b = result.bundle();
  if (with_timestamp) b.timestamp = utc_now();
  const std::string suffix = b.partial ? ".partial" : "";
  const std::filesystem::path dir(cfg.out_dir);
  std::vector<std::string> written;
  auto put = [&](const std::string& file, const std::string& body) {
    const std::string path = (dir / (file + suffix)).string();
    write_text_file(path, body);
    written.push_back(path);
  };
  if (wanted("json")) put(cfg.name + ".json", report_json(b));
  if (wanted("csv")) {
    put(cfg.name + ".csv", records_csv(b.records));
    if (cfg.loops) {
      for (std::size_t i = 0; i < result.search.records.size(); ++i) {
        put(cfg.name + "_loop" + std::to_string(i) + ".csv", loop_csv(result.search.records[i].loop));
      }
    }
  }
  if (wanted("svg")) {
    std::vector<std::pair<std::string, double>> refs;
    if (result.counting) {
      refs.emplace_back("bound c1", result.counting->bound_c1);
      if (cfg.n == 2) refs.emplace_back("bound c2", result.counting->bound_c2);
    }
    put(cfg.name + "_lengths.svg", svg_length_spectrum(b.records, refs));
    put(cfg.name + "_eigenvalues.svg", svg_eigenvalues(b.records));
  }
  return written;
}

}  // namespace ncgeo
