#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "ncgeo/config.hpp"
#include "ncgeo/errors.hpp"
#include "ncgeo/index_calculus.hpp"
#include "ncgeo/pipeline.hpp"
#include "ncgeo/report.hpp"
#include "ncgeo/topology.hpp"

namespace {

using namespace ncgeo;

constexpr int kExitPass = 0;
constexpr int kExitCheck = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
};

void emit(const Globals& g, const std::string& file, const std::string& body) {
  std::cout << body;
  if (g.out.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(g.out, ec);
  if (ec) throw IoError("cannot create '" + g.out + "'");
  write_text_file((std::filesystem::path(g.out) / file).string(), body);
}

ExperimentConfig load_config(const Globals& g) {
  if (g.config.empty()) throw ConfigError("--config is required");
  ExperimentConfig cfg = load_experiment_config(g.config);
  if (g.seed) cfg.search.rng_seed = *g.seed;
  if (!g.out.empty()) cfg.out_dir = g.out;
  return cfg;
}

std::vector<std::string> formats(const Globals& g) {
  if (g.format.empty()) return {};
  return {g.format};
}

void print_checks(const PipelineResult& r, const std::vector<std::string>& files) {
  for (const auto& c : r.checks) std::cout << (c.pass ? "ok   " : "FAIL ") << c.name << "  " << c.detail << "\n";
  if (!r.error.empty()) std::cout << "error: " << r.error << "\n";
  for (const auto& f : files) std::cout << "wrote " << f << "\n";
}

int run_search(const Globals& g, bool analysis) {
  ExperimentConfig cfg = load_config(g);
  if (!analysis) {
    cfg.poincare = false;
    cfg.index_oracle = false;
  }
  const PipelineResult r = run_pipeline(cfg);
  const auto files = emit_report(r, formats(g));
  print_checks(r, files);
  return r.pass() ? kExitPass : kExitCheck;
}

int run_report(const Globals& g, const std::string& input) {
  const std::vector<RecordFields> recs = parse_records_json(read_text_file(input));
  const std::string fmt = g.format.empty() ? "csv" : g.format;
  std::string stem = std::filesystem::path(input).stem().string();
  if (fmt == "json") {
    emit(g, stem + ".json", records_json(recs));
  } else if (fmt == "csv") {
    emit(g, stem + ".csv", records_csv(recs));
  } else {
    emit(g, stem + "_lengths.svg", svg_length_spectrum(recs));
    if (!g.out.empty()) {
      write_text_file((std::filesystem::path(g.out) / (stem + "_eigenvalues.svg")).string(), svg_eigenvalues(recs));
    }
  }
  return kExitPass;
}

int run_betti(const Globals& g, int n, int q_max) {
  const BettiTable bt = BettiTable::make(n, q_max);
  std::ostringstream o;
  o << "q,b_q\n";
  for (int q = 0; q <= q_max; ++q) o << q << "," << bt(q) << "\n";
  emit(g, "betti.csv", o.str());
  return kExitPass;
}

int run_index(const Globals& g, const std::string& nf_path, int m_max, bool use_float) {
  if (m_max < 1) throw ConfigError("--m-max must be >= 1");
  const NormalForm nf = load_normal_form(nf_path);
  std::ostringstream o;
  o << "m,i,nu\n";
  if (use_float) {
    const NormalFormLD lf = to_long_double(nf);
    for (const auto& row : index_sequence(lf, m_max)) o << row.m << "," << row.index << "," << row.nullity << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17Lg", mean_index(lf));
    o << "# mean_index = " << buf << "\n";
  } else {
    for (const auto& row : index_sequence(nf, m_max)) o << row.m << "," << row.index << "," << row.nullity << "\n";
    o << "# mean_index = " << to_string(mean_index(nf)) << "\n";
  }
  emit(g, "index.csv", o.str());
  return kExitPass;
}

int run_thm1(const Globals& g, const std::string& delta, const std::string& lambda) {
  const CountingReport rep = thm1_counting(parse_rational(delta), parse_rational(lambda));
  emit(g, "thm1.json", counting_report_json(rep));
  return rep.branch_within_closed_form ? kExitPass : kExitCheck;
}

int run_thm3(const Globals& g, int n, int p, const std::string& lambda, const std::string& delta,
             const std::string& rho) {
  const Rational l = parse_rational(lambda), d = parse_rational(delta), r = parse_rational(rho);
  const long long count = thm3_count(n, p, l, d, r);
  CountingReport rep;
  try {
    rep = thm1_counting(d, l);
  } catch (const DomainError& e) {
    rep.branch = "n/a";
    rep.hypotheses.push_back(std::string("counting bounds skipped: ") + e.what());
  }
  rep.n = n;
  rep.p = p;
  rep.rho = to_double(r);
  rep.thm3_count = count;
  emit(g, "thm3.json", counting_report_json(rep));
  return kExitPass;
}

int run_morse(const Globals& g, const std::string& data, int n, int q_max) {
  const MorseData md = load_morse_data(data);
  const BettiTable bt = BettiTable::make(n, q_max);
  const MorseCheck mc = morse_inequality_check(md, bt, q_max);
  std::ostringstream o;
  o << "q,M_q,b_q\n";
  for (int q = 0; q <= q_max; ++q) o << q << "," << mc.M[q] << "," << mc.b[q] << "\n";
  o << "# pass = " << (mc.pass ? "true" : "false") << ", first_failure = " << mc.first_failure << "\n";
  o << "# cumulative_pass = " << (mc.cumulative_pass ? "true" : "false")
    << ", first_cumulative_failure = " << mc.first_cumulative_failure << "\n";
  emit(g, "morse.csv", o.str());
  return mc.pass ? kExitPass : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed geodesics on Finsler space forms"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Experiment config file");
  app.add_option("--seed", g.seed, "Override search.rng_seed");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "svg"}));
  app.fallthrough();

  auto* find = app.add_subcommand("find", "Search for closed geodesics");
  auto* analyze = app.add_subcommand("analyze", "Search, Poincare maps, Morse indices and bound checks");

  std::string report_input;
  auto* report = app.add_subcommand("report", "Re-emit a JSON record file as CSV, JSON or SVG");
  report->add_option("--input", report_input, "JSON report or record array")->required();

  int betti_n = 2, q_max = 20;
  auto* betti_cmd = app.add_subcommand("betti", "Betti numbers of the twisted loop space");
  betti_cmd->add_option("--n", betti_n)->required();
  betti_cmd->add_option("--q-max", q_max)->required();

  std::string nf_path;
  int m_max = 10;
  bool use_float = false;
  auto* index_cmd = app.add_subcommand("index", "Index iteration");
  index_cmd->require_subcommand(1);
  auto* iterate = index_cmd->add_subcommand("iterate", "i(c^m), nu(c^m) for m = 1..M");
  iterate->add_option("--nf", nf_path)->required();
  iterate->add_option("--m-max", m_max)->required();
  iterate->add_flag("--float", use_float, "Use 80-bit floating point instead of exact rationals");

  std::string delta = "1", lambda = "1", rho = "1";
  int tn = 3, tp = 2;
  auto* bounds = app.add_subcommand("bounds", "Counting bounds");
  bounds->require_subcommand(1);
  auto* thm1 = bounds->add_subcommand("thm1", "Length bounds of two closed geodesics");
  thm1->add_option("--delta", delta)->required();
  thm1->add_option("--lambda", lambda)->required();
  auto* thm3 = bounds->add_subcommand("thm3", "Closed geodesic count for odd dimensions");
  thm3->add_option("--n", tn)->required();
  thm3->add_option("--p", tp)->required();
  thm3->add_option("--lambda", lambda)->required();
  thm3->add_option("--delta", delta)->required();
  thm3->add_option("--rho", rho)->required();

  std::string morse_data;
  int morse_n = 2, morse_q = 10;
  auto* morse = app.add_subcommand("morse", "Morse inequalities");
  morse->require_subcommand(1);
  auto* check = morse->add_subcommand("check", "Check M_q >= b_q");
  check->add_option("--data", morse_data)->required();
  check->add_option("--n", morse_n)->required();
  check->add_option("--q-max", morse_q)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*find) return run_search(g, false);
    if (*analyze) return run_search(g, true);
    if (*report) return run_report(g, report_input);
    if (*betti_cmd) return run_betti(g, betti_n, q_max);
    if (*iterate) return run_index(g, nf_path, m_max, use_float);
    if (*thm1) return run_thm1(g, delta, lambda);
    if (*thm3) return run_thm3(g, tn, tp, lambda, delta, rho);
    if (*check) return run_morse(g, morse_data, morse_n, morse_q);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "hypothesis violated: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheck;
  }
  return kExitConfig;
}
