#pragma once

#include <map>
#include <optional>
#include <string>

#include "ncgeo/index_calculus.hpp"
#include "ncgeo/metric.hpp"
#include "ncgeo/search.hpp"
#include "ncgeo/topology.hpp"

namespace ncgeo {

/// Parsed `key = value` lines. '#' starts a comment. Duplicate keys are an error.
std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& source);

struct ExperimentConfig {
  int n = 2;
  int p = 2;
  MetricKind metric = MetricKind::Round;
  double alpha = 0.0;
  int grid = kDefaultGrid;

  SearchOptions search;
  int class_power = 1;

  bool poincare = true;
  bool index_oracle = true;
  bool simplicity = true;

  /// Flag curvature certificate; bounds that need it are skipped when absent.
  std::optional<double> delta;
  std::optional<int> expected_count;

  std::string out_dir = ".";
  std::string name = "report";
  bool svg = false;
  bool loops = false;

  /// Throws ConfigError on an inconsistent value.
  void validate() const;
};

/// Every key accepted in an experiment config.
const std::vector<std::string>& experiment_config_keys();

/// Throws ConfigError on unknown keys, malformed values or failed validation.
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_experiment_config(const std::string& path);

/// Keys p_minus, p_zero, p_plus, q_minus, q_zero, q_plus, r_prime, thetas,
/// alphas, betas, h_count, i1, nu1, n. Angle lists are comma separated
/// "num/den" or decimal entries, optionally in brackets.
NormalForm parse_normal_form(const std::string& text, const std::string& source = "<normal form>");
NormalForm load_normal_form(const std::string& path);

/// Rows `label,m,i,nu,kq_support` with kq_support "q:k;q:k". An optional
/// `p = <order>` line sets the deck group order (default 2).
MorseData parse_morse_data(const std::string& text, const std::string& source = "<morse data>");
MorseData load_morse_data(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace ncgeo
