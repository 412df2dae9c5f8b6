#include "ncgeo/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ncgeo/errors.hpp"

namespace ncgeo {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  T v{};
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != last) {
    throw ConfigError("bad value for '" + key + "': '" + s + "'");
  }
  return v;
}

bool parse_bool(const std::string& raw, const std::string& key) {
  std::string s = trim(raw);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("bad boolean for '" + key + "': '" + s + "'");
}

std::vector<Rational> parse_angle_list(const std::string& raw, const std::string& key) {
  std::string s = trim(raw);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw DataError("unbalanced brackets in '" + key + "'");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<Rational> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string t = trim(item);
    if (t.size() >= 2 && (t.front() == '"' || t.front() == '\'') && t.back() == t.front()) t = t.substr(1, t.size() - 2);
    try {
      out.push_back(parse_rational(t));
    } catch (const PreconditionError& e) {
      throw DataError("bad angle in '" + key + "': " + e.what());
    }
  }
  return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& source) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find_first_of("=:");
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
    if (!out.emplace(key, value).second) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

const std::vector<std::string>& experiment_config_keys() {
  static const std::vector<std::string> keys = {
      "manifold.n",         "manifold.p",          "metric.kind",        "metric.alpha",
      "sampling.grid",      "search.seeds",        "search.rng_seed",    "search.N",
      "search.tol_geo",     "search.max_iters",    "search.class_power", "search.dedup_tol",
      "search.switch_tol",  "search.newton_iters", "search.newton_from_seeds",
      "search.seed_noise",  "analysis.poincare",   "analysis.index_oracle",
      "analysis.simplicity", "certificate.delta",  "checks.expected_count",
      "output.dir",         "output.name",         "output.svg",         "output.loops"};
  return keys;
}

void ExperimentConfig::validate() const {
  if (n < 2 || n > 7) throw ConfigError("manifold.n must lie in [2, 7]");
  if (p < 2) throw ConfigError("manifold.p must be >= 2");
  if (n % 2 == 0 && p != 2) throw ConfigError("manifold.p must be 2 when manifold.n is even");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("metric.alpha must lie in [0, 1)");
  if (metric == MetricKind::Round && alpha != 0.0) throw ConfigError("metric.alpha must be 0 for the round metric");
  if (grid < 4) throw ConfigError("sampling.grid must be >= 4");
  if (search.seeds < 1) throw ConfigError("search.seeds must be >= 1");
  if (search.N < kMinLoopSamples) throw ConfigError("search.N must be >= " + std::to_string(kMinLoopSamples));
  if (!(search.tol_geo > 0.0)) throw ConfigError("search.tol_geo must be positive");
  if (!(search.dedup_tol > 0.0)) throw ConfigError("search.dedup_tol must be positive");
  if (!(search.switch_tol > 0.0)) throw ConfigError("search.switch_tol must be positive");
  if (!(search.seed_noise >= 0.0)) throw ConfigError("search.seed_noise must be nonnegative");
  if (search.max_iters < 1) throw ConfigError("search.max_iters must be >= 1");
  if (search.newton_iters < 0) throw ConfigError("search.newton_iters must be >= 0");
  if (class_power < 1 || class_power > p - 1) throw ConfigError("search.class_power must lie in [1, p-1]");
  if (delta && !(*delta > 0.0 && *delta <= 1.0)) throw ConfigError("certificate.delta must lie in (0, 1]");
  if (expected_count && *expected_count < 0) throw ConfigError("checks.expected_count must be >= 0");
  if (out_dir.empty()) throw ConfigError("output.dir must not be empty");
  if (name.empty() || name.find('/') != std::string::npos) throw ConfigError("output.name must be a plain file stem");
}

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source) {
  const auto kv = parse_key_values(text, source);
  const auto& known = experiment_config_keys();
  for (const auto& [k, v] : kv) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw ConfigError(source + ": unknown key '" + k + "'");
    }
  }
  ExperimentConfig c;
  auto get = [&](const char* key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto v = get("manifold.n")) c.n = parse_number<int>(*v, "manifold.n");
  if (auto v = get("manifold.p")) c.p = parse_number<int>(*v, "manifold.p");
  if (auto v = get("metric.kind")) {
    try {
      c.metric = metric_kind_from_string(trim(*v));
    } catch (const Error& e) {
      throw ConfigError(std::string("metric.kind: ") + e.what());
    }
  }
  if (auto v = get("metric.alpha")) c.alpha = parse_number<double>(*v, "metric.alpha");
  if (auto v = get("sampling.grid")) c.grid = parse_number<int>(*v, "sampling.grid");
  if (auto v = get("search.seeds")) c.search.seeds = parse_number<int>(*v, "search.seeds");
  if (auto v = get("search.rng_seed")) c.search.rng_seed = parse_number<std::uint64_t>(*v, "search.rng_seed");
  if (auto v = get("search.N")) c.search.N = parse_number<int>(*v, "search.N");
  if (auto v = get("search.tol_geo")) c.search.tol_geo = parse_number<double>(*v, "search.tol_geo");
  if (auto v = get("search.max_iters")) c.search.max_iters = parse_number<int>(*v, "search.max_iters");
  if (auto v = get("search.class_power")) c.class_power = parse_number<int>(*v, "search.class_power");
  if (auto v = get("search.dedup_tol")) c.search.dedup_tol = parse_number<double>(*v, "search.dedup_tol");
  if (auto v = get("search.switch_tol")) c.search.switch_tol = parse_number<double>(*v, "search.switch_tol");
  if (auto v = get("search.newton_iters")) c.search.newton_iters = parse_number<int>(*v, "search.newton_iters");
  if (auto v = get("search.newton_from_seeds")) c.search.newton_from_seeds = parse_bool(*v, "search.newton_from_seeds");
  if (auto v = get("search.seed_noise")) c.search.seed_noise = parse_number<double>(*v, "search.seed_noise");
  if (auto v = get("analysis.poincare")) c.poincare = parse_bool(*v, "analysis.poincare");
  if (auto v = get("analysis.index_oracle")) c.index_oracle = parse_bool(*v, "analysis.index_oracle");
  if (auto v = get("analysis.simplicity")) c.simplicity = parse_bool(*v, "analysis.simplicity");
  if (auto v = get("certificate.delta")) {
    try {
      c.delta = to_double(parse_rational(*v));
    } catch (const PreconditionError& e) {
      throw ConfigError(std::string("certificate.delta: ") + e.what());
    }
  }
  if (auto v = get("checks.expected_count")) c.expected_count = parse_number<int>(*v, "checks.expected_count");
  if (auto v = get("output.dir")) c.out_dir = *v;
  if (auto v = get("output.name")) c.name = *v;
  if (auto v = get("output.svg")) c.svg = parse_bool(*v, "output.svg");
  if (auto v = get("output.loops")) c.loops = parse_bool(*v, "output.loops");
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_text_file(path), path);
}

NormalForm parse_normal_form(const std::string& text, const std::string& source) {
  std::map<std::string, std::string> kv;
  try {
    kv = parse_key_values(text, source);
  } catch (const ConfigError& e) {
    throw DataError(e.what());
  }
  static const std::vector<std::string> keys = {"p_minus", "p_zero", "p_plus", "q_minus", "q_zero",
                                                "q_plus",  "r_prime", "thetas", "alphas", "betas",
                                                "h_count", "i1",     "nu1",    "n"};
  for (const auto& [k, v] : kv) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw DataError(source + ": unknown key '" + k + "'");
  }
  if (!kv.count("n")) throw DataError(source + ": missing key 'n'");
  NormalForm nf;
  auto integer = [&](const char* key, int& out) {
    const auto it = kv.find(key);
    if (it == kv.end()) return;
    try {
      out = parse_number<int>(it->second, key);
    } catch (const ConfigError& e) {
      throw DataError(source + ": " + e.what());
    }
  };
  integer("p_minus", nf.p_minus);
  integer("p_zero", nf.p_zero);
  integer("p_plus", nf.p_plus);
  integer("q_minus", nf.q_minus);
  integer("q_zero", nf.q_zero);
  integer("q_plus", nf.q_plus);
  integer("r_prime", nf.r_prime);
  integer("h_count", nf.h_count);
  integer("i1", nf.i1);
  integer("nu1", nf.nu1);
  integer("n", nf.n);
  if (kv.count("thetas")) nf.thetas = parse_angle_list(kv["thetas"], "thetas");
  if (kv.count("alphas")) nf.alphas = parse_angle_list(kv["alphas"], "alphas");
  if (kv.count("betas")) nf.betas = parse_angle_list(kv["betas"], "betas");
  validate(nf);
  return nf;
}

NormalForm load_normal_form(const std::string& path) { return parse_normal_form(read_text_file(path), path); }

MorseData parse_morse_data(const std::string& text, const std::string& source) {
  MorseData md;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) { throw DataError(source + ":" + std::to_string(lineno) + ": " + msg); };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("label", 0) == 0 && line.find(',') != std::string::npos) continue;
    if (line.find(',') == std::string::npos) {
      const auto eq = line.find('=');
      if (eq == std::string::npos || trim(line.substr(0, eq)) != "p") fail("expected a data row or 'p = <order>'");
      try {
        md.p = parse_number<int>(line.substr(eq + 1), "p");
      } catch (const ConfigError& e) {
        fail(e.what());
      }
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(trim(cell));
    if (line.back() == ',') cols.emplace_back();
    if (cols.size() != 5) fail("expected 5 columns label,m,i,nu,kq_support");
    MorseEntry e;
    e.label = cols[0];
    try {
      e.m = parse_number<int>(cols[1], "m");
      e.index = parse_number<int>(cols[2], "i");
      e.nullity = parse_number<int>(cols[3], "nu");
    } catch (const ConfigError& err) {
      fail(err.what());
    }
    std::stringstream ks(cols[4]);
    std::string pair;
    while (std::getline(ks, pair, ';')) {
      pair = trim(pair);
      if (pair.empty()) continue;
      const auto colon = pair.find(':');
      if (colon == std::string::npos) fail("kq_support entries must be 'q:k'");
      int q = 0, k = 0;
      try {
        q = parse_number<int>(pair.substr(0, colon), "q");
        k = parse_number<int>(pair.substr(colon + 1), "k");
      } catch (const ConfigError& err) {
        fail(err.what());
      }
      if (!e.kq.emplace(q, k).second) fail("degree listed twice in kq_support");
    }
    md.entries.push_back(std::move(e));
  }
  md.validate();
  return md;
}

MorseData load_morse_data(const std::string& path) { return parse_morse_data(read_text_file(path), path); }

}  // namespace ncgeo
