#include "ncgeo/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "ncgeo/errors.hpp"

namespace ncgeo {

namespace {

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string record_object(const RecordFields& r, const std::string& pad) {
  std::ostringstream o;
  o << pad << "{\n";
  o << pad << "  \"length\": " << format_double(r.length) << ",\n";
  o << pad << "  \"energy\": " << format_double(r.energy) << ",\n";
  o << pad << "  \"index\": " << r.index << ",\n";
  o << pad << "  \"nullity\": " << r.nullity << ",\n";
  o << pad << "  \"residual\": " << format_double(r.residual) << ",\n";
  o << pad << "  \"simple\": " << (r.simple ? "true" : "false") << ",\n";
  o << pad << "  \"class_power\": " << r.class_power << ",\n";
  o << pad << "  \"eigenvalues\": [";
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    if (i) o << ", ";
    o << "[" << format_double(r.eigenvalues[i].real()) << ", " << format_double(r.eigenvalues[i].imag()) << "]";
  }
  o << "]\n" << pad << "}";
  return o.str();
}

std::string records_block(const std::vector<RecordFields>& records, const std::string& pad) {
  if (records.empty()) return "[]";
  std::ostringstream o;
  o << "[\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    o << record_object(records[i], pad + "  ") << (i + 1 < records.size() ? ",\n" : "\n");
  }
  o << pad << "]";
  return o.str();
}

std::string optional_number(const std::optional<double>& v) { return v ? format_double(*v) : "null"; }

std::string counting_body(const CountingReport& c, const std::string& pad) {
  std::ostringstream o;
  o << "{\n";
  o << pad << "  \"N\": " << c.N << ",\n";
  o << pad << "  \"bound_c1\": " << format_double(c.bound_c1) << ",\n";
  o << pad << "  \"bound_c2\": " << format_double(c.bound_c2) << ",\n";
  o << pad << "  \"branch\": " << quote(c.branch) << ",\n";
  o << pad << "  \"thm3_count\": " << (c.thm3_count ? std::to_string(*c.thm3_count) : "null") << ",\n";
  o << pad << "  \"delta\": " << (c.exact ? quote(to_string(c.delta_exact)) : format_double(c.delta)) << ",\n";
  o << pad << "  \"lambda\": " << (c.exact ? quote(to_string(c.lambda_exact)) : format_double(c.lambda)) << ",\n";
  o << pad << "  \"x\": " << format_double(c.x) << ",\n";
  o << pad << "  \"x_exact\": " << (c.x_exact ? quote(to_string(*c.x_exact)) : "null") << ",\n";
  o << pad << "  \"bound_c2_over_pi\": " << (c.bound_c2_over_pi ? quote(to_string(*c.bound_c2_over_pi)) : "null")
    << ",\n";
  o << pad << "  \"closed_form_c2\": " << format_double(c.closed_form_c2) << ",\n";
  o << pad << "  \"branch_within_closed_form\": " << (c.branch_within_closed_form ? "true" : "false") << ",\n";
  if (c.rho) o << pad << "  \"rho\": " << format_double(*c.rho) << ",\n";
  o << pad << "  \"hypotheses\": [";
  for (std::size_t i = 0; i < c.hypotheses.size(); ++i) o << (i ? ", " : "") << quote(c.hypotheses[i]);
  o << "]\n" << pad << "}";
  return o.str();
}

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw DataError(std::string("record field '") + key + "' missing");
  const auto& v = j.at(key);
  if (v.is_null()) return std::nan("");
  if (!v.is_number()) throw DataError(std::string("record field '") + key + "' is not a number");
  return v.get<double>();
}

int require_int(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw DataError(std::string("record field '") + key + "' must be an integer");
  }
  return j.at(key).get<int>();
}

}  // namespace

RecordFields RecordFields::from(const GeodesicRecord& r) {
  RecordFields f;
  f.length = r.length;
  f.energy = r.energy;
  f.index = r.index;
  f.nullity = r.nullity;
  f.residual = r.residual;
  f.simple = r.simple;
  f.class_power = r.class_power;
  f.eigenvalues = r.eigenvalues;
  return f;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt("%.17g", v);
}

std::string records_json(const std::vector<RecordFields>& records) { return records_block(records, "") + "\n"; }

std::string report_json(const ReportBundle& b) {
  std::ostringstream o;
  o << "{\n";
  o << "  \"metric\": " << quote(b.metric_id) << ",\n";
  o << "  \"manifold\": {\"n\": " << b.n << ", \"p\": " << b.p << "},\n";
  o << "  \"class_power\": " << b.class_power << ",\n";
  o << "  \"lambda\": " << format_double(b.lambda) << ",\n";
  o << "  \"delta\": " << optional_number(b.delta) << ",\n";
  o << "  \"rng_seed\": " << b.rng_seed << ",\n";
  o << "  \"seeds_run\": " << b.seeds_run << ",\n";
  o << "  \"seeds_converged\": " << b.seeds_converged << ",\n";
  o << "  \"partial\": " << (b.partial ? "true" : "false") << ",\n";
  if (!b.error.empty()) o << "  \"error\": " << quote(b.error) << ",\n";
  o << "  \"geodesics\": " << records_block(b.records, "  ") << ",\n";
  o << "  \"checks\": [";
  for (std::size_t i = 0; i < b.checks.size(); ++i) {
    const auto& c = b.checks[i];
    o << (i ? ",\n" : "\n") << "    {\"name\": " << quote(c.name) << ", \"pass\": " << (c.pass ? "true" : "false")
      << ", \"detail\": " << quote(c.detail) << "}";
  }
  o << (b.checks.empty() ? "]" : "\n  ]");
  if (b.counting) o << ",\n  \"counting\": " << counting_body(*b.counting, "  ");
  if (!b.timestamp.empty()) o << ",\n  \"timestamp\": " << quote(b.timestamp);
  o << "\n}\n";
  return o.str();
}

std::string counting_report_json(const CountingReport& rep) { return counting_body(rep, "") + "\n"; }

std::vector<RecordFields> parse_records_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  const nlohmann::json* arr = &doc;
  if (doc.is_object()) {
    if (!doc.contains("geodesics")) throw DataError("report has no 'geodesics' array");
    arr = &doc.at("geodesics");
  }
  if (!arr->is_array()) throw DataError("geodesic records must be a JSON array");
  static const std::vector<std::string> fields = {"length",   "energy", "index",       "nullity",
                                                  "residual", "simple", "class_power", "eigenvalues"};
  std::vector<RecordFields> out;
  for (const auto& j : *arr) {
    if (!j.is_object()) throw DataError("geodesic record must be an object");
    for (const auto& [k, v] : j.items()) {
      if (std::find(fields.begin(), fields.end(), k) == fields.end()) throw DataError("unexpected record field '" + k + "'");
    }
    RecordFields r;
    r.length = require_number(j, "length");
    r.energy = require_number(j, "energy");
    r.index = require_int(j, "index");
    r.nullity = require_int(j, "nullity");
    r.residual = require_number(j, "residual");
    if (!j.contains("simple") || !j.at("simple").is_boolean()) throw DataError("record field 'simple' must be boolean");
    r.simple = j.at("simple").get<bool>();
    r.class_power = require_int(j, "class_power");
    if (!j.contains("eigenvalues") || !j.at("eigenvalues").is_array()) {
      throw DataError("record field 'eigenvalues' must be an array");
    }
    for (const auto& z : j.at("eigenvalues")) {
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw DataError("eigenvalues must be [re, im] pairs");
      }
      r.eigenvalues.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string records_csv(const std::vector<RecordFields>& records) {
  std::ostringstream o;
  o << "length,energy,index,nullity,residual,simple,class_power,eigenvalues\n";
  for (const auto& r : records) {
    o << format_double(r.length) << ',' << format_double(r.energy) << ',' << r.index << ',' << r.nullity << ','
      << format_double(r.residual) << ',' << (r.simple ? "true" : "false") << ',' << r.class_power << ',';
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      if (i) o << ';';
      o << format_double(r.eigenvalues[i].real()) << ':' << format_double(r.eigenvalues[i].imag());
    }
    o << '\n';
  }
  return o.str();
}

std::string loop_csv(const DiscreteLoop& g) {
  std::ostringstream o;
  for (int i = 0; i < g.samples(); ++i) {
    for (int j = 0; j < g.ambient_dim(); ++j) o << (j ? "," : "") << format_double(g.points(j, i));
    o << '\n';
  }
  return o.str();
}

std::string svg_length_spectrum(const std::vector<RecordFields>& records,
                                const std::vector<std::pair<std::string, double>>& references) {
  const double W = 480, H = 320, left = 50, bottom = 40, top = 20;
  double vmax = 1e-9;
  for (const auto& r : records) vmax = std::max(vmax, r.length);
  for (const auto& [name, v] : references) vmax = std::max(vmax, v);
  vmax *= 1.1;
  auto ypos = [&](double v) { return H - bottom - (H - bottom - top) * v / vmax; };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - 10 << "\" y2=\"" << H - bottom
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
    << "\" stroke=\"black\"/>\n";
  const double slot = records.empty() ? 0.0 : (W - left - 20) / static_cast<double>(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double x = left + 10 + slot * static_cast<double>(i);
    const double y = ypos(records[i].length);
    o << "<rect x=\"" << fmt("%.2f", x) << "\" y=\"" << fmt("%.2f", y) << "\" width=\"" << fmt("%.2f", slot * 0.6)
      << "\" height=\"" << fmt("%.2f", H - bottom - y) << "\" fill=\"steelblue\"/>\n";
    o << "<text x=\"" << fmt("%.2f", x) << "\" y=\"" << fmt("%.2f", y - 4) << "\" font-size=\"10\">"
      << fmt("%.6f", records[i].length) << "</text>\n";
  }
  for (const auto& [name, v] : references) {
    const double y = ypos(v);
    o << "<line x1=\"" << left << "\" y1=\"" << fmt("%.2f", y) << "\" x2=\"" << W - 10 << "\" y2=\"" << fmt("%.2f", y)
      << "\" stroke=\"firebrick\" stroke-dasharray=\"4 3\"/>\n";
    o << "<text x=\"" << W - 120 << "\" y=\"" << fmt("%.2f", y - 3) << "\" font-size=\"10\" fill=\"firebrick\">" << name
      << "</text>\n";
  }
  o << "<text x=\"" << left << "\" y=\"" << H - 12 << "\" font-size=\"12\">length spectrum</text>\n";
  o << "</svg>\n";
  return o.str();
}

std::string svg_eigenvalues(const std::vector<RecordFields>& records) {
  const double S = 360, c = S / 2, R = 140;
  static const char* colours[] = {"steelblue", "darkorange", "seagreen", "firebrick", "purple", "saddlebrown"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << S << "\" height=\"" << S << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<circle cx=\"" << c << "\" cy=\"" << c << "\" r=\"" << R << "\" fill=\"none\" stroke=\"gray\"/>\n";
  o << "<line x1=\"10\" y1=\"" << c << "\" x2=\"" << S - 10 << "\" y2=\"" << c << "\" stroke=\"lightgray\"/>\n";
  o << "<line x1=\"" << c << "\" y1=\"10\" x2=\"" << c << "\" y2=\"" << S - 10 << "\" stroke=\"lightgray\"/>\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (const auto& z : records[i].eigenvalues) {
      const double x = c + R * std::clamp(z.real(), -1.2, 1.2);
      const double y = c - R * std::clamp(z.imag(), -1.2, 1.2);
      o << "<circle cx=\"" << fmt("%.2f", x) << "\" cy=\"" << fmt("%.2f", y) << "\" r=\"4\" fill=\""
        << colours[i % 6] << "\" fill-opacity=\"0.7\"/>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace ncgeo
