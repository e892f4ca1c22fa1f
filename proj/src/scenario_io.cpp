#include "rispeec/scenario_io.hpp"

#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rispeec/constants.hpp"
#include "rispeec/errors.hpp"

namespace rispeec {

namespace {

using nlohmann::json;

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// `key` is the JSON member name, `label` the full path used in errors.
double require_number(const json& j, const std::string& key, const std::string& label) {
  if (!j.contains(key)) throw ConfigError(label + ": missing");
  if (!j[key].is_number()) throw ConfigError(label + ": must be a number");
  return j[key].get<double>();
}

double optional_number(const json& j, const std::string& key, const std::string& label,
                       double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(label + ": must be a number");
  return j[key].get<double>();
}

int optional_int(const json& j, const std::string& key, const std::string& label, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw ConfigError(label + ": must be an integer");
  return j[key].get<int>();
}

int require_int(const json& j, const std::string& key, const std::string& label) {
  if (!j.contains(key)) throw ConfigError(label + ": missing");
  if (!j[key].is_number_integer()) throw ConfigError(label + ": must be an integer");
  return j[key].get<int>();
}

Eigen::Vector3d require_vec3(const json& j, const std::string& key, const std::string& label) {
  if (!j.contains(key)) throw ConfigError(label + ": missing");
  const json& v = j[key];
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number())
    throw ConfigError(label + ": must be an array of 3 numbers");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

cplx optional_complex(const json& j, const std::string& key, const std::string& label,
                      cplx fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j[key];
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(label + ": must be [re, im]");
  return {v[0].get<double>(), v[1].get<double>()};
}

PortRole parse_role(const json& j, const std::string& key, const std::string& label) {
  if (!j.contains(key)) throw ConfigError(label + ": missing");
  if (!j[key].is_string()) throw ConfigError(label + ": must be a string");
  const std::string r = j[key].get<std::string>();
  if (r == "tx") return PortRole::Tx;
  if (r == "rx") return PortRole::Rx;
  if (r == "ris") return PortRole::Ris;
  throw ConfigError(label + ": must be one of tx|rx|ris");
}

json canonical_json(const ScenarioConfig& cfg) {
  json doc;
  doc["frequency_hz"] = cfg.scenario.frequency_hz;
  doc["wire_radius_m"] = cfg.scenario.wire_radius_m;
  doc["segments_per_dipole"] = cfg.scenario.segments_per_dipole;
  doc["zg_ohm"] = {cfg.zg.real(), cfg.zg.imag()};
  doc["zr_ohm"] = {cfg.zr.real(), cfg.zr.imag()};
  json dipoles = json::array();
  for (const Dipole& d : cfg.scenario.dipoles) {
    json jd;
    jd["center"] = {d.center.x(), d.center.y(), d.center.z()};
    jd["axis"] = {d.axis.x(), d.axis.y(), d.axis.z()};
    jd["length_m"] = d.length;
    jd["role"] = to_string(d.role);
    jd["port_index"] = d.port_index;
    dipoles.push_back(jd);
  }
  doc["dipoles"] = dipoles;
  return doc;
}

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text) {
  // A blank document behaves like an empty object so validation reports
  // missing keys by name.
  json doc;
  const bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
  if (blank) {
    doc = json::object();
  } else {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");

  ScenarioConfig cfg;
  cfg.scenario.frequency_hz = require_number(doc, "frequency_hz", "frequency_hz");
  if (!(cfg.scenario.frequency_hz > 0.0)) throw ConfigError("frequency_hz: must be > 0");
  const double lambda = speed_of_light / cfg.scenario.frequency_hz;

  cfg.scenario.wire_radius_m =
      optional_number(doc, "wire_radius_m", "wire_radius_m", lambda / 2000.0);
  cfg.scenario.segments_per_dipole =
      optional_int(doc, "segments_per_dipole", "segments_per_dipole", 11);
  cfg.zg = optional_complex(doc, "zg_ohm", "zg_ohm", {50.0, 0.0});
  cfg.zr = optional_complex(doc, "zr_ohm", "zr_ohm", {50.0, 0.0});

  int port = 0;
  if (doc.contains("dipoles")) {
    if (!doc["dipoles"].is_array()) throw ConfigError("dipoles: must be an array");
    for (size_t i = 0; i < doc["dipoles"].size(); ++i) {
      const std::string prefix = "dipoles[" + std::to_string(i) + "].";
      const json& jd = doc["dipoles"][i];
      if (!jd.is_object())
        throw ConfigError("dipoles[" + std::to_string(i) + "]: must be an object");
      Dipole d;
      d.center = require_vec3(jd, "center", prefix + "center");
      d.axis = require_vec3(jd, "axis", prefix + "axis");
      d.length = require_number(jd, "length_m", prefix + "length_m");
      d.role = parse_role(jd, "role", prefix + "role");
      d.port_index = port++;
      cfg.scenario.dipoles.push_back(d);
    }
  }

  if (doc.contains("ris_array")) {
    const json& ja = doc["ris_array"];
    if (!ja.is_object()) throw ConfigError("ris_array: must be an object");
    const Eigen::Vector3d center = require_vec3(ja, "center", "ris_array.center");
    const int rows = require_int(ja, "rows", "ris_array.rows");
    const int cols = require_int(ja, "cols", "ris_array.cols");
    const double dy = require_number(ja, "dy_m", "ris_array.dy_m");
    const double dz = require_number(ja, "dz_m", "ris_array.dz_m");
    const double len = require_number(ja, "element_length_m", "ris_array.element_length_m");
    if (rows < 1) throw ConfigError("ris_array.rows: must be >= 1");
    if (cols < 1) throw ConfigError("ris_array.cols: must be >= 1");
    // Row-major expansion: z-row outer, y-column inner.
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        Dipole d;
        d.center = center;
        d.center.y() += (c - 0.5 * (cols - 1)) * dy;
        d.center.z() += (r - 0.5 * (rows - 1)) * dz;
        d.axis = Eigen::Vector3d::UnitZ();
        d.length = len;
        d.role = PortRole::Ris;
        d.port_index = port++;
        cfg.scenario.dipoles.push_back(d);
      }
    }
  }

  int n_tx = 0, n_rx = 0;
  for (const Dipole& d : cfg.scenario.dipoles) {
    n_tx += d.role == PortRole::Tx;
    n_rx += d.role == PortRole::Rx;
  }
  if (n_tx != 1)
    throw ConfigError("dipoles: exactly one tx dipole required, found " + std::to_string(n_tx));
  if (n_rx != 1)
    throw ConfigError("dipoles: exactly one rx dipole required, found " + std::to_string(n_rx));

  cfg.scenario.validate();
  cfg.digest = fnv1a_hex(canonical_json(cfg).dump());
  return cfg;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

ScenarioConfig paper_scenario_config() {
  ScenarioConfig cfg;
  cfg.scenario = paper_scenario();
  cfg.digest = fnv1a_hex(canonical_json(cfg).dump());
  return cfg;
}

namespace {

void write_lines(const std::string& path, const std::string& header,
                 const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("output: cannot open " + path);
  out << header << "\n";
  for (const auto& l : lines) out << l << "\n";
}

std::string fmt_row(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

}  // namespace

void write_currents_csv(const std::string& path, const Eigen::VectorXcd& currents) {
  std::vector<std::string> lines;
  lines.reserve(currents.size());
  for (Eigen::Index i = 0; i < currents.size(); ++i)
    lines.push_back(fmt_row("%lld,%.17g,%.17g", static_cast<long long>(i), currents(i).real(),
                            currents(i).imag()));
  write_lines(path, "segment,re_amp,im_amp", lines);
}

void write_zmatrix_csv(const std::string& path, const Eigen::MatrixXcd& z) {
  std::vector<std::string> lines;
  lines.reserve(z.size());
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < z.cols(); ++j)
      lines.push_back(fmt_row("%lld,%lld,%.17g,%.17g", static_cast<long long>(i),
                              static_cast<long long>(j), z(i, j).real(), z(i, j).imag()));
  write_lines(path, "port_i,port_j,re_ohm,im_ohm", lines);
}

void write_loads_csv(const std::string& path, const Eigen::VectorXcd& loads) {
  std::vector<std::string> lines;
  lines.reserve(loads.size());
  for (Eigen::Index i = 0; i < loads.size(); ++i)
    lines.push_back(fmt_row("%lld,%.17g,%.17g", static_cast<long long>(i), loads(i).real(),
                            loads(i).imag()));
  write_lines(path, "ris_index,re_ohm,im_ohm", lines);
}

Eigen::VectorXcd read_loads_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("loads: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("ris_index,", 0) != 0)
    throw ConfigError("loads: missing ris_index,re_ohm,im_ohm header");
  std::vector<cplx> values;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    long long idx = 0;
    double re = 0.0, im = 0.0;
    if (std::sscanf(line.c_str(), "%lld,%lf,%lf", &idx, &re, &im) != 3)
      throw ConfigError("loads row " + std::to_string(row) + ": malformed line");
    if (idx != row)
      throw ConfigError("loads row " + std::to_string(row) + ": expected ris_index " +
                        std::to_string(row) + ", found " + std::to_string(idx));
    values.emplace_back(re, im);
    ++row;
  }
  Eigen::VectorXcd loads(values.size());
  for (size_t i = 0; i < values.size(); ++i) loads(i) = values[i];
  return loads;
}

void write_trace_csv(const std::string& path, const std::vector<TraceEntry>& trace) {
  std::vector<std::string> lines;
  lines.reserve(trace.size());
  for (const auto& t : trace)
    lines.push_back(
        fmt_row("%ld,%d,%d,%.17g", t.step, t.sweep, t.ris_index, t.objective));
  write_lines(path, "step,sweep,ris_index,objective", lines);
}

void write_pattern_csv(const std::string& path, const PatternCut& cut) {
  std::vector<std::string> lines;
  lines.reserve(cut.samples.size());
  for (const auto& s : cut.samples)
    lines.push_back(fmt_row("%.17g,%.17g", s.angle_deg, s.gain_db));
  write_lines(path, "angle_deg,gain_db", lines);
}

void write_matrix_entries_csv(const std::string& path, const Eigen::MatrixXcd& m) {
  std::vector<std::string> lines;
  lines.reserve(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      lines.push_back(fmt_row("%lld,%lld,%.17g,%.17g", static_cast<long long>(i),
                              static_cast<long long>(j), m(i, j).real(), m(i, j).imag()));
  write_lines(path, "row,col,re,im", lines);
}

std::string RunReport::to_json() const {
  json doc;
  doc["scenario_digest"] = scenario_digest;
  doc["frequency_hz"] = frequency_hz;
  doc["num_branches"] = num_branches;
  doc["num_nodes"] = num_nodes;
  if (objective_before >= 0.0) doc["objective_before"] = objective_before;
  if (objective_after >= 0.0) doc["objective_after"] = objective_after;
  if (sweeps_used > 0) doc["sweeps_used"] = sweeps_used;
  json jt = json::object();
  for (const auto& t : timings) jt[t.stage] = t.seconds;
  doc["wall_time_s"] = jt;
  return doc.dump(2);
}

}  // namespace rispeec
