#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rispeec/errors.hpp"
#include "rispeec/pipeline.hpp"
#include "rispeec/scenario_io.hpp"

using namespace rispeec;

#ifndef RISPEEC_SOURCE_DIR
#define RISPEEC_SOURCE_DIR "."
#endif

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) {
  return std::string("io_test_") + name;
}

const char* kSmallScenario = R"({
  "frequency_hz": 28e9,
  "segments_per_dipole": 5,
  "dipoles": [
    {"center": [0.2, 0, 0], "axis": [0, 0, 1], "length_m": 0.0053534367500000001, "role": "tx"},
    {"center": [0, 0.2, 0], "axis": [0, 0, 1], "length_m": 0.0053534367500000001, "role": "rx"},
    {"center": [0, 0, 0], "axis": [0, 0, 1], "length_m": 0.0053534367500000001, "role": "ris"}
  ]
})";

}  // namespace

TEST_CASE("parse_scenario: bundled paper scenario equals paper_scenario() field-for-field") {
  const ScenarioConfig cfg =
      parse_scenario_file(std::string(RISPEEC_SOURCE_DIR) + "/scenarios/paper.scenario");
  const Scenario ref = paper_scenario();

  CHECK(cfg.scenario.frequency_hz == ref.frequency_hz);
  CHECK(cfg.scenario.wire_radius_m == ref.wire_radius_m);
  CHECK(cfg.scenario.segments_per_dipole == ref.segments_per_dipole);
  REQUIRE(cfg.scenario.dipoles.size() == ref.dipoles.size());
  for (size_t i = 0; i < ref.dipoles.size(); ++i) {
    const Dipole& a = cfg.scenario.dipoles[i];
    const Dipole& b = ref.dipoles[i];
    CHECK(a.center == b.center);
    CHECK(a.axis == b.axis);
    CHECK(a.length == b.length);
    CHECK(a.role == b.role);
    CHECK(a.port_index == b.port_index);
  }
  CHECK(cfg.zg == cplx(50.0, 0.0));
  CHECK(cfg.zr == cplx(50.0, 0.0));
}

TEST_CASE("parse_scenario: empty document reports the missing key by name") {
  CHECK_THROWS_WITH_AS(parse_scenario_text(""), "frequency_hz: missing", ConfigError);
  CHECK_THROWS_WITH_AS(parse_scenario_text("  \n\t "), "frequency_hz: missing", ConfigError);
}

TEST_CASE("parse_scenario: ris_array generator expansion") {
  std::string text = R"({
    "frequency_hz": 28e9,
    "dipoles": [
      {"center": [4, 0, 3], "axis": [0, 0, 1], "length_m": 0.005, "role": "tx"},
      {"center": [2, 3.46, 1], "axis": [0, 0, 1], "length_m": 0.005, "role": "rx"}
    ],
    "ris_array": {"center": [0, 0, 2], "rows": 2, "cols": 32,
                  "dy_m": 0.0013383591875, "dz_m": 0.008030155125,
                  "element_length_m": 0.00535343675}
  })";
  const ScenarioConfig cfg = parse_scenario_text(text);
  int n_ris = 0;
  for (const Dipole& d : cfg.scenario.dipoles) n_ris += d.role == PortRole::Ris;
  CHECK(n_ris == 64);
  CHECK(cfg.scenario.dipoles.size() == 66);
  // row-major: z-row outer, y-column inner
  const Dipole& first = cfg.scenario.dipoles[2];
  const Dipole& second = cfg.scenario.dipoles[3];
  CHECK(second.center.y() > first.center.y());
  CHECK(second.center.z() == first.center.z());
}

TEST_CASE("parse_scenario: errors name the offending key path") {
  CHECK_THROWS_WITH_AS(parse_scenario_text(R"({"frequency_hz": 28e9,
      "dipoles": [{"axis": [0,0,1], "length_m": 1, "role": "tx"}]})"),
                       "dipoles[0].center: missing", ConfigError);
  CHECK_THROWS_WITH_AS(parse_scenario_text(R"({"frequency_hz": 28e9,
      "dipoles": [{"center": [0,0,0], "axis": [0,0,1], "length_m": 1, "role": "txx"}]})"),
                       "dipoles[0].role: must be one of tx|rx|ris", ConfigError);
  CHECK_THROWS_AS(parse_scenario_text(R"({"frequency_hz": -1})"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text(R"(not json)"), ConfigError);

  // wrong Tx/Rx multiplicity
  CHECK_THROWS_WITH_AS(parse_scenario_text(R"({"frequency_hz": 28e9, "dipoles": [
      {"center": [0,0,0], "axis": [0,0,1], "length_m": 0.005, "role": "rx"}]})"),
                       "dipoles: exactly one tx dipole required, found 0", ConfigError);

  // even segment count propagates the geometry error message
  std::string even = R"({"frequency_hz": 28e9, "segments_per_dipole": 4, "dipoles": [
      {"center": [0,0,0], "axis": [0,0,1], "length_m": 0.005, "role": "tx"},
      {"center": [0.1,0,0], "axis": [0,0,1], "length_m": 0.005, "role": "rx"}]})";
  CHECK_THROWS_WITH_AS(parse_scenario_text(even), "segments_per_dipole must be odd", ConfigError);
}

TEST_CASE("parse_scenario: digest is stable and content-sensitive") {
  const ScenarioConfig a = parse_scenario_text(kSmallScenario);
  const ScenarioConfig b = parse_scenario_text(kSmallScenario);
  CHECK(a.digest == b.digest);
  CHECK(a.digest.size() == 16);

  std::string changed(kSmallScenario);
  const auto pos = changed.find("0.2");
  changed.replace(pos, 3, "0.3");
  CHECK(parse_scenario_text(changed).digest != a.digest);
}

TEST_CASE("loads CSV: write/read round-trip is exact") {
  Eigen::VectorXcd loads(3);
  loads << cplx(0.0, -137.25), cplx(0.0, 0.125), cplx(0.0, 2208.7111294551149);
  const std::string path = temp_path("loads.csv");
  write_loads_csv(path, loads);
  const Eigen::VectorXcd back = read_loads_csv(path);
  REQUIRE(back.size() == 3);
  CHECK(back == loads);
  std::remove(path.c_str());
}

TEST_CASE("loads CSV: malformed rows are reported by row number") {
  const std::string path = temp_path("bad_loads.csv");
  {
    std::ofstream out(path);
    out << "ris_index,re_ohm,im_ohm\n0,0,1\nbroken line\n";
  }
  CHECK_THROWS_WITH_AS(read_loads_csv(path), "loads row 1: malformed line", ConfigError);
  std::remove(path.c_str());

  {
    std::ofstream out(path);
    out << "ris_index,re_ohm,im_ohm\n1,0,1\n";
  }
  CHECK_THROWS_AS(read_loads_csv(path), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("CSV writers: deterministic bytes across re-runs") {
  Eigen::MatrixXcd z(2, 2);
  z << cplx(73.2, 42.1), cplx(0.3, -0.2), cplx(0.3, -0.2), cplx(80.0, 1e-17);
  const std::string p1 = temp_path("z1.csv"), p2 = temp_path("z2.csv");
  write_zmatrix_csv(p1, z);
  write_zmatrix_csv(p2, z);
  CHECK(slurp(p1) == slurp(p2));
  const std::string content = slurp(p1);
  CHECK(content.rfind("port_i,port_j,re_ohm,im_ohm\n", 0) == 0);
  int lines = 0;
  for (char c : content) lines += c == '\n';
  CHECK(lines == 5);  // header + 4 entries
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("pattern CSV: header and normalization") {
  PatternCut cut;
  cut.plane = CutPlane::Phi;
  cut.samples = {{0.0, {}, -3.1}, {1.0, {}, 0.0}, {2.0, {}, -11.5}};
  const std::string path = temp_path("pattern.csv");
  write_pattern_csv(path, cut);
  const std::string content = slurp(path);
  CHECK(content == "angle_deg,gain_db\n0,-3.1000000000000001\n1,0\n2,-11.5\n");
  std::remove(path.c_str());
}

TEST_CASE("RunReport: JSON serialization carries the run facts") {
  RunReport r;
  r.scenario_digest = "00ff00ff00ff00ff";
  r.frequency_hz = 28e9;
  r.num_branches = 726;
  r.num_nodes = 792;
  r.objective_before = 1.0e-9;
  r.objective_after = 2.0e-9;
  r.sweeps_used = 7;
  r.timings.push_back({"elements", 1.25});
  const std::string json = r.to_json();
  CHECK(json.find("\"scenario_digest\": \"00ff00ff00ff00ff\"") != std::string::npos);
  CHECK(json.find("\"num_branches\": 726") != std::string::npos);
  CHECK(json.find("\"objective_after\"") != std::string::npos);
  CHECK(json.find("\"elements\": 1.25") != std::string::npos);
}

TEST_CASE("round-trip: optimized loads reproduce the reported objective through the pipeline") {
  // tiny scenario so the full chain stays fast
  const ScenarioConfig cfg = parse_scenario_text(kSmallScenario);
  const SimulationContext ctx = build_context(cfg);
  const PortNetwork net = extract_zsys(ctx.pe, ctx.mesh);

  OptParams params;
  params.zg = cfg.zg;
  params.zr = cfg.zr;
  const OptResult res = optimize(net, params);

  const std::string path = temp_path("roundtrip_loads.csv");
  write_loads_csv(path, res.loads);
  const Eigen::VectorXcd back = read_loads_csv(path);
  std::remove(path.c_str());

  OptState st = partition(net, cfg.zg, cfg.zr, back);
  CHECK(std::norm(st.h) == doctest::Approx(res.objective).epsilon(1e-10));
}
