#pragma once

// Scenario configuration parsing and result serialization. The config is a
// JSON document; every parse error names the offending key. Complex values
// are serialized as [re, im] pairs in configs and as two real columns in
// CSVs. All CSV floats are written with %.17g so outputs round-trip and
// re-runs are bit-identical.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rispeec/farfield.hpp"
#include "rispeec/geometry.hpp"
#include "rispeec/ris_opt.hpp"

namespace rispeec {

struct ScenarioConfig {
  Scenario scenario;
  cplx zg{50.0, 0.0};
  cplx zr{50.0, 0.0};
  std::string digest;  // FNV-1a hash of the canonicalized config
};

ScenarioConfig parse_scenario_text(const std::string& text);
ScenarioConfig parse_scenario_file(const std::string& path);

/// The bundled paper scenario as a config (digest included).
ScenarioConfig paper_scenario_config();

void write_currents_csv(const std::string& path, const Eigen::VectorXcd& currents);
void write_zmatrix_csv(const std::string& path, const Eigen::MatrixXcd& z);
void write_loads_csv(const std::string& path, const Eigen::VectorXcd& loads);
Eigen::VectorXcd read_loads_csv(const std::string& path);
void write_trace_csv(const std::string& path, const std::vector<TraceEntry>& trace);
void write_pattern_csv(const std::string& path, const PatternCut& cut);
/// Debug dump of a dense complex matrix as row,col,re,im.
void write_matrix_entries_csv(const std::string& path, const Eigen::MatrixXcd& m);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunReport {
  std::string scenario_digest;
  double frequency_hz = 0.0;
  int num_branches = 0;
  int num_nodes = 0;
  double objective_before = -1.0;  // < 0 when not applicable
  double objective_after = -1.0;
  int sweeps_used = 0;
  std::vector<StageTiming> timings;

  std::string to_json() const;
};

}  // namespace rispeec
