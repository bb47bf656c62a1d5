#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pqtll/params.hpp"

namespace pqtll {

enum class Task { Winding, Gaps, Boundary, OBC, MCD, Verify };

std::string_view task_name(Task t);

struct SweepAxis {
  Axis axis = Axis::JYI;
  double min = 0.0, max = 1.0;
  int count = 2;
  double value(int i) const { return count == 1 ? min : min + (max - min) * i / (count - 1); }
};

struct SweepConfig {
  ModelParams base;
  std::vector<SweepAxis> axes;  // 0, 1 or 2; empty means a single point
  Task task = Task::Winding;
  int n_k = 2048;        // winding grid
  int gap_n_k = 256;
  int n_cells = 100;
  int n_e = 25;
  int mcd_m = 20;
  int mcd_n_k = 512;
  int samples = 200;     // boundary task: samples fed to the closing search
  double gap_tol = 0.0;  // 0: half the bulk gap
  double edge_tol = 0.6;
  int workers = 1;
  std::string out;
  std::string summary;

  void validate() const;
};

/// "pi:0.5" -> 0.5 pi; plain numbers otherwise. Throws Config on junk.
double parse_number(std::string_view text);

/// key = value lines, '#' comments. Errors carry "<source>:<line>:".
SweepConfig parse_config(std::istream& in, const std::string& source = "<config>");
SweepConfig load_config(const std::string& path);
/// Applies one "key=value" override.
void apply_setting(SweepConfig& cfg, std::string_view assignment, const std::string& where = "--set");
void apply_setting(SweepConfig& cfg, std::string_view key, std::string_view value, const std::string& where);

struct SweepRecord {
  std::vector<double> coords;
  std::vector<double> values;
  std::string status = "ok";
};

struct SweepOutput {
  std::vector<std::string> header;  // axis names, task fields, status
  std::vector<SweepRecord> records; // row-major over axes, axis1 slowest
  nlohmann::json summary;
};

std::vector<std::string> task_fields(Task t);

/// One record per grid point; failures are confined to their record.
SweepOutput run_sweep(const SweepConfig& cfg);

/// Status string for a failed point: gapless, unresolved or error:<kind>.
std::string status_for_error(const std::exception& e);

void write_csv(const SweepOutput& out, std::ostream& os);
std::string format_value(double x);

}  // namespace pqtll
