#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "toravg/expression.hpp"

namespace toravg {

/// A parsed scenario file: the space block, named field definitions
/// (expressions; vector fields componentwise), and an ordered list of task
/// blocks.  Every referenced name must be defined before use and every
/// expression parses under the declared grammar at file-parse time.
struct ScenarioFile {
  struct Space {
    int d = 1;
    std::vector<double> lo, hi;
    int truncation = 8;
    int grid_points = 33;
    double safe_shrink = 0.1;
  };

  struct ScalarDef {
    std::string name;
    std::string text;
    Expression::Ptr expr;
  };

  struct VectorDef {
    std::string name;
    std::vector<std::string> angle_text, action_text;
    std::vector<Expression::Ptr> angle, action;
  };

  struct TaskDef {
    std::string kind;
    std::map<std::string, std::string> params;
    int line = 0;
  };

  Space space;
  std::vector<ScalarDef> scalars;
  std::vector<VectorDef> vectors;
  std::vector<TaskDef> tasks;
  std::string source_text;  // raw file content, hashed into the report

  const ScalarDef* find_scalar(const std::string& name) const;
  const VectorDef* find_vector(const std::string& name) const;

  TorusBox box() const;
  TorusBox safe_box() const;
};

ScenarioFile parse_scenario(const std::string& text);
ScenarioFile parse_scenario_file(const std::string& path);

struct RunOptions {
  std::uint64_t seed = 42;
  double tol_scale = 1.0;
};

struct RunOutcome {
  bool pass = false;
  std::string report_json;  // schema-versioned report, one entry per task
};

/// Executes the task blocks in order and emits the JSON report.  A task
/// failure is recorded in the report (and flips `pass`); only file-level
/// problems throw.
RunOutcome run_scenario(const ScenarioFile& file, const RunOptions& options = {});

/// Structural validation of a report against the published schema.
bool validate_report(const std::string& report_json);

/// The task kinds run_scenario understands, with one-line descriptions.
const std::vector<std::pair<std::string, std::string>>& task_kinds();

}  // namespace toravg
