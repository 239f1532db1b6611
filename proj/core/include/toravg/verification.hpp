#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toravg/torus_box.hpp"

namespace toravg {

/// One named numerical check: `pass` is `value < tol` unless a check is
/// exact, in which case tol is 0 and pass means value == 0.
struct CheckResult {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool pass = false;
  double elapsed_ms = 0.0;
};

// Property suites at desk scale (d in {1, 2}, K = 8, N = 33 unless stated).
// `count` <= 0 selects each suite's default; `tol_scale` multiplies every
// tolerance uniformly.

SuiteResult run_averaging_suite(std::uint64_t seed, int count = 0, double tol_scale = 1.0);
SuiteResult run_exactness_suite(std::uint64_t seed, int count = 0, double tol_scale = 1.0);
SuiteResult run_decomposition_suite(std::uint64_t seed, int count = 0, double tol_scale = 1.0);
SuiteResult run_weinstein_suite(std::uint64_t seed, int count = 0, double tol_scale = 1.0);
SuiteResult run_periods_suite(std::uint64_t seed, int count = 0, double tol_scale = 1.0);
SuiteResult run_flow_suite(std::uint64_t seed, int count = 0, double tol_scale = 1.0);
SuiteResult run_normal_form_suite(std::uint64_t seed, int count = 0, double tol_scale = 1.0);
SuiteResult run_parser_fuzz_suite(std::uint64_t seed, int count = 0, double tol_scale = 1.0);

const std::vector<std::string>& suite_names();
SuiteResult run_suite_by_name(const std::string& name, std::uint64_t seed,
                              int count = 0, double tol_scale = 1.0);

/// The default desk-scale phase space used by the suites.
TorusBox default_suite_box(int dim);

}  // namespace toravg
