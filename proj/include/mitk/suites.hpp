#pragma once

// Verification suites driven by `mitk verify`. Each suite appends check
// records to a report; the same functions back the acceptance tests.

#include "mitk/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mitk::suites {

enum class Suite { fiber, cutoff, integrals, tube, all };

Suite parse_suite(const std::string& name);
std::string suite_name(Suite s);

struct SuiteOptions {
  std::uint64_t seed = 0x5eed2024ULL;
  int grid = 2048;
  double relTol = 1e-6;     // quadrature tolerance for deterministic integrals
  double jetRelTol = 1e-3;  // tolerance of the jet-density limits
  std::uint64_t mcSamples = 16'777'216;  // I_2 Monte Carlo budget
  bool parallel = true;

  int nakanoInstances = 1000;
  int identityInstances = 200;
  int membershipInstances = 500;
  int rtInstances = 100;

  std::vector<double> cutoffDelta{0.1, 0.5, 1.0};
  std::vector<double> cutoffEps{0.002, 0.005};
  std::vector<double> cutoffT{-5.0, -20.0};

  /// Overrides from a parameter document; unknown keys are rejected.
  static SuiteOptions from_json(const io::json& j);
  io::json to_json() const;
};

void run_integrals(const SuiteOptions& opt, report::VerificationReport& out);
void run_tube(const SuiteOptions& opt, report::VerificationReport& out);
void run_fiber(const SuiteOptions& opt, report::VerificationReport& out);
void run_cutoff(const SuiteOptions& opt, report::VerificationReport& out);

/// Runs the selected suites into a fresh report (conventions, reproducibility
/// block and timestamp filled in).
report::VerificationReport run(Suite suite, const SuiteOptions& opt);

}  // namespace mitk::suites
