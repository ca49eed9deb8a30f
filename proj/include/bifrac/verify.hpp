#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bifrac {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;   // extremal measured deviation or documented constant
    double tolerance = 0.0;
    std::string info;        // optional context: recorded constants, side measurements
};

struct VerifyConfig {
    int N = 64;
    std::uint64_t seed = 20250814;
    std::string only;  // substring filter on check names; empty runs everything
};

// Names of all registered checks, in execution order.
std::vector<std::string> verify_check_names();

// Runs the registered cross-checks. Each check derives its RNG stream from
// (seed, check name), so a filtered subset reproduces the full run's values.
std::vector<CheckResult> run_verify(const VerifyConfig& cfg);

// Byte-deterministic JSON report.
std::string verify_report_json(const VerifyConfig& cfg, const std::vector<CheckResult>& results);

}  // namespace bifrac
