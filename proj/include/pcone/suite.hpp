#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pcone/convexopt.hpp"

namespace pcone {

/// Verification-run configuration. Identical configs produce bit-identical
/// reports regardless of the worker-pool size.
struct SuiteConfig {
    std::uint64_t seed = 42;
    int n = 4;
    int trials = 100;
    std::vector<SchattenP> p_values = {SchattenP::one(), SchattenP::real(1.5),
                                       SchattenP::real(2.0), SchattenP::real(3.0),
                                       SchattenP::inf()};
    double tol = 1e-9;
    std::vector<std::string> suites; // empty or "all" expands to every suite
    bool trace = false;              // emit solver trace rows on standard error
};

struct SuiteSummary {
    long checks = 0;
    long failures = 0;
    bool all_pass() const { return failures == 0; }
};

const std::vector<std::string>& known_suites();

/// Runs the requested suites, writing one report line per check plus a final
/// summary line. format: "json" (JSON lines) or "csv".
SuiteSummary run_suite(const SuiteConfig& cfg, std::ostream& out,
                       const std::string& format = "json");

/// Worker-pool cap from PCONE_THREADS, defaulting to available parallelism.
int worker_count();

} // namespace pcone
