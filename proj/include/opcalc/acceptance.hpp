#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace opcalc::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double measured = 0.0;   // the headline number compared against `threshold`
    double threshold = 0.0;
    std::string detail;  // deterministic for a fixed seed
    double seconds = 0.0;
    std::string timing;  // wall-clock notes, kept out of `detail`
};

struct Options {
    std::uint64_t seed = 20240601;
    /// Criteria to run (1..10); empty runs all.
    std::vector<int> only;
};

/// Runs the criteria in order. Each one catches its own exceptions and reports them as failures.
std::vector<CriterionResult> run(const Options& opts = {});

/// "[PASS] A1 tau reproduction: measured ... threshold ... | detail; timing [1.2 s]"
std::string format_line(const CriterionResult& r);

}  // namespace opcalc::acceptance
