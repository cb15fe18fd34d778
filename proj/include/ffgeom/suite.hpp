#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ffgeom::suite {

struct SuiteConfig {
    std::uint64_t seed = 1;
    /// Field orders above this are skipped.
    std::uint32_t max_q = 13;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string claim;
    bool passed = false;
    /// Asserted sub-checks and reported-only quantities.
    nlohmann::ordered_json details;
    double seconds = 0;     // wall clock, kept out of the report
    double budget = 0;      // seconds allowed
};

inline constexpr int criterion_count = 13;

CriterionResult run_criterion(int id, const SuiteConfig& cfg);
/// Runs every criterion in order. `progress` is called after each one.
std::vector<CriterionResult> run_suite(const SuiteConfig& cfg,
                                       const std::function<void(const CriterionResult&)>& progress = {});

/// Deterministic report: no timings.
nlohmann::ordered_json to_json(const SuiteConfig& cfg, const std::vector<CriterionResult>& results);
nlohmann::ordered_json timings_json(const std::vector<CriterionResult>& results);

}  // namespace ffgeom::suite
