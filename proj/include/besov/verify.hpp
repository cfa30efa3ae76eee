#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "besov/io.hpp"

namespace besov {

struct SuiteOptions {
    int trials = -1;  ///< negative: suite default
    std::uint64_t seed = 1;
    int depth = -1;   ///< negative: suite default
    std::optional<BesovParams> params;
};

/// One PASS/FAIL line. Non-gating lines are reported but do not fail `verify`.
struct CriterionLine {
    std::string label;
    bool pass = false;
    std::string detail;
    bool gating = true;
    bool timing = false;  ///< wall-clock line, kept out of the JSON report so reports stay byte-identical
};

struct SuiteResult {
    std::string name;
    std::vector<CriterionLine> lines;
    json report;
    double seconds = 0.0;

    /// Every gating line passes.
    bool passed() const;
    /// Every line passes.
    bool all_lines_pass() const;
};

using NamedGrid = std::pair<std::string, GridPtr>;

/// Dyadic depths 1..max_dyadic_depth plus `random_count` random good grids
/// (depth 1-5, 2-4 children, ratios in (0.2, 0.8)).
std::vector<NamedGrid> haar_grid_corpus(std::uint64_t seed, int max_dyadic_depth = 8, int random_count = 20);

SuiteResult verify_haar(const SuiteOptions& options);          ///< orthonormality, zero mean, reconstruction
SuiteResult verify_dirac(const SuiteOptions& options);         ///< truncation equals per-cell averages
SuiteResult verify_estphi(const SuiteOptions& options);        ///< wavelet amplitude bounds
SuiteResult verify_equivalence(const SuiteOptions& options);   ///< norm chain, tightness, embedding
SuiteResult verify_tricks_suite(const SuiteOptions& options);  ///< sequence tricks
SuiteResult verify_holder(const SuiteOptions& options);        ///< Hölder-to-Souza
SuiteResult verify_transmute(const SuiteOptions& options);     ///< transmutation rules
SuiteResult verify_variation(const SuiteOptions& options);     ///< p-variation against enumeration
SuiteResult verify_domains(const SuiteOptions& options);       ///< regular intervals and indicator bounds
SuiteResult verify_multipliers(const SuiteOptions& options);   ///< multiplier bounds
SuiteResult verify_compose(const SuiteOptions& options);       ///< left composition

struct BenchResult {
    int depth = 12;
    int repeat = 5;
    std::vector<double> milliseconds;
    double median_ms = 0.0;
    json report;
};

/// build_haar + analyze + full norm report on a dyadic grid.
BenchResult bench_transform(int depth, int repeat, std::uint64_t seed = 1);

/// Suite names accepted by `run_suite`.
std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace besov
