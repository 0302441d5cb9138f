#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nrcdt/classify.hpp"
#include "nrcdt/datagen.hpp"

namespace nrcdt::experiment {

// Flat key = value config with [dataset] / [discretization] / [run]
// sections; parse(to_text()) round-trips losslessly.
struct ExperimentConfig {
    enum class Source { templates, idx };

    // [dataset]
    datagen::DatasetSpec dataset;
    Source source = Source::templates;
    std::string idx_images;
    std::string idx_labels;
    std::size_t idx_per_class = 50;
    std::size_t idx_pad_to = 128;

    // [discretization]
    std::vector<std::size_t> angle_sweep = {128};
    std::size_t radii = 850;
    std::size_t points = 64;

    // [run]
    std::vector<FeatureTag> representations = {FeatureTag::mNRCDT, FeatureTag::aNRCDT};
    std::string classifier = "nt";  // nt | knn:<k>:<train_per_class> | probe
    classify::Metric metric = classify::Metric::l2;
    std::size_t repetitions = 1;
    std::uint64_t seed = 0;
    std::string out_dir = "results";

    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig parse_file(const std::string& path);
    std::string to_text() const;
    std::uint64_t hash() const;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

// CSV with '.' decimals and LF line endings, schema-stable across runs.
void write_csv(const Table& table, const std::string& path);
Table read_csv(const std::string& path);

// Binary PGM (P5, maxval 255); values must lie in [0, 1]. The comment line
// carries the seed and config hash.
void write_pgm(const std::vector<std::vector<double>>& matrix, const std::string& path,
               std::uint64_t seed, std::uint64_t config_hash);
Image read_pgm(const std::string& path);

// Runs fn(0..n-1) on up to `threads` workers; callers write results into
// per-index slots so the schedule cannot affect the outcome.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

std::vector<FeatureVector> extract_all(const std::vector<Image>& images, FeatureTag tag,
                                       const classify::ExtractConfig& config, unsigned threads);

struct RunCell {
    std::size_t angles = 0;
    FeatureTag tag = FeatureTag::mNRCDT;
    double accuracy_mean = 0.0;
    double accuracy_std = 0.0;
};

struct RunResult {
    std::vector<RunCell> cells;
    Table table;
};

// Full protocol: generate the dataset, extract each representation, classify
// against the clean templates (or k-NN / probe), aggregate over repetitions.
// One table row per (angle count, representation).
RunResult run_experiment(const ExperimentConfig& config, unsigned threads = 1);

struct PhaseResult {
    std::vector<int> strengths;  // columns
    std::vector<int> counts;     // rows
    // accuracy[tag_index][row][col]
    std::vector<std::vector<std::vector<double>>> accuracy;
    Table table;
};

// Accuracy heatmap over a (salt strength x component count) grid. All cells
// share per-sample seeds, so the zero-count column reproduces the clean run.
PhaseResult run_phase_transition(const ExperimentConfig& config, const std::vector<int>& strengths,
                                 const std::vector<int>& counts, unsigned threads = 1);

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelftestOptions {
    bool quick = true;
    // Test fixture: disables the per-angle spread guard so the normalization
    // suite must report a failure.
    bool inject_std_guard_fault = false;
};

// Reduced-size invariant suites: isometry, contraction, adjointness,
// normalization guards, perturbation bounds, determinism.
std::vector<SuiteResult> selftest(const SelftestOptions& options);

}  // namespace nrcdt::experiment
