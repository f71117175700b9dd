#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sailkit/harness/config.hpp"
#include "sailkit/harness/manifest.hpp"

namespace sailkit {

// --- surrogate-assisted hill-climber study (two surrogates, paired
// training sets, fixed equidistant starts) ---

struct Fig5Row {
    std::string model; // "gp" | "bann"
    std::size_t replicate = 0;
    std::size_t start_index = 0;
    double x_final = 0.0;
    double f_true = 0.0; // true objective at the discovered point
};

struct Fig5ModelSummary {
    double median = 0.0;
    double variance = 0.0;
    std::size_t count = 0;
};

struct Fig5Result {
    std::vector<Fig5Row> rows;
    Fig5ModelSummary gp, bann;
    std::size_t failed_replicates = 0;
    // Digest of each replicate's training inputs; both models share it.
    std::vector<std::string> sample_digests;
};

Fig5Result run_fig5(const RunConfig& cfg);

// --- segmentation / dimensionality-reduction study ---

struct Fig6Row {
    std::size_t segment = 0;
    std::size_t size = 0;
    std::size_t retained_dims = 0;
    double local_mse = 0.0;
    double flat_mse = 0.0;
    bool too_small = false;
};

struct Fig6Result {
    std::vector<Fig6Row> rows;
    std::size_t total_samples = 0;
    std::size_t input_dim = 0;
};

Fig6Result run_fig6(const RunConfig& cfg);

// --- model bake-off over training-set sizes ---

struct BakeoffRow {
    std::string model; // "gp" | "bann" | "hierarchical" | "true"
    std::size_t n = 0;
    double train_s = 0.0;
    double predict_us = 0.0;
    double rmse = 0.0;
    double spearman = 0.0;
    bool failed = false;
};

std::vector<BakeoffRow> run_bakeoff(const RunConfig& cfg);

// Spearman rank correlation with mid-ranked ties.
double spearman_correlation(const std::vector<double>& a,
                            const std::vector<double>& b);

// Run the configured experiment, writing all output files plus
// manifest.json under out_dir.
void run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir);

} // namespace sailkit
