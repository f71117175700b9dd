#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sailkit/optimize/sail.hpp"

namespace sailkit {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { MapElites, Sail, Fig5, Fig6, Bakeoff };

// Parsed run configuration. The file format is INI-style sections of
// key = value lines; unknown sections or keys are hard errors with the
// offending line number.
struct RunConfig {
    ExperimentKind experiment = ExperimentKind::MapElites;
    std::string problem = "rastrigin-2d";
    std::uint64_t seed = 0;

    // [illumination]
    IlluminationConfig illumination;

    // [sail]
    SailConfig sail;

    // [fig5]
    std::size_t fig5_replicates = 100;
    std::size_t fig5_starts = 10;
    std::size_t fig5_training_size = 10;
    double fig5_hill_step = 0.05;
    std::size_t fig5_hill_iters = 200;

    // [fig6]
    std::size_t fig6_segments = 16;
    double fig6_pca_cutoff = 0.01;
    std::size_t fig6_sample_evaluations = 3000;
    std::size_t fig6_min_segment = 10;
    bool fig6_residual_mode = false; // local models on flat-model residuals

    // [bakeoff]
    std::vector<std::size_t> bakeoff_sizes{50, 100, 200, 400, 800};
    std::size_t bakeoff_test_points = 500;

    // Canonical serialization used in the run manifest.
    std::string canonical() const;

    static RunConfig parse(std::istream& in, const std::string& origin);
    static RunConfig parse_file(const std::string& path);
    static ExperimentKind experiment_from_name(const std::string& name);
    static std::string experiment_name(ExperimentKind kind);
};

} // namespace sailkit
