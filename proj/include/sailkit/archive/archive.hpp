#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "sailkit/core/domain.hpp"

namespace sailkit {

struct Elite {
    ParameterVector x;
    FeatureCoordinates features;
    double fitness = 0.0;
};

enum class InsertionOutcome { InsertedEmpty, Replaced, Rejected };

struct ArchiveMetrics {
    double coverage = 0.0;
    double qd_score = 0.0;
    double best = 0.0;
    std::size_t occupied = 0;
};

// index[i] = floor(coords[i] * resolution[i]), with coordinate 1.0 clamped
// into the last bin. Throws std::domain_error outside [0,1].
std::vector<std::size_t> bin_index(const FeatureCoordinates& f,
                                   const std::vector<std::size_t>& resolution);

// MAP-Elites grid: one elite per bin, best fitness wins, ties keep the
// incumbent.
class Archive {
public:
    explicit Archive(std::vector<std::size_t> resolution);

    InsertionOutcome offer(Elite candidate);

    const Elite& random_elite(Rng& rng) const;

    ArchiveMetrics metrics() const;

    std::size_t bin_count() const { return bins_.size(); }
    std::size_t occupied_count() const { return occupied_; }
    const std::vector<std::size_t>& resolution() const { return resolution_; }

    const std::optional<Elite>& bin(std::size_t flat) const { return bins_[flat]; }

    std::size_t flatten(const std::vector<std::size_t>& idx) const;

    // Occupied bins in row-major order.
    std::vector<std::size_t> occupied_bins() const;

    // CSV export: bin_i,bin_j,...,fitness,feat_0..,x_0.. one row per
    // occupied bin, row-major bin order.
    void export_csv(std::ostream& os) const;

private:
    std::vector<std::size_t> resolution_;
    std::vector<std::optional<Elite>> bins_;
    std::size_t occupied_ = 0;
};

} // namespace sailkit
