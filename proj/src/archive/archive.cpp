#include "sailkit/archive/archive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sailkit/util/format.hpp"

namespace sailkit {

std::vector<std::size_t> bin_index(const FeatureCoordinates& f,
                                   const std::vector<std::size_t>& resolution) {
    if (f.size() != resolution.size()) {
        throw std::invalid_argument("bin_index: dimensionality mismatch");
    }
    std::vector<std::size_t> idx(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(f[i] >= 0.0 && f[i] <= 1.0)) {
            throw std::domain_error("bin_index: coordinate " + std::to_string(i) +
                                    " = " + std::to_string(f[i]) +
                                    " outside [0,1]");
        }
        auto b = static_cast<std::size_t>(
            std::floor(f[i] * static_cast<double>(resolution[i])));
        idx[i] = std::min(b, resolution[i] - 1);
    }
    return idx;
}

Archive::Archive(std::vector<std::size_t> resolution)
    : resolution_(std::move(resolution)) {
    if (resolution_.empty()) {
        throw std::invalid_argument("Archive: empty resolution");
    }
    std::size_t total = 1;
    for (std::size_t r : resolution_) {
        if (r < 1) throw std::invalid_argument("Archive: resolution entries must be >= 1");
        total *= r;
    }
    bins_.resize(total);
}

std::size_t Archive::flatten(const std::vector<std::size_t>& idx) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        flat = flat * resolution_[i] + idx[i];
    }
    return flat;
}

InsertionOutcome Archive::offer(Elite candidate) {
    if (!std::isfinite(candidate.fitness)) {
        throw std::invalid_argument("Archive::offer: non-finite fitness");
    }
    const std::size_t flat = flatten(bin_index(candidate.features, resolution_));
    auto& slot = bins_[flat];
    if (!slot.has_value()) {
        slot = std::move(candidate);
        ++occupied_;
        return InsertionOutcome::InsertedEmpty;
    }
    if (candidate.fitness > slot->fitness) {
        slot = std::move(candidate);
        return InsertionOutcome::Replaced;
    }
    return InsertionOutcome::Rejected;
}

const Elite& Archive::random_elite(Rng& rng) const {
    if (occupied_ == 0) {
        throw std::logic_error("Archive::random_elite: archive is empty");
    }
    // Draw over occupied slots by rank; dense scan keeps selection uniform
    // without a side index.
    std::size_t target = rng.index(occupied_);
    for (const auto& slot : bins_) {
        if (slot.has_value()) {
            if (target == 0) return *slot;
            --target;
        }
    }
    throw std::logic_error("Archive::random_elite: inconsistent occupancy count");
}

ArchiveMetrics Archive::metrics() const {
    ArchiveMetrics m;
    m.occupied = occupied_;
    m.coverage = static_cast<double>(occupied_) / static_cast<double>(bins_.size());
    bool any = false;
    for (const auto& slot : bins_) {
        if (!slot.has_value()) continue;
        m.qd_score += slot->fitness;
        if (!any || slot->fitness > m.best) m.best = slot->fitness;
        any = true;
    }
    return m;
}

std::vector<std::size_t> Archive::occupied_bins() const {
    std::vector<std::size_t> out;
    out.reserve(occupied_);
    for (std::size_t i = 0; i < bins_.size(); ++i) {
        if (bins_[i].has_value()) out.push_back(i);
    }
    return out;
}

void Archive::export_csv(std::ostream& os) const {
    const std::size_t fd = resolution_.size();
    if (fd == 2) {
        os << "bin_i,bin_j";
    } else {
        for (std::size_t i = 0; i < fd; ++i) os << (i ? "," : "") << "bin_" << i;
    }
    std::size_t xdim = 0;
    for (const auto& slot : bins_) {
        if (slot.has_value()) {
            xdim = slot->x.size();
            break;
        }
    }
    os << ",fitness";
    for (std::size_t i = 0; i < fd; ++i) os << ",feat_" << i;
    for (std::size_t i = 0; i < xdim; ++i) os << ",x_" << i;
    os << "\n";
    for (std::size_t flat = 0; flat < bins_.size(); ++flat) {
        const auto& slot = bins_[flat];
        if (!slot.has_value()) continue;
        // Unflatten row-major.
        std::vector<std::size_t> idx(fd);
        std::size_t rem = flat;
        for (std::size_t i = fd; i-- > 0;) {
            idx[i] = rem % resolution_[i];
            rem /= resolution_[i];
        }
        for (std::size_t i = 0; i < fd; ++i) os << (i ? "," : "") << idx[i];
        os << "," << fmt_double(slot->fitness);
        for (double f : slot->features) os << "," << fmt_double(f);
        for (double v : slot->x) os << "," << fmt_double(v);
        os << "\n";
    }
}

} // namespace sailkit
