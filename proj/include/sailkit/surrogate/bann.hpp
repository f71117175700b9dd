#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sailkit/core/domain.hpp"
#include "sailkit/core/rng.hpp"
#include "sailkit/surrogate/mlp.hpp"
#include "sailkit/surrogate/model.hpp"

namespace sailkit {

// Affine input/target normalization shared by all ensemble members:
// inputs to [-1, 1] from the domain bounds (or the data hull when no
// bounds are given), targets standardized.
struct Normalization {
    std::vector<double> in_lo, in_hi;
    double y_mean = 0.0;
    double y_scale = 1.0;

    ParameterVector normalize_input(const ParameterVector& x) const;
    double normalize_target(double y) const { return (y - y_mean) / y_scale; }
    double denormalize_target(double z) const { return y_mean + y_scale * z; }
};

struct BannConfig {
    std::size_t members = 16;
    std::size_t hidden = 10;
    LmConfig lm;
};

// Bootstrap-aggregated MLP ensemble. Prediction is the member mean;
// confidence is the unbiased sample variance of member outputs.
class BannEnsemble : public SurrogateModel {
public:
    static BannEnsemble train(const std::vector<ParameterVector>& X,
                              const std::vector<double>& y,
                              const BannConfig& cfg, Rng& rng,
                              const DomainSpec* bounds = nullptr);

    Prediction predict(const ParameterVector& x) const override;

    std::vector<double> member_outputs(const ParameterVector& x) const;

    std::size_t member_count() const { return members_.size(); }
    std::size_t failed_members() const { return failed_; }
    const Normalization& normalization() const { return norm_; }

private:
    std::vector<MlpNet> members_;
    Normalization norm_;
    std::size_t failed_ = 0;
};

// Bootstrap resample indices: n draws with replacement from [0, n).
std::vector<std::size_t> bootstrap_indices(std::size_t n, Rng& rng);

} // namespace sailkit
