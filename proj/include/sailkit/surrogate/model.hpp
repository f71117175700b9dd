#pragma once

#include "sailkit/core/domain.hpp"

namespace sailkit {

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
};

// Common contract for all surrogates: mean plus a non-negative
// confidence measure (variance-like).
class SurrogateModel {
public:
    virtual ~SurrogateModel() = default;
    virtual Prediction predict(const ParameterVector& x) const = 0;
};

} // namespace sailkit
