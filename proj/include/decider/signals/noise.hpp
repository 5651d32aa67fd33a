#pragma once

#include <map>
#include <string>

#include "decider/core/errors.hpp"
#include "decider/core/rng.hpp"

namespace decider {

// Stand-in for estimator error: flips per-field booleans with the given
// rates. Same seed, same input -> same output.
struct NoiseSpec {
    double false_negative_rate = 0.0;
    double false_positive_rate = 0.0;
    uint64_t seed = 0;

    void validate() const {
        if (false_negative_rate < 0.0 || false_negative_rate > 1.0 ||
            false_positive_rate < 0.0 || false_positive_rate > 1.0) {
            throw config_error("NoiseSpec rates must lie in [0,1]");
        }
    }
};

// Fields are visited in key order so the draw sequence is well defined.
inline std::map<std::string, bool> apply_noise(const std::map<std::string, bool>& report,
                                               const NoiseSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    std::map<std::string, bool> out;
    for (const auto& [field, present] : report) {
        out[field] = present ? !rng.bernoulli(spec.false_negative_rate)
                             : rng.bernoulli(spec.false_positive_rate);
    }
    return out;
}

}  // namespace decider
