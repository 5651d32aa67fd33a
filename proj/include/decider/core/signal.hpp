#pragma once

#include <algorithm>
#include <iostream>
#include <map>
#include <string>

#include "decider/core/errors.hpp"

namespace decider {

enum class SignalSource { oracle, lexical, external, composite, noisy };

inline const char* to_string(SignalSource s) {
    switch (s) {
        case SignalSource::oracle: return "oracle";
        case SignalSource::lexical: return "lexical";
        case SignalSource::external: return "external";
        case SignalSource::composite: return "composite";
        case SignalSource::noisy: return "noisy";
    }
    return "oracle";
}

// A named scalar in [0,1] plus provenance. `detail` carries optional
// per-field/per-attribute breakdowns (booleans encoded as 0/1).
struct Signal {
    std::string name;
    double value = 0.0;
    SignalSource source = SignalSource::oracle;
    std::map<std::string, double> detail;
};

inline Signal make_signal(std::string name, double value, SignalSource source) {
    if (value < 0.0 || value > 1.0) {
        throw data_error("signal '" + name + "' out of [0,1]: " + std::to_string(value));
    }
    return Signal{std::move(name), value, source, {}};
}

// External sources get clamped instead of rejected; the clamp is logged.
inline Signal clamp_external_signal(std::string name, double value) {
    double clamped = std::clamp(value, 0.0, 1.0);
    if (clamped != value) {
        std::cerr << "[decider] warning: external signal '" << name << "' value " << value
                  << " clamped to " << clamped << "\n";
    }
    return Signal{std::move(name), clamped, SignalSource::external, {}};
}

}  // namespace decider
