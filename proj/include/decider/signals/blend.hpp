#pragma once

#include <algorithm>

#include "decider/core/errors.hpp"
#include "decider/core/signal.hpp"

namespace decider {

// p = alpha * p_dense + (1 - alpha) * p_llm
inline Signal blend_composite(const Signal& p_dense, const Signal& p_llm, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) {
        throw config_error("blend_composite: alpha out of [0,1]: " + std::to_string(alpha));
    }
    if (p_dense.value < 0.0 || p_dense.value > 1.0 || p_llm.value < 0.0 || p_llm.value > 1.0) {
        throw precondition_error("blend_composite: input signal out of [0,1]");
    }
    Signal out;
    out.name = "p_composite";
    out.value = alpha * p_dense.value + (1.0 - alpha) * p_llm.value;
    out.source = SignalSource::composite;
    out.detail = {{"alpha", alpha}, {p_dense.name, p_dense.value}, {p_llm.name, p_llm.value}};
    return out;
}

inline double normalize_linear(double x, double lo, double hi) {
    if (lo >= hi) throw config_error("normalize_linear: lo >= hi");
    return std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
}

}  // namespace decider
