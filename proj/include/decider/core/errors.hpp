#pragma once

#include <stdexcept>
#include <string>

namespace decider {

// Tagged error hierarchy. Callers catch the base or a specific tag.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_error : error {
    using error::error;
};

struct data_error : error {
    using error::error;
};

struct evaluation_error : error {
    using error::error;
};

struct no_feasible_action_error : error {
    using error::error;
};

struct sequencing_error : error {
    using error::error;
};

struct incomplete_trace_error : error {
    using error::error;
};

struct precondition_error : error {
    using error::error;
};

struct inconsistent_state_error : error {
    using error::error;
};

struct generation_error : error {
    using error::error;
};

struct synthesis_error : error {
    using error::error;
};

struct estimator_unavailable_error : error {
    using error::error;
};

}  // namespace decider
