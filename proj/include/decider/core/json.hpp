#pragma once

// Single vendored nlohmann/json header. ordered_json keeps insertion order so
// emitted documents are byte-stable.
#include <json.hpp>

namespace decider {
using json = nlohmann::ordered_json;
}
