#pragma once

#include <cstdint>

#include <json.hpp>

namespace banachlab {

using Json = nlohmann::ordered_json;

// A certified lower bound on some norm-ratio constant, together with the
// witness configuration attaining it. Replaying the witness through the
// corresponding *_replay function reproduces lower_bound to 1e-9.
struct ConstantEstimate {
    double lower_bound = 0.0;
    Json witness;
    std::int64_t samples_used = 0;
    bool exhaustive_signs = false;
};

} // namespace banachlab
