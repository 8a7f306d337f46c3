#pragma once

#include <cstdint>
#include <vector>

#include "gph/types.hpp"

namespace gph {

struct StatePath {
    std::vector<double> times;
    std::vector<CVec> states;
    bool normalized = true;
};

struct JumpEvent {
    double time = 0.0;
    int channel = 0;
    CVec pre;   // state just before the jump (normalized)
    CVec post;  // normalized K_channel |pre>
};

// One realization of the monitored dynamics. `samples` holds the smooth
// evolution; the sample preceding a jump is the pre-jump state and the sample
// at index jump_sample[i] is the post-jump state of jumps[i].
struct TrajectoryRecord {
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    double t_final = 0.0;
    std::vector<JumpEvent> jumps;
    std::vector<std::size_t> jump_sample;
    StatePath samples;
    // Phase accumulated on the fly over every integration step (finest chain).
    double fine_phase = 0.0;
    std::size_t discarded_steps = 0;
    std::size_t total_steps = 0;

    std::size_t jump_count() const { return jumps.size(); }
};

}  // namespace gph
