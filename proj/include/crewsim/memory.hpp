#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crewsim/action.hpp"
#include "crewsim/feedback.hpp"
#include "crewsim/message.hpp"

namespace crewsim {

/// Per-robot append-only histories. Steps must be non-decreasing within
/// each log; appending violates with Error(NonMonotoneStep). When a
/// capacity is set, each log keeps only its newest entries.
struct MemoryBuffer {
    std::vector<std::pair<int, Feedback>> feedback_log;
    std::vector<std::pair<int, Message>> message_log;
    std::vector<std::pair<int, Action>> action_log;
    std::optional<size_t> capacity;

    void append_feedback(int step, Feedback f);
    void append_message(int step, Message m);
    void append_action(int step, Action a);
};

struct MemoryRenderOptions {
    bool no_feedback = false;  // drop the feedback section entirely
    bool latest_only = false;  // keep only the [LATEST]-tagged entries
};

/// Three chronological sections (actions, feedback, messages). The single
/// most recent feedback entry and the most recent message entry carry the
/// literal "[LATEST]" tag; empty sections render "(none)".
std::string render_memory(const MemoryBuffer& buf, const MemoryRenderOptions& opts = {});

}  // namespace crewsim
