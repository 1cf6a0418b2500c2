#include "crewsim/memory.hpp"

#include "crewsim/error.hpp"

namespace crewsim {

namespace {

template <typename T>
void append_entry(std::vector<std::pair<int, T>>& log, int step, T value,
                  const std::optional<size_t>& capacity, const char* what) {
    if (step < 0) {
        throw Error(ErrorCode::NonMonotoneStep,
                    std::string(what) + " step must be non-negative, got " + std::to_string(step));
    }
    if (!log.empty() && step < log.back().first) {
        throw Error(ErrorCode::NonMonotoneStep,
                    std::string(what) + " step " + std::to_string(step) +
                        " is earlier than the last logged step " + std::to_string(log.back().first));
    }
    log.emplace_back(step, std::move(value));
    if (capacity && log.size() > *capacity) {
        log.erase(log.begin(), log.begin() + static_cast<long>(log.size() - *capacity));
    }
}

}  // namespace

void MemoryBuffer::append_feedback(int step, Feedback f) {
    append_entry(feedback_log, step, std::move(f), capacity, "feedback");
}

void MemoryBuffer::append_message(int step, Message m) {
    append_entry(message_log, step, std::move(m), capacity, "message");
}

void MemoryBuffer::append_action(int step, Action a) {
    append_entry(action_log, step, std::move(a), capacity, "action");
}

std::string render_memory(const MemoryBuffer& buf, const MemoryRenderOptions& opts) {
    std::string out;

    auto line = [](int step, const std::string& text, bool latest) {
        std::string s = "- ";
        if (latest) s += "[LATEST] ";
        s += "[step " + std::to_string(step) + "] " + text + "\n";
        return s;
    };

    out += "Action history:\n";
    if (buf.action_log.empty() || opts.latest_only) {
        out += "(none)\n";
    } else {
        for (const auto& [step, a] : buf.action_log) out += line(step, render_action(a), false);
    }

    if (!opts.no_feedback) {
        out += "Feedback history:\n";
        if (buf.feedback_log.empty()) {
            out += "(none)\n";
        } else {
            size_t start = opts.latest_only ? buf.feedback_log.size() - 1 : 0;
            for (size_t i = start; i < buf.feedback_log.size(); ++i) {
                const auto& [step, f] = buf.feedback_log[i];
                out += line(step, render_feedback(f), i + 1 == buf.feedback_log.size());
            }
        }
    }

    out += "Received message history:\n";
    if (buf.message_log.empty()) {
        out += "(none)\n";
    } else {
        size_t start = opts.latest_only ? buf.message_log.size() - 1 : 0;
        for (size_t i = start; i < buf.message_log.size(); ++i) {
            const auto& [step, m] = buf.message_log[i];
            out += line(step, render_message(m), i + 1 == buf.message_log.size());
        }
    }
    return out;
}

}  // namespace crewsim
