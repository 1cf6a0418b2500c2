#include "crewsim/message.hpp"

#include <sstream>

namespace crewsim {

namespace {

std::string join(const std::vector<std::string>& xs, const std::string& sep = ", ") {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += xs[i];
    }
    return out;
}

}  // namespace

std::string render_payload(const MessagePayload& p) {
    struct Visitor {
        std::string operator()(const ExploreRequest& r) const {
            return "Please explore the environment and locate: " + join(r.object_names) + ".";
        }
        std::string operator()(const TransportRequest& r) const {
            std::string s = "Please transport '" + r.object_name + "' to within my reach on the work surface.";
            if (!r.context_text.empty()) s += " Context: " + r.context_text;
            return s;
        }
        std::string operator()(const DelegatedExplore& r) const {
            return "Please visit these locations and report any objects you find: " +
                   join(r.furniture_ids) + ".";
        }
        std::string operator()(const LocationReport& r) const {
            return "Found " + r.object_name + " at " + fmt_pose(r.pose) + ", located at " +
                   r.furniture_id + ".";
        }
        std::string operator()(const TaskStatusShare& r) const { return "Status update: " + r.text; }
        std::string operator()(const FreeText& r) const { return r.text; }
    };
    return std::visit(Visitor{}, p);
}

std::string render_message(const Message& m) {
    std::string s = "From " + m.sender + " at step " + std::to_string(m.sent_step) + ": " +
                    render_payload(m.payload);
    if (m.protocol_warning) s += " [protocol warning: unexpected sender for this message type]";
    return s;
}

std::string payload_to_wire(const MessagePayload& p) {
    struct Visitor {
        std::string operator()(const ExploreRequest& r) const {
            return "explore: " + join(r.object_names);
        }
        std::string operator()(const TransportRequest& r) const {
            std::string s = "transport: " + r.object_name;
            if (!r.context_text.empty()) s += " | " + r.context_text;
            return s;
        }
        std::string operator()(const DelegatedExplore& r) const {
            return "delegate: " + join(r.furniture_ids);
        }
        std::string operator()(const LocationReport& r) const {
            return "found: " + r.object_name + " @ " + fmt_pose(r.pose) + " at " + r.furniture_id;
        }
        std::string operator()(const TaskStatusShare& r) const { return "status: " + r.text; }
        std::string operator()(const FreeText& r) const { return r.text; }
    };
    return std::visit(Visitor{}, p);
}

}  // namespace crewsim
