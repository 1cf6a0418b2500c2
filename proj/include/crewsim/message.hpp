#pragma once

#include <string>
#include <variant>
#include <vector>

#include "crewsim/geometry.hpp"

namespace crewsim {

// Typed inter-robot payloads. FreeText is the escape hatch for model
// outputs that do not match any structured form.

struct ExploreRequest {
    std::vector<std::string> object_names;
};

struct TransportRequest {
    std::string object_name;
    std::string context_text;
};

struct DelegatedExplore {
    std::vector<std::string> furniture_ids;
};

struct LocationReport {
    std::string object_name;
    Pose2D pose;
    std::string furniture_id;
};

struct TaskStatusShare {
    std::string text;
};

struct FreeText {
    std::string text;
};

using MessagePayload =
    std::variant<ExploreRequest, TransportRequest, DelegatedExplore, LocationReport,
                 TaskStatusShare, FreeText>;

struct Message {
    std::string sender;
    std::string recipient;
    int sent_step = 0;
    MessagePayload payload;
    /// Set by the bus when the payload type violates the sender-role
    /// protocol; such messages are still delivered.
    bool protocol_warning = false;
};

std::string render_payload(const MessagePayload& p);

/// "From <sender> at step <t>: <rendered payload>"
std::string render_message(const Message& m);

/// Compact single-line form used in action syntax and logs, e.g.
/// "explore: apple, fork".
std::string payload_to_wire(const MessagePayload& p);

}  // namespace crewsim
