#include "crewsim/comms.hpp"

#include <algorithm>

#include "crewsim/error.hpp"

namespace crewsim {

MessageBus::MessageBus(std::vector<std::string> roster) : roster_(std::move(roster)) {
    for (const auto& id : roster_) inboxes_[id] = {};
}

bool MessageBus::in_roster(const std::string& id) const {
    return std::find(roster_.begin(), roster_.end(), id) != roster_.end();
}

int MessageBus::sender_rank(const std::string& id) {
    if (id == "alice") return 0;
    if (id == "bob") return 1;
    if (id == "david") return 2;
    return 3;
}

bool MessageBus::payload_role_conforms(const std::string& sender, const MessagePayload& payload) {
    struct Visitor {
        const std::string& sender;
        bool operator()(const ExploreRequest&) const { return sender == "bob"; }
        bool operator()(const TransportRequest&) const { return sender == "bob"; }
        bool operator()(const DelegatedExplore&) const { return sender == "alice"; }
        bool operator()(const LocationReport&) const { return sender == "david" || sender == "alice"; }
        bool operator()(const TaskStatusShare&) const { return true; }
        bool operator()(const FreeText&) const { return true; }
    };
    return std::visit(Visitor{sender}, payload);
}

void MessageBus::send(Message msg) {
    if (!in_roster(msg.recipient)) {
        throw Error(ErrorCode::UnknownRecipient, "no robot named '" + msg.recipient + "'");
    }
    msg.protocol_warning = !payload_role_conforms(msg.sender, msg.payload);
    inboxes_[msg.recipient].push_back(std::move(msg));
}

std::vector<Message> MessageBus::drain_inbox(const std::string& robot_id) {
    auto it = inboxes_.find(robot_id);
    if (it == inboxes_.end()) return {};
    std::vector<Message> out;
    out.swap(it->second);
    std::stable_sort(out.begin(), out.end(), [](const Message& a, const Message& b) {
        if (a.sent_step != b.sent_step) return a.sent_step < b.sent_step;
        return sender_rank(a.sender) < sender_rank(b.sender);
    });
    return out;
}

size_t MessageBus::pending_count() const {
    size_t n = 0;
    for (const auto& [id, box] : inboxes_) n += box.size();
    return n;
}

}  // namespace crewsim
