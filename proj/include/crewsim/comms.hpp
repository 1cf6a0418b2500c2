#pragma once

#include <map>
#include <string>
#include <vector>

#include "crewsim/message.hpp"

namespace crewsim {

/// Point-to-point message bus with deterministic delivery. Messages become
/// visible to the recipient the next time its inbox is drained, which the
/// episode loop does at the start of each robot's turn; combined with the
/// fixed alice -> bob -> david turn order this gives same-step delivery to
/// robots that act later in the step and next-step delivery otherwise.
class MessageBus {
public:
    explicit MessageBus(std::vector<std::string> roster);

    /// Enqueue for the recipient. Throws Error(UnknownRecipient) for ids
    /// outside the roster. Payload types that do not match the sender's
    /// protocol role are still delivered, flagged with protocol_warning.
    void send(Message msg);

    /// Pending messages in (sent_step, sender order) order; empties the inbox.
    std::vector<Message> drain_inbox(const std::string& robot_id);

    bool in_roster(const std::string& id) const;

    /// alice < bob < david; unknown senders sort last.
    static int sender_rank(const std::string& id);

    /// Protocol conformance: explore/transport requests originate from bob,
    /// delegation from alice, location reports from david or alice.
    static bool payload_role_conforms(const std::string& sender, const MessagePayload& payload);

    size_t pending_count() const;

private:
    std::vector<std::string> roster_;
    std::map<std::string, std::vector<Message>> inboxes_;
};

}  // namespace crewsim
