#include <doctest.h>

#include <map>

#include "crewsim/comms.hpp"
#include "crewsim/error.hpp"
#include "crewsim/scenario.hpp"

using namespace crewsim;

namespace {

Message make_msg(std::string from, std::string to, int step, MessagePayload payload) {
    Message m;
    m.sender = std::move(from);
    m.recipient = std::move(to);
    m.sent_step = step;
    m.payload = std::move(payload);
    return m;
}

}  // namespace

TEST_CASE("unknown recipients are rejected") {
    MessageBus bus({"alice", "bob", "david"});
    try {
        bus.send(make_msg("bob", "carol", 3, FreeText{"hi"}));
        FAIL("expected UnknownRecipient");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownRecipient);
    }
}

TEST_CASE("empty inbox drains to an empty list, twice") {
    MessageBus bus({"alice", "bob", "david"});
    CHECK(bus.drain_inbox("alice").empty());
    bus.send(make_msg("bob", "alice", 1, FreeText{"x"}));
    CHECK(bus.drain_inbox("alice").size() == 1);
    CHECK(bus.drain_inbox("alice").empty());
}

TEST_CASE("drained messages sort by sent step, then sender order") {
    MessageBus bus({"alice", "bob", "david"});
    bus.send(make_msg("david", "bob", 5, FreeText{"late sender, same step"}));
    bus.send(make_msg("alice", "bob", 5, FreeText{"early sender, same step"}));
    bus.send(make_msg("david", "bob", 4, FreeText{"earlier step"}));
    auto msgs = bus.drain_inbox("bob");
    REQUIRE(msgs.size() == 3);
    CHECK(msgs[0].sent_step == 4);
    CHECK(msgs[1].sender == "alice");
    CHECK(msgs[2].sender == "david");
}

TEST_CASE("protocol-role violations are flagged but still delivered") {
    MessageBus bus({"alice", "bob", "david"});
    bus.send(make_msg("david", "alice", 2, ExploreRequest{{"apple"}}));  // bob-only payload
    auto msgs = bus.drain_inbox("alice");
    REQUIRE(msgs.size() == 1);
    CHECK(msgs[0].protocol_warning);

    bus.send(make_msg("bob", "alice", 3, ExploreRequest{{"apple"}}));
    auto ok = bus.drain_inbox("alice");
    REQUIRE(ok.size() == 1);
    CHECK_FALSE(ok[0].protocol_warning);

    // delegation belongs to alice; location reports to david or alice
    CHECK(MessageBus::payload_role_conforms("alice", DelegatedExplore{{"counter"}}));
    CHECK_FALSE(MessageBus::payload_role_conforms("bob", DelegatedExplore{{"counter"}}));
    CHECK(MessageBus::payload_role_conforms("david",
                                            LocationReport{"apple", make_pose(1, 1, 0), "t"}));
    CHECK(MessageBus::payload_role_conforms("alice",
                                            LocationReport{"apple", make_pose(1, 1, 0), "t"}));
    CHECK_FALSE(MessageBus::payload_role_conforms("bob",
                                                  LocationReport{"apple", make_pose(1, 1, 0), "t"}));
}

TEST_CASE("no loss, no duplication under random traffic") {
    MessageBus bus({"alice", "bob", "david"});
    SeededRng rng(99);
    std::vector<std::string> roster = {"alice", "bob", "david"};
    std::map<std::string, int> sent, received;
    int counter = 0;
    for (int step = 0; step < 50; ++step) {
        for (int k = 0; k < 3; ++k) {
            std::string from = roster[rng.below(3)];
            std::string to = roster[rng.below(3)];
            if (from == to) continue;
            std::string tag = "m" + std::to_string(counter++);
            bus.send(make_msg(from, to, step, FreeText{tag}));
            sent[tag] += 1;
        }
        std::string drained = roster[rng.below(3)];
        for (const auto& m : bus.drain_inbox(drained)) {
            received[std::get<FreeText>(m.payload).text] += 1;
            CHECK(m.sent_step <= step);  // causality
        }
    }
    // drain the stragglers
    for (const auto& r : roster) {
        for (const auto& m : bus.drain_inbox(r)) {
            received[std::get<FreeText>(m.payload).text] += 1;
        }
    }
    CHECK(bus.pending_count() == 0);
    CHECK(sent == received);
    for (const auto& [tag, n] : received) CHECK(n == 1);
}

TEST_CASE("payload rendering covers every type") {
    std::vector<MessagePayload> payloads = {
        ExploreRequest{{"apple", "fork"}},
        TransportRequest{"bottle", "beyond my reach"},
        DelegatedExplore{{"counter", "side_table"}},
        LocationReport{"apple", make_pose(0.55, 1.85, 0), "counter"},
        TaskStatusShare{"task complete"},
        FreeText{"anything"},
    };
    for (const auto& p : payloads) {
        CHECK_FALSE(render_payload(p).empty());
        CHECK_FALSE(payload_to_wire(p).empty());
    }
    Message m = make_msg("david", "alice", 5,
                         LocationReport{"apple", make_pose(0.55, 1.85, 0), "counter"});
    std::string text = render_message(m);
    CHECK(text.find("From david at step 5:") == 0);
    CHECK(text.find("apple") != std::string::npos);
    CHECK(text.find("(0.55, 1.85)") != std::string::npos);
}
