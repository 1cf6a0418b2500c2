#include <doctest.h>

#include <regex>

#include "crewsim/error.hpp"
#include "crewsim/memory.hpp"

using namespace crewsim;

namespace {

Message msg(std::string from, std::string to, int step, std::string text) {
    Message m;
    m.sender = std::move(from);
    m.recipient = std::move(to);
    m.sent_step = step;
    m.payload = FreeText{std::move(text)};
    return m;
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
    size_t n = 0;
    for (size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("append grows the logs and keeps step order") {
    MemoryBuffer buf;
    buf.append_feedback(0, WaitAck{});
    CHECK(buf.feedback_log.size() == 1);
    buf.append_feedback(0, WaitAck{});  // equal steps are fine
    buf.append_feedback(3, PickSuccess{"apple"});
    CHECK(buf.feedback_log.size() == 3);
    CHECK_THROWS_AS(buf.append_feedback(2, WaitAck{}), Error);
    CHECK_THROWS_AS(buf.append_action(-1, Action{WaitAction{}}), Error);
}

TEST_CASE("appending before an earlier step reports NonMonotoneStep") {
    MemoryBuffer buf;
    buf.append_action(5, Action{WaitAction{}});
    try {
        buf.append_action(2, Action{WaitAction{}});
        FAIL("expected NonMonotoneStep");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonMonotoneStep);
    }
}

TEST_CASE("capacity keeps only the newest entries") {
    MemoryBuffer buf;
    buf.capacity = 3;
    for (int i = 0; i < 4; ++i) buf.append_action(i, Action{PickAction{std::to_string(i)}});
    REQUIRE(buf.action_log.size() == 3);
    CHECK(buf.action_log[0].first == 1);
    CHECK(buf.action_log[1].first == 2);
    CHECK(buf.action_log[2].first == 3);
}

TEST_CASE("all-empty buffer renders three (none) sections") {
    MemoryBuffer buf;
    std::string text = render_memory(buf);
    CHECK(count_occurrences(text, "(none)") == 3);
    CHECK(text.find("Action history:") != std::string::npos);
    CHECK(text.find("Feedback history:") != std::string::npos);
    CHECK(text.find("Received message history:") != std::string::npos);
}

TEST_CASE("exactly one LATEST tag per nonempty feedback/message section, none on actions") {
    MemoryBuffer buf;
    buf.append_action(0, Action{WaitAction{}});
    buf.append_action(1, Action{PickAction{"apple"}});
    buf.append_feedback(0, WaitAck{});
    buf.append_feedback(1, PickSuccess{"apple"});
    buf.append_message(1, msg("alice", "bob", 1, "hello"));
    buf.append_message(2, msg("david", "bob", 2, "again"));

    std::string text = render_memory(buf);
    CHECK(count_occurrences(text, "[LATEST]") == 2);

    // the tag marks the later entry of each tagged section
    size_t fb_section = text.find("Feedback history:");
    size_t msg_section = text.find("Received message history:");
    size_t fb_latest = text.find("[LATEST]", fb_section);
    CHECK(fb_latest != std::string::npos);
    CHECK(fb_latest < msg_section);
    CHECK(text.find("[LATEST]", msg_section) != std::string::npos);
    size_t action_section = text.find("Action history:");
    CHECK(text.substr(action_section, fb_section - action_section).find("[LATEST]") ==
          std::string::npos);
}

TEST_CASE("rendering is byte-deterministic") {
    MemoryBuffer buf;
    buf.append_feedback(2, MoveSuccess{0.1, 0.2});
    buf.append_message(2, msg("alice", "david", 2, "go"));
    CHECK(render_memory(buf) == render_memory(buf));
}

TEST_CASE("a prefix buffer renders a prefix-consistent subsequence") {
    MemoryBuffer full;
    MemoryBuffer prefix;
    for (int i = 0; i < 5; ++i) {
        Feedback f = PickSuccess{"o" + std::to_string(i)};
        full.append_feedback(i, f);
        if (i < 3) prefix.append_feedback(i, f);
    }
    auto strip_tags = [](std::string s) {
        return std::regex_replace(s, std::regex("\\[LATEST\\] "), "");
    };
    std::string full_text = strip_tags(render_memory(full));
    std::string prefix_text = strip_tags(render_memory(prefix));
    // every prefix line appears in the full render in order
    std::istringstream ps(prefix_text);
    std::string line;
    size_t cursor = 0;
    while (std::getline(ps, line)) {
        if (line == "(none)") continue;
        size_t at = full_text.find(line, cursor);
        REQUIRE(at != std::string::npos);
        cursor = at + line.size();
    }
}

TEST_CASE("latest-only mode keeps just the tagged entries") {
    MemoryBuffer buf;
    for (int i = 0; i < 4; ++i) {
        buf.append_action(i, Action{PickAction{"o" + std::to_string(i)}});
        buf.append_feedback(i, PickSuccess{"o" + std::to_string(i)});
        buf.append_message(i, msg("alice", "bob", i, "m" + std::to_string(i)));
    }
    MemoryRenderOptions opts;
    opts.latest_only = true;
    std::string text = render_memory(buf, opts);
    CHECK(text.find("o3") != std::string::npos);
    CHECK(text.find("o2") == std::string::npos);
    CHECK(text.find("m3") != std::string::npos);
    CHECK(text.find("m0") == std::string::npos);
    // every surviving history line carries the tag
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind("- ", 0) == 0) {
            CHECK(line.find("[LATEST]") != std::string::npos);
        }
    }
}

TEST_CASE("no-feedback mode removes the feedback section entirely") {
    MemoryBuffer buf;
    buf.append_feedback(0, PickSuccess{"apple"});
    buf.append_message(0, msg("alice", "bob", 0, "hi"));
    MemoryRenderOptions opts;
    opts.no_feedback = true;
    std::string text = render_memory(buf, opts);
    CHECK(text.find("Feedback history:") == std::string::npos);
    CHECK(text.find("picked") == std::string::npos);
    CHECK(text.find("Received message history:") != std::string::npos);
}
