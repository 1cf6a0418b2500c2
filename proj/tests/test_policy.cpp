#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "crewsim/chat_client.hpp"
#include "crewsim/episode.hpp"
#include "crewsim/policy.hpp"
#include "crewsim/scenario.hpp"
#include "world_fixture.hpp"

using namespace crewsim;
using crewsim::testing::small_world;

namespace {

Observation make_observation(const WorldState& w, const SceneGraph& graph,
                             const MemoryBuffer& memory, const GridMap& nav,
                             const std::map<std::string, FurnitureStaticInfo>& info,
                             const TaskSpec& task, const std::string& robot_id) {
    Observation obs;
    obs.robot_id = robot_id;
    obs.role = w.robots.at(robot_id).role;
    obs.robot = &w.robots.at(robot_id);
    obs.graph = &graph;
    obs.memory = &memory;
    obs.task = &task;
    obs.nav_grid = &nav;
    obs.furniture_info = &info;
    obs.thresholds = w.thresholds;
    obs.step = 0;
    return obs;
}

}  // namespace

TEST_CASE("fenced action blocks parse to actions") {
    auto r = parse_action("I should grab it.\n```action\npick(apple)\n```",
                          RobotRole::Manipulation);
    REQUIRE(std::holds_alternative<Action>(r));
    CHECK(std::get<PickAction>(std::get<Action>(r)).object_id == "apple");
}

TEST_CASE("missing block and malformed commands are parse failures") {
    auto none = parse_action("let me think...", RobotRole::Manipulation);
    REQUIRE(std::holds_alternative<ParseFailure>(none));
    CHECK(std::get<ParseFailure>(none).reason == ParseFailure::Reason::NoActionBlock);

    auto broken = parse_action("```action\npick apple\n```", RobotRole::Manipulation);
    REQUIRE(std::holds_alternative<ParseFailure>(broken));
    CHECK(std::get<ParseFailure>(broken).reason == ParseFailure::Reason::Malformed);

    auto unknown = parse_action("```action\nfly(away)\n```", RobotRole::Mobile);
    REQUIRE(std::holds_alternative<ParseFailure>(unknown));
    CHECK(std::get<ParseFailure>(unknown).reason == ParseFailure::Reason::UnknownAction);
}

TEST_CASE("role-illegal commands are rejected at parse time") {
    auto r = parse_action("```action\nopen(fridge)\n```", RobotRole::Mobile);
    REQUIRE(std::holds_alternative<ParseFailure>(r));
    CHECK(std::get<ParseFailure>(r).reason == ParseFailure::Reason::RoleIllegal);

    auto nav = parse_action("```action\nnavigate(fridge)\n```", RobotRole::Manipulation);
    REQUIRE(std::holds_alternative<ParseFailure>(nav));
    CHECK(std::get<ParseFailure>(nav).reason == ParseFailure::Reason::RoleIllegal);
}

TEST_CASE("the last fenced block wins and arguments parse fully") {
    std::string raw =
        "First I thought:\n```action\nwait()\n```\nbut actually:\n"
        "```action\nmove(0.25, -0.1)\n```";
    auto r = parse_action(raw, RobotRole::MobileManipulation);
    REQUIRE(std::holds_alternative<Action>(r));
    auto mv = std::get<MoveAction>(std::get<Action>(r));
    CHECK(mv.dx == doctest::Approx(0.25));
    CHECK(mv.dy == doctest::Approx(-0.1));

    auto nav = parse_action("```action\nnavigate(work_table, 2)\n```",
                            RobotRole::MobileManipulation);
    CHECK(std::get<NavigateAction>(std::get<Action>(nav)).target_index == 2);

    auto place = parse_action("```action\nplace(apple, tray)\n```", RobotRole::Manipulation);
    auto pa = std::get<PlaceAction>(std::get<Action>(place));
    CHECK(pa.object_id == "apple");
    CHECK(pa.destination == "tray");
}

TEST_CASE("send payload grammar covers the typed forms and falls back to free text") {
    auto explore = parse_payload_wire("explore: apple, fork");
    REQUIRE(std::holds_alternative<ExploreRequest>(explore));
    CHECK(std::get<ExploreRequest>(explore).object_names ==
          std::vector<std::string>{"apple", "fork"});

    auto transport = parse_payload_wire("transport: bottle | beyond my reach");
    REQUIRE(std::holds_alternative<TransportRequest>(transport));
    CHECK(std::get<TransportRequest>(transport).object_name == "bottle");
    CHECK(std::get<TransportRequest>(transport).context_text == "beyond my reach");

    auto delegated = parse_payload_wire("delegate: counter, side_table");
    REQUIRE(std::holds_alternative<DelegatedExplore>(delegated));

    auto found = parse_payload_wire("found: apple @ (0.55, 1.85) at counter");
    REQUIRE(std::holds_alternative<LocationReport>(found));
    CHECK(std::get<LocationReport>(found).object_name == "apple");
    CHECK(std::get<LocationReport>(found).pose.x == doctest::Approx(0.55));
    CHECK(std::get<LocationReport>(found).furniture_id == "counter");

    auto status = parse_payload_wire("status: task complete");
    REQUIRE(std::holds_alternative<TaskStatusShare>(status));

    auto free = parse_payload_wire("hello there");
    REQUIRE(std::holds_alternative<FreeText>(free));

    // the wire form of each payload parses back to the same payload
    std::vector<MessagePayload> payloads = {
        ExploreRequest{{"apple", "fork"}}, TransportRequest{"bottle", "ctx"},
        DelegatedExplore{{"counter"}}, TaskStatusShare{"working"}, FreeText{"hi"}};
    for (const auto& p : payloads) {
        auto reparsed = parse_payload_wire(payload_to_wire(p));
        CHECK(payload_to_wire(reparsed) == payload_to_wire(p));
    }
}

TEST_CASE("send commands parse recipient and payload") {
    auto r = parse_action("```action\nsend(alice, explore: ham, cheese)\n```",
                          RobotRole::Manipulation);
    REQUIRE(std::holds_alternative<Action>(r));
    auto send = std::get<SendMessageAction>(std::get<Action>(r));
    CHECK(send.recipient == "alice");
    REQUIRE(std::holds_alternative<ExploreRequest>(send.payload));
}

TEST_CASE("observation serialization is deterministic and role-aware") {
    WorldState w = small_world();
    GridMap nav = w.nav_grid();
    auto info = static_furniture_info(w);
    TaskSpec task = PackObjects{{"apple", "bottle"}, "tray"};

    SceneGraph alice_graph = SceneGraph::initial(w, "alice");
    MemoryBuffer memory;
    Observation alice_obs = make_observation(w, alice_graph, memory, nav, info, task, "alice");
    PromptBundle b1 = serialize_observation(alice_obs);
    PromptBundle b2 = serialize_observation(alice_obs);
    CHECK(b1.system_text == b2.system_text);
    CHECK(b1.user_text == b2.user_text);

    SceneGraph david_graph = SceneGraph::initial(w, "david");
    Observation david_obs = make_observation(w, david_graph, memory, nav, info, task, "david");
    PromptBundle david_bundle = serialize_observation(david_obs);
    CHECK(david_bundle.user_text.find("pick(") == std::string::npos);
    CHECK(david_bundle.user_text.find("place(") == std::string::npos);
    CHECK(david_bundle.user_text.find("open(") == std::string::npos);
    CHECK(david_bundle.user_text.find("navigate(") != std::string::npos);

    // bob cannot navigate or move
    SceneGraph bob_graph = SceneGraph::initial(w, "bob");
    Observation bob_obs = make_observation(w, bob_graph, memory, nav, info, task, "bob");
    PromptBundle bob_bundle = serialize_observation(bob_obs);
    CHECK(bob_bundle.user_text.find("navigate(") == std::string::npos);
    CHECK(bob_bundle.user_text.find("pick(") != std::string::npos);
}

TEST_CASE("ablations strip feedback or history from the prompt") {
    WorldState w = small_world();
    GridMap nav = w.nav_grid();
    auto info = static_furniture_info(w);
    TaskSpec task = PackObjects{{"apple"}, "tray"};
    SceneGraph graph = SceneGraph::initial(w, "bob");
    MemoryBuffer memory;
    memory.append_feedback(0, PickSuccess{"apple"});
    memory.append_feedback(1, PlaceSuccess{"apple", "tray", make_pose(1.15, 1.15, 0)});
    memory.append_action(0, Action{PickAction{"apple"}});

    Observation obs = make_observation(w, graph, memory, nav, info, task, "bob");
    AblationFlags no_feedback;
    no_feedback.no_feedback = true;
    std::string text = serialize_observation(obs, no_feedback).user_text;
    CHECK(text.find("Feedback history:") == std::string::npos);
    CHECK(text.find("Successfully picked") == std::string::npos);

    AblationFlags no_history;
    no_history.no_history = true;
    std::string latest = serialize_observation(obs, no_history).user_text;
    CHECK(latest.find("Successfully placed") != std::string::npos);  // tagged entry stays
    CHECK(latest.find("Successfully picked") == std::string::npos);  // older entry gone
    CHECK(latest.find("pick(apple)") == std::string::npos);          // action history off
}

TEST_CASE("alice's first kitchen prompt matches the golden snapshot") {
    Scenario s = load_scenario(crewsim::testing::scenarios_dir() + "/kitchen.json");
    TaskRequest req{"pack_objects", 4, 0};
    instantiate_task(s, req);
    WorldState w = s.world;
    GridMap nav = w.nav_grid();
    auto info = static_furniture_info(w);
    SceneGraph graph = SceneGraph::initial(w, "alice");
    MemoryBuffer memory;
    Observation obs = make_observation(w, graph, memory, nav, info, *s.task, "alice");
    PromptBundle bundle = serialize_observation(obs);
    std::string rendered = "== system ==\n" + bundle.system_text + "== user ==\n" +
                           bundle.user_text;

    std::string golden_path =
        std::string(CREWSIM_SOURCE_DIR) + "/tests/golden/alice_kitchen_step0.txt";
    if (std::getenv("CREWSIM_REGOLD")) {
        std::ofstream out(golden_path, std::ios::binary);
        out << rendered;
    }
    std::ifstream in(golden_path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "golden file missing; regenerate with CREWSIM_REGOLD=1");
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(rendered == buf.str());
}

TEST_CASE("a scripted valid reply is used with zero retries") {
    WorldState w = small_world();
    GridMap nav = w.nav_grid();
    auto info = static_furniture_info(w);
    TaskSpec task = PackObjects{{"apple"}, "tray"};
    SceneGraph graph = SceneGraph::initial(w, "bob");
    MemoryBuffer memory;
    Observation obs = make_observation(w, graph, memory, nav, info, task, "bob");
    PromptBundle bundle = serialize_observation(obs);

    auto transport = std::make_shared<ScriptedTransport>(std::vector<std::string>{
        "Taking the apple.\n```action\npick(apple)\n```"});
    ChatModelBackend backend(ChatConfig{}, transport);
    PolicyDecision d = backend.decide(obs, bundle);
    CHECK(d.parse_failures == 0);
    CHECK_FALSE(d.backend_error);
    CHECK(std::get<PickAction>(d.action).object_id == "apple");
    CHECK(d.thought == "Taking the apple.");
    CHECK(transport->calls().size() == 1);
}

TEST_CASE("garbage then valid: one retry with a corrective reprompt") {
    WorldState w = small_world();
    GridMap nav = w.nav_grid();
    auto info = static_furniture_info(w);
    TaskSpec task = PackObjects{{"apple"}, "tray"};
    SceneGraph graph = SceneGraph::initial(w, "bob");
    MemoryBuffer memory;
    Observation obs = make_observation(w, graph, memory, nav, info, task, "bob");
    PromptBundle bundle = serialize_observation(obs);

    auto transport = std::make_shared<ScriptedTransport>(std::vector<std::string>{
        "no block here", "```action\nwait()\n```"});
    ChatModelBackend backend(ChatConfig{}, transport);
    PolicyDecision d = backend.decide(obs, bundle);
    CHECK(d.parse_failures == 1);
    CHECK(is_wait(d.action));
    REQUIRE(transport->calls().size() == 2);
    // the retry appends the assistant's bad reply and a corrective user turn
    const auto& second = transport->calls()[1];
    REQUIRE(second.size() == 4);
    CHECK(second[2].role == "assistant");
    CHECK(second[3].role == "user");
    CHECK(second[3].content.find("could not be executed") != std::string::npos);
}

TEST_CASE("retry exhaustion and transport failures degrade to wait") {
    WorldState w = small_world();
    GridMap nav = w.nav_grid();
    auto info = static_furniture_info(w);
    TaskSpec task = PackObjects{{"apple"}, "tray"};
    SceneGraph graph = SceneGraph::initial(w, "bob");
    MemoryBuffer memory;
    Observation obs = make_observation(w, graph, memory, nav, info, task, "bob");
    PromptBundle bundle = serialize_observation(obs);

    ChatConfig config;
    config.max_retries = 2;
    auto garbage = std::make_shared<ScriptedTransport>(std::vector<std::string>{
        "nope", "still nope", "never"});
    ChatModelBackend backend(config, garbage);
    PolicyDecision d = backend.decide(obs, bundle);
    CHECK(is_wait(d.action));
    CHECK(d.parse_failures == 3);

    // unreachable backend: decide never raises
    auto dead = std::make_shared<ScriptedTransport>(std::vector<std::string>{});
    ChatModelBackend dead_backend(config, dead);
    PolicyDecision dd = dead_backend.decide(obs, bundle);
    CHECK(is_wait(dd.action));
    CHECK(dd.backend_error);

    struct ThrowingTransport : ChatTransport {
        ChatOutcome complete(const std::vector<ChatRequestMessage>&, const ChatConfig&) override {
            throw std::runtime_error("boom");
        }
    };
    ChatModelBackend throwing(config, std::make_shared<ThrowingTransport>());
    PolicyDecision dt = throwing.decide(obs, bundle);
    CHECK(is_wait(dt.action));
    CHECK(dt.backend_error);
}
