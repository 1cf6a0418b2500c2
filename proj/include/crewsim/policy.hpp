#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crewsim/action.hpp"
#include "crewsim/memory.hpp"
#include "crewsim/scenegraph.hpp"
#include "crewsim/task_spec.hpp"
#include "crewsim/world.hpp"

namespace crewsim {

struct PromptBundle {
    std::string system_text;  // constant across an episode for a robot
    std::string user_text;    // rebuilt every step
};

struct AblationFlags {
    bool no_feedback = false;
    bool no_history = false;
};

/// Everything a policy may look at when choosing an action. Pointers refer
/// to harness-owned state and stay valid for the duration of one decide
/// call. Note there is no ground-truth object table here: policies only see
/// the robot's own belief.
struct Observation {
    std::string robot_id;
    RobotRole role = RobotRole::Mobile;
    const Robot* robot = nullptr;
    const SceneGraph* graph = nullptr;
    const MemoryBuffer* memory = nullptr;
    std::vector<Message> new_messages;
    const TaskSpec* task = nullptr;
    const GridMap* nav_grid = nullptr;  // static map knowledge (walls + furniture)
    const std::map<std::string, FurnitureStaticInfo>* furniture_info = nullptr;
    Thresholds thresholds;
    int step = 0;
};

/// Constant per-robot system prompt.
std::string system_prompt(const std::string& robot_id, RobotRole role);

/// Legal action list with argument syntax, as shown in prompts.
std::string action_syntax(RobotRole role);

/// Deterministic user prompt: task, scene graph, robot status, new
/// messages, memory, legal actions, response-format instruction — in that
/// fixed order.
PromptBundle serialize_observation(const Observation& obs, const AblationFlags& ablations = {});

struct ParseFailure {
    enum class Reason { NoActionBlock, Malformed, UnknownAction, RoleIllegal };
    Reason reason = Reason::NoActionBlock;
    std::string detail;
};

std::string parse_failure_text(const ParseFailure& pf);

using ParseResult = std::variant<Action, ParseFailure>;

/// Extract the last fenced ```action block and parse the command grammar:
/// navigate(<furniture>[, <k>]) | move(<dx>, <dy>) | open(<furniture>) |
/// pick(<object>) | place(<object>, <destination>) | wait() |
/// send(<recipient>, <payload-or-text>).
ParseResult parse_action(const std::string& raw_output, RobotRole role);

/// Parse the send-payload mini grammar ("explore: a, b", "transport: x |
/// ctx", "delegate: f1, f2", "found: x @ (1.00, 2.00) at f", "status: s");
/// anything else becomes FreeText.
MessagePayload parse_payload_wire(const std::string& text);

struct PolicyDecision {
    std::string thought;     // free text, logged, never executed
    Action action = WaitAction{};
    std::string raw_output;  // exact backend output (last attempt)
    int parse_failures = 0;  // failed attempts before this decision
    bool backend_error = false;
};

class PolicyBackend {
public:
    virtual ~PolicyBackend() = default;
    /// Must be total: failures degrade to a logged Wait, never an exception.
    virtual PolicyDecision decide(const Observation& obs, const PromptBundle& bundle) = 0;
};

}  // namespace crewsim
