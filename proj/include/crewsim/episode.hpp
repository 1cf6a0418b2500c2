#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "crewsim/chat_client.hpp"
#include "crewsim/policy.hpp"
#include "crewsim/scenario.hpp"

namespace crewsim {

struct EpisodeConfig {
    std::string scenario_path;
    /// Set when the scenario file does not embed task objects itself.
    std::optional<TaskRequest> task_request;
    int horizon = 50;
    enum class Policy { Oracle, Chat } policy = Policy::Oracle;
    ChatConfig chat;
    AblationFlags ablations;
    bool no_mobile_robot = false;  // run without david
    bool verbose = false;          // include prompts and chat transcripts in the log
    std::string log_path;
    std::optional<size_t> memory_capacity;
};

struct EpisodeResult {
    bool success = false;
    double partial_success = 0.0;
    int temporal_steps = 0;
    int action_steps = 0;
    int parse_failures = 0;
    std::string log_path;

    bool same_metrics(const EpisodeResult& o) const {
        return success == o.success && partial_success == o.partial_success &&
               temporal_steps == o.temporal_steps && action_steps == o.action_steps &&
               parse_failures == o.parse_failures;
    }
};

/// Test/inspection hooks into the live episode loop. on_graph fires right
/// after a robot's turn with its belief and the ground-truth world at that
/// instant.
struct EpisodeObserver {
    std::function<void(const std::string& robot, int step, const PromptBundle&)> on_prompt;
    std::function<void(const std::string& robot, int step, const SceneGraph&, const WorldState&)>
        on_graph;
    std::function<void(int step, const WorldState&)> on_step_end;
};

using BackendFactory =
    std::function<std::unique_ptr<PolicyBackend>(const std::string& robot_id, RobotRole role)>;

/// One full episode: for every temporal step each robot (alice, bob, david)
/// drains its inbox, updates its scene graph, gets a serialized
/// observation, decides, executes, and appends to memory. Ends early once
/// the goal holds and every robot chose wait within the same step.
EpisodeResult run_episode(const EpisodeConfig& config, const EpisodeObserver* observer = nullptr,
                          const BackendFactory& backend_factory = {});

/// Re-execute a logged episode against the logged initial state and verify
/// feedback, state hashes and metrics match. Throws Error(LogCorrupt) or
/// Error(DriftDetected, step).
EpisodeResult replay_episode(const std::string& log_path);

}  // namespace crewsim
