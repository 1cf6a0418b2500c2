#pragma once

#include <string>
#include <variant>

#include "crewsim/message.hpp"

namespace crewsim {

enum class RobotRole {
    Mobile,              // david: drives around, no arm
    Manipulation,        // bob: fixed base, arm
    MobileManipulation,  // alice: drives and manipulates
};

std::string role_name(RobotRole r);

struct NavigateAction {
    std::string furniture_id;
    int target_index = 0;
};

struct MoveAction {
    double dx = 0.0;
    double dy = 0.0;
};

struct OpenAction {
    std::string furniture_id;
};

struct PickAction {
    std::string object_id;
};

struct PlaceAction {
    std::string object_id;
    std::string destination;  // furniture id (tray / panels / cutting board are furniture)
};

struct WaitAction {};

struct SendMessageAction {
    std::string recipient;
    MessagePayload payload;
};

using Action = std::variant<NavigateAction, MoveAction, OpenAction, PickAction, PlaceAction,
                            WaitAction, SendMessageAction>;

bool is_wait(const Action& a);

/// Role-filtered legality: mobile robots navigate/move, manipulators
/// pick/place, only mobile manipulators open furniture; wait and send are
/// universal.
bool role_legal(RobotRole role, const Action& a);

/// Action in its command-grammar form, e.g. "pick(apple)" or
/// "send(david, explore: apple, fork)".
std::string render_action(const Action& a);

}  // namespace crewsim
