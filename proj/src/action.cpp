#include "crewsim/action.hpp"

#include "crewsim/geometry.hpp"

namespace crewsim {

std::string role_name(RobotRole r) {
    switch (r) {
        case RobotRole::Mobile: return "mobile";
        case RobotRole::Manipulation: return "manipulation";
        case RobotRole::MobileManipulation: return "mobile_manipulation";
    }
    return "unknown";
}

bool is_wait(const Action& a) { return std::holds_alternative<WaitAction>(a); }

bool role_legal(RobotRole role, const Action& a) {
    struct Visitor {
        RobotRole role;
        bool operator()(const NavigateAction&) const { return role != RobotRole::Manipulation; }
        bool operator()(const MoveAction&) const { return role != RobotRole::Manipulation; }
        bool operator()(const OpenAction&) const { return role == RobotRole::MobileManipulation; }
        bool operator()(const PickAction&) const { return role != RobotRole::Mobile; }
        bool operator()(const PlaceAction&) const { return role != RobotRole::Mobile; }
        bool operator()(const WaitAction&) const { return true; }
        bool operator()(const SendMessageAction&) const { return true; }
    };
    return std::visit(Visitor{role}, a);
}

std::string render_action(const Action& a) {
    struct Visitor {
        std::string operator()(const NavigateAction& x) const {
            if (x.target_index == 0) return "navigate(" + x.furniture_id + ")";
            return "navigate(" + x.furniture_id + ", " + std::to_string(x.target_index) + ")";
        }
        std::string operator()(const MoveAction& x) const {
            return "move(" + fmt2(x.dx) + ", " + fmt2(x.dy) + ")";
        }
        std::string operator()(const OpenAction& x) const { return "open(" + x.furniture_id + ")"; }
        std::string operator()(const PickAction& x) const { return "pick(" + x.object_id + ")"; }
        std::string operator()(const PlaceAction& x) const {
            return "place(" + x.object_id + ", " + x.destination + ")";
        }
        std::string operator()(const WaitAction&) const { return "wait()"; }
        std::string operator()(const SendMessageAction& x) const {
            return "send(" + x.recipient + ", " + payload_to_wire(x.payload) + ")";
        }
    };
    return std::visit(Visitor{}, a);
}

}  // namespace crewsim
