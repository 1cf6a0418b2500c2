#include "crewsim/feedback.hpp"

namespace crewsim {

bool is_success_feedback(const Feedback& f) {
    return std::holds_alternative<NavigationSuccess>(f) || std::holds_alternative<OpenSuccess>(f) ||
           std::holds_alternative<MoveSuccess>(f) || std::holds_alternative<PickSuccess>(f) ||
           std::holds_alternative<PlaceSuccess>(f);
}

std::string feedback_variant_name(const Feedback& f) {
    struct Visitor {
        std::string operator()(const NavigationSuccess&) const { return "navigation_success"; }
        std::string operator()(const OpenSuccess&) const { return "open_success"; }
        std::string operator()(const MoveSuccess&) const { return "move_success"; }
        std::string operator()(const PickSuccess&) const { return "pick_success"; }
        std::string operator()(const PlaceSuccess&) const { return "place_success"; }
        std::string operator()(const NavigationFailed&) const { return "navigation_failed"; }
        std::string operator()(const OpenFailed&) const { return "open_failed"; }
        std::string operator()(const MoveFailed&) const { return "move_failed"; }
        std::string operator()(const PickFailed&) const { return "pick_failed"; }
        std::string operator()(const PlaceFailed&) const { return "place_failed"; }
        std::string operator()(const TaskStatus&) const { return "task_status"; }
        std::string operator()(const WaitAck&) const { return "wait_ack"; }
    };
    return std::visit(Visitor{}, f);
}

std::string nav_fail_reason_text(NavFailReason r) {
    switch (r) {
        case NavFailReason::InvalidEndpoint:
            return "the start or end point falls on an obstacle, exceeds the map boundary, or no "
                   "collision-free path exists";
        case NavFailReason::InvalidTarget:
            return "the target is not a valid navigation target";
        case NavFailReason::PoseDiscrepancy:
            return "the achievable pose differs from the target pose beyond the acceptable "
                   "threshold";
    }
    return "unknown";
}

namespace {

std::string with_detail(std::string text, const std::string& detail) {
    if (!detail.empty()) text += " (" + detail + ")";
    text += ".";
    return text;
}

}  // namespace

std::string render_feedback(const Feedback& f) {
    struct Visitor {
        std::string operator()(const NavigationSuccess& x) const {
            std::string s = "Navigation succeeded: arrived at the target point of " + x.target +
                            " (target " + std::to_string(x.target_index) + ").";
            if (x.surface_objects.empty()) {
                s += " Nothing is on its surface.";
            } else {
                s += " Objects on its surface:";
                for (size_t i = 0; i < x.surface_objects.size(); ++i) {
                    s += (i ? ", " : " ") + x.surface_objects[i].display_name + " (" +
                         x.surface_objects[i].object_id + ")";
                }
                s += ".";
            }
            return s;
        }
        std::string operator()(const OpenSuccess& x) const {
            std::string s = "Successfully opened " + x.furniture_id + ".";
            if (x.contents.empty()) {
                s += " It is empty.";
            } else {
                s += " Inside:";
                for (size_t i = 0; i < x.contents.size(); ++i) {
                    s += (i ? "; " : " ") + x.contents[i].display_name + " (" +
                         x.contents[i].object_id + ") at " + fmt_pose(x.contents[i].pose);
                }
                s += ".";
            }
            return s;
        }
        std::string operator()(const MoveSuccess& x) const {
            return "Move succeeded: base displaced by dx=" + fmt2(x.dx) + " m and dy=" +
                   fmt2(x.dy) + " m.";
        }
        std::string operator()(const PickSuccess& x) const {
            return "Successfully picked " + x.object_id + "; it is now in the gripper.";
        }
        std::string operator()(const PlaceSuccess& x) const {
            return "Successfully placed " + x.object_id + " at " + x.location + " " +
                   fmt_pose(x.pose) + ".";
        }
        std::string operator()(const NavigationFailed& x) const {
            return with_detail("Navigation failed: " + nav_fail_reason_text(x.reason), x.detail);
        }
        std::string operator()(const OpenFailed& x) const {
            switch (x.reason) {
                case OpenFailReason::AlreadyOpenOrNotOpenable:
                    return with_detail(
                        "Open failed: the target is already open or cannot be opened", x.detail);
                case OpenFailReason::OutOfRange:
                    return with_detail(
                        "Open failed: the target is beyond the robot's operational range",
                        x.detail);
            }
            return "Open failed.";
        }
        std::string operator()(const MoveFailed& x) const {
            return with_detail("Move failed: " + nav_fail_reason_text(x.reason), x.detail);
        }
        std::string operator()(const PickFailed& x) const {
            std::string head = "Pick of " + (x.object_id.empty() ? "object" : x.object_id);
            switch (x.reason) {
                case PickFailReason::GripperOccupied:
                    return with_detail(head + " failed: the gripper is already holding another object",
                                       x.detail);
                case PickFailReason::UnknownObject:
                    return with_detail(head + " failed: no information about this object", x.detail);
                case PickFailReason::InvalidConfiguration:
                    return with_detail(head + " failed: the arm configuration for this target is invalid",
                                       x.detail);
                case PickFailReason::TooFar: {
                    std::string s = head + " failed: the target is too far from the gripper; distance " +
                                    fmt2(x.too_far ? x.too_far->distance : 0.0) + " m exceeds the reach";
                    if (x.too_far && x.too_far->dx && x.too_far->dy) {
                        s += ". Base-to-target offset: dx=" + fmt2(*x.too_far->dx) + " m, dy=" +
                             fmt2(*x.too_far->dy) + " m";
                    }
                    return with_detail(s, x.detail);
                }
            }
            return "Pick failed.";
        }
        std::string operator()(const PlaceFailed& x) const {
            std::string head = "Place of " + (x.object_id.empty() ? "object" : x.object_id);
            switch (x.reason) {
                case PlaceFailReason::GripperEmpty:
                    return with_detail(head + " failed: the gripper is empty", x.detail);
                case PlaceFailReason::ObjectMismatch:
                    return with_detail(
                        head + " failed: the gripper is holding a different object", x.detail);
                case PlaceFailReason::NotAtTarget:
                    return with_detail(
                        head + " failed: the object could not be placed at the target location",
                        x.detail);
            }
            return "Place failed.";
        }
        std::string operator()(const TaskStatus& x) const { return "Task status: " + x.text; }
        std::string operator()(const WaitAck& x) const {
            if (x.note.empty()) return "Wait acknowledged; nothing changed.";
            return "Acknowledged: " + x.note;
        }
    };
    return std::visit(Visitor{}, f);
}

}  // namespace crewsim
