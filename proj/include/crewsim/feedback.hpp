#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crewsim/geometry.hpp"

namespace crewsim {

// The closed feedback taxonomy the planner replans from. Failure variants
// carry an enumerated reason plus an optional free-form detail that only
// affects rendering.

struct SurfaceItem {
    std::string object_id;
    std::string display_name;
};

struct ContentItem {
    std::string object_id;
    std::string display_name;
    Pose2D pose;
};

struct NavigationSuccess {
    std::string target;  // furniture id
    int target_index = 0;
    std::vector<SurfaceItem> surface_objects;
};

struct OpenSuccess {
    std::string furniture_id;
    std::vector<ContentItem> contents;
};

struct MoveSuccess {
    double dx = 0.0;
    double dy = 0.0;
};

struct PickSuccess {
    std::string object_id;
};

struct PlaceSuccess {
    std::string object_id;
    std::string location;
    Pose2D pose;  // where the object ended up
};

enum class NavFailReason {
    InvalidEndpoint,  // endpoint on an obstacle / outside the map / unreachable
    InvalidTarget,    // unknown target, or the robot cannot navigate at all
    PoseDiscrepancy,  // arrival pose differs from the target beyond tolerance
};

struct NavigationFailed {
    NavFailReason reason = NavFailReason::InvalidTarget;
    std::string detail;
};

enum class OpenFailReason {
    AlreadyOpenOrNotOpenable,
    OutOfRange,
};

struct OpenFailed {
    OpenFailReason reason = OpenFailReason::AlreadyOpenOrNotOpenable;
    std::string detail;
};

struct MoveFailed {
    NavFailReason reason = NavFailReason::InvalidEndpoint;
    std::string detail;
};

struct TooFarInfo {
    double distance = 0.0;
    // Base-to-target offsets; present only for mobile manipulators, which
    // can act on them with a move.
    std::optional<double> dx;
    std::optional<double> dy;
};

enum class PickFailReason {
    GripperOccupied,
    UnknownObject,
    InvalidConfiguration,
    TooFar,
};

struct PickFailed {
    PickFailReason reason = PickFailReason::UnknownObject;
    std::string object_id;
    std::optional<TooFarInfo> too_far;
    std::string detail;
};

enum class PlaceFailReason {
    GripperEmpty,
    ObjectMismatch,
    NotAtTarget,
};

struct PlaceFailed {
    PlaceFailReason reason = PlaceFailReason::GripperEmpty;
    std::string object_id;
    std::string detail;
};

struct TaskStatus {
    std::string text;
};

struct WaitAck {
    /// Empty for a plain wait; message sends use this for their
    /// acknowledgment ("message sent to david" etc).
    std::string note;
};

using Feedback = std::variant<NavigationSuccess, OpenSuccess, MoveSuccess, PickSuccess,
                              PlaceSuccess, NavigationFailed, OpenFailed, MoveFailed, PickFailed,
                              PlaceFailed, TaskStatus, WaitAck>;

bool is_success_feedback(const Feedback& f);
std::string feedback_variant_name(const Feedback& f);

/// Deterministic one-paragraph rendering; numbers use two decimals.
std::string render_feedback(const Feedback& f);

std::string nav_fail_reason_text(NavFailReason r);

}  // namespace crewsim
