#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crewsim/action.hpp"
#include "crewsim/feedback.hpp"
#include "crewsim/grid.hpp"
#include "crewsim/task_spec.hpp"

namespace crewsim {

class MessageBus;

enum class FurnitureKind { Table, Counter, Fridge, Cabinet, Drawer, Microwave, TrayStand };

std::string furniture_kind_name(FurnitureKind k);
std::optional<FurnitureKind> furniture_kind_from_name(const std::string& s);

enum class ObjectColor { Red, Blue, Pink, Green, Yellow, Purple };

std::string color_name(ObjectColor c);
std::optional<ObjectColor> color_from_name(const std::string& s);

struct Furniture {
    std::string id;
    FurnitureKind kind = FurnitureKind::Table;
    std::vector<Cell> footprint;
    bool openable = false;
    bool is_open = false;
    std::vector<Pose2D> nav_targets;
    std::vector<std::string> surface_object_ids;    // insertion order = stack order, bottom first
    std::vector<std::string> contained_object_ids;  // only when openable
};

struct Support {
    enum class Kind { OnFurniture, InFurniture, InGripper };
    Kind kind = Kind::OnFurniture;
    std::string holder;  // furniture id or robot id

    friend bool operator==(const Support&, const Support&) = default;
};

struct SimObject {
    std::string id;
    std::string display_name;
    std::string category;
    std::optional<ObjectColor> color;
    Pose2D pose;
    Support support;
};

struct Robot {
    std::string id;  // alice | bob | david
    RobotRole role = RobotRole::Mobile;
    Pose2D base_pose;
    bool mobile = false;
    bool can_manipulate = false;
    std::optional<std::string> holding;       // object id in the gripper
    std::optional<double> reach_radius;       // present iff can_manipulate
};

struct Thresholds {
    double open_radius = 1.0;          // max base-to-furniture distance for open
    double pose_tolerance_m = 0.10;    // arrival position tolerance
    double pose_tolerance_rad = 0.17;  // arrival heading tolerance
    double visibility_radius = 1.0;    // initial local-observation range
};

struct WorldState {
    GridMap grid;  // authored obstacles (walls etc), furniture excluded
    std::map<std::string, Furniture> furniture;
    std::map<std::string, SimObject> objects;
    std::map<std::string, Robot> robots;
    Thresholds thresholds;
    int step = 0;

    /// Occupancy used for navigation: authored obstacles plus every
    /// furniture footprint.
    GridMap nav_grid() const;

    Pose2D furniture_centroid(const Furniture& f) const;
    /// Distance from a pose to the nearest footprint cell center.
    double distance_to_furniture(const Pose2D& from, const Furniture& f) const;
    /// Footprint cell center nearest to a pose (placement point).
    Pose2D nearest_footprint_point(const Pose2D& from, const Furniture& f) const;
};

/// Static layout facts every robot knows a priori (the map): no open
/// states, no contents, no object poses.
struct FurnitureStaticInfo {
    std::string id;
    FurnitureKind kind = FurnitureKind::Table;
    bool openable = false;
    std::vector<Pose2D> nav_targets;
    std::vector<Pose2D> footprint_points;  // cell centers, world coords
    Pose2D centroid;
};

std::map<std::string, FurnitureStaticInfo> static_furniture_info(const WorldState& w);

struct ReachResult {
    bool ok = false;
    double distance = 0.0;
    double dx = 0.0;  // target minus base, signed
    double dy = 0.0;
};

/// Planar reach test for a manipulator. dx/dy are always filled in; the
/// caller decides whether the feedback exposes them.
ReachResult check_reach(const Robot& robot, const Pose2D& target);

struct ExecContext {
    MessageBus* bus = nullptr;        // needed only for send actions
    const TaskSpec* task = nullptr;   // lets bob's wait report task status
};

/// One atomic state transition. Mutates `state` only when the returned
/// feedback is a success variant; every failure (including role-illegal
/// actions) comes back as feedback, never as an exception.
Feedback execute(WorldState& state, const std::string& robot_id, const Action& action,
                 const ExecContext& ctx = {});

/// Relative base translation, path-planned like navigate.
Feedback apply_move(WorldState& state, const std::string& robot_id, double dx, double dy);

}  // namespace crewsim
