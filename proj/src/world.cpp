#include "crewsim/world.hpp"

#include <algorithm>
#include <cmath>

#include "crewsim/comms.hpp"
#include "crewsim/tasks.hpp"

namespace crewsim {

std::string furniture_kind_name(FurnitureKind k) {
    switch (k) {
        case FurnitureKind::Table: return "table";
        case FurnitureKind::Counter: return "counter";
        case FurnitureKind::Fridge: return "fridge";
        case FurnitureKind::Cabinet: return "cabinet";
        case FurnitureKind::Drawer: return "drawer";
        case FurnitureKind::Microwave: return "microwave";
        case FurnitureKind::TrayStand: return "tray-stand";
    }
    return "table";
}

std::optional<FurnitureKind> furniture_kind_from_name(const std::string& s) {
    if (s == "table") return FurnitureKind::Table;
    if (s == "counter") return FurnitureKind::Counter;
    if (s == "fridge") return FurnitureKind::Fridge;
    if (s == "cabinet") return FurnitureKind::Cabinet;
    if (s == "drawer") return FurnitureKind::Drawer;
    if (s == "microwave") return FurnitureKind::Microwave;
    if (s == "tray-stand") return FurnitureKind::TrayStand;
    return std::nullopt;
}

std::string color_name(ObjectColor c) {
    switch (c) {
        case ObjectColor::Red: return "red";
        case ObjectColor::Blue: return "blue";
        case ObjectColor::Pink: return "pink";
        case ObjectColor::Green: return "green";
        case ObjectColor::Yellow: return "yellow";
        case ObjectColor::Purple: return "purple";
    }
    return "red";
}

std::optional<ObjectColor> color_from_name(const std::string& s) {
    if (s == "red") return ObjectColor::Red;
    if (s == "blue") return ObjectColor::Blue;
    if (s == "pink") return ObjectColor::Pink;
    if (s == "green") return ObjectColor::Green;
    if (s == "yellow") return ObjectColor::Yellow;
    if (s == "purple") return ObjectColor::Purple;
    return std::nullopt;
}

GridMap WorldState::nav_grid() const {
    GridMap g = grid;
    for (const auto& [id, f] : furniture) {
        for (Cell c : f.footprint) {
            if (g.in_bounds(c)) g.set_occupied(c, true);
        }
    }
    return g;
}

Pose2D WorldState::furniture_centroid(const Furniture& f) const {
    double sx = 0.0, sy = 0.0;
    if (f.footprint.empty()) return Pose2D{};
    for (Cell c : f.footprint) {
        Pose2D p = grid.cell_center(c);
        sx += p.x;
        sy += p.y;
    }
    double n = static_cast<double>(f.footprint.size());
    return Pose2D{sx / n, sy / n, 0.0};
}

double WorldState::distance_to_furniture(const Pose2D& from, const Furniture& f) const {
    double best = std::numeric_limits<double>::infinity();
    for (Cell c : f.footprint) {
        best = std::min(best, planar_distance(from, grid.cell_center(c)));
    }
    return best;
}

Pose2D WorldState::nearest_footprint_point(const Pose2D& from, const Furniture& f) const {
    Pose2D best{};
    double best_d = std::numeric_limits<double>::infinity();
    Cell best_cell{0, 0};
    bool first = true;
    for (Cell c : f.footprint) {
        Pose2D p = grid.cell_center(c);
        double d = planar_distance(from, p);
        bool better = first || d < best_d ||
                      (d == best_d && (c.y < best_cell.y || (c.y == best_cell.y && c.x < best_cell.x)));
        if (better) {
            best = p;
            best_d = d;
            best_cell = c;
            first = false;
        }
    }
    return best;
}

std::map<std::string, FurnitureStaticInfo> static_furniture_info(const WorldState& w) {
    std::map<std::string, FurnitureStaticInfo> out;
    for (const auto& [id, f] : w.furniture) {
        FurnitureStaticInfo info;
        info.id = id;
        info.kind = f.kind;
        info.openable = f.openable;
        info.nav_targets = f.nav_targets;
        for (Cell c : f.footprint) info.footprint_points.push_back(w.grid.cell_center(c));
        info.centroid = w.furniture_centroid(f);
        out[id] = std::move(info);
    }
    return out;
}

ReachResult check_reach(const Robot& robot, const Pose2D& target) {
    ReachResult r;
    r.dx = target.x - robot.base_pose.x;
    r.dy = target.y - robot.base_pose.y;
    r.distance = std::hypot(r.dx, r.dy);
    double reach = robot.reach_radius.value_or(0.0);
    r.ok = robot.can_manipulate && r.distance <= reach;
    return r;
}

namespace {

// Keeps a carried object co-located with its carrier.
void sync_held_object(WorldState& state, const Robot& robot) {
    if (!robot.holding) return;
    auto it = state.objects.find(*robot.holding);
    if (it != state.objects.end()) it->second.pose = robot.base_pose;
}

std::vector<SurfaceItem> surface_items(const WorldState& state, const Furniture& f) {
    std::vector<SurfaceItem> out;
    for (const auto& oid : f.surface_object_ids) {
        auto it = state.objects.find(oid);
        out.push_back({oid, it == state.objects.end() ? oid : it->second.display_name});
    }
    return out;
}

void detach_from_container(WorldState& state, const std::string& object_id) {
    for (auto& [fid, f] : state.furniture) {
        std::erase(f.surface_object_ids, object_id);
        std::erase(f.contained_object_ids, object_id);
    }
}

struct Executor {
    WorldState& state;
    Robot& robot;
    const ExecContext& ctx;

    Feedback operator()(const NavigateAction& a) {
        if (!robot.mobile) {
            return NavigationFailed{NavFailReason::InvalidTarget,
                                    robot.id + " has no mobile base and cannot navigate"};
        }
        auto fit = state.furniture.find(a.furniture_id);
        if (fit == state.furniture.end()) {
            return NavigationFailed{NavFailReason::InvalidTarget,
                                    "no furniture named '" + a.furniture_id + "' in the scene"};
        }
        const Furniture& f = fit->second;
        if (a.target_index < 0 || static_cast<size_t>(a.target_index) >= f.nav_targets.size()) {
            return NavigationFailed{NavFailReason::InvalidTarget,
                                    "navigation target index " + std::to_string(a.target_index) +
                                        " does not exist for " + a.furniture_id};
        }
        Pose2D target = f.nav_targets[static_cast<size_t>(a.target_index)];
        GridMap nav = state.nav_grid();
        PathResult pr = plan_path(nav, robot.base_pose, target);
        if (!pr.ok()) {
            if (*pr.error == PathError::InvalidEndpoint) {
                return NavigationFailed{NavFailReason::InvalidEndpoint,
                                        "a path endpoint falls on an obstacle or outside the map"};
            }
            return NavigationFailed{NavFailReason::InvalidEndpoint,
                                    "no collision-free path to the target point"};
        }
        Pose2D arrival = nav.cell_center(pr.path->cells.back());
        double gap = planar_distance(arrival, target);
        if (gap > state.thresholds.pose_tolerance_m) {
            return NavigationFailed{NavFailReason::PoseDiscrepancy,
                                    "closest achievable pose is " + fmt2(gap) +
                                        " m from the target point"};
        }
        robot.base_pose = Pose2D{target.x, target.y, normalize_angle(target.theta)};
        sync_held_object(state, robot);
        return NavigationSuccess{a.furniture_id, a.target_index, surface_items(state, f)};
    }

    Feedback operator()(const MoveAction& a) {
        if (!robot.mobile) {
            return MoveFailed{NavFailReason::InvalidTarget,
                              robot.id + " has no mobile base and cannot move"};
        }
        Pose2D dest{robot.base_pose.x + a.dx, robot.base_pose.y + a.dy, robot.base_pose.theta};
        GridMap nav = state.nav_grid();
        PathResult pr = plan_path(nav, robot.base_pose, dest);
        if (!pr.ok()) {
            if (*pr.error == PathError::InvalidEndpoint) {
                return MoveFailed{NavFailReason::InvalidEndpoint,
                                  "the destination falls on an obstacle or outside the map"};
            }
            return MoveFailed{NavFailReason::InvalidEndpoint,
                              "no collision-free path to the destination"};
        }
        Pose2D arrival = nav.cell_center(pr.path->cells.back());
        double gap = planar_distance(arrival, dest);
        if (gap > state.thresholds.pose_tolerance_m) {
            return MoveFailed{NavFailReason::PoseDiscrepancy,
                              "closest achievable pose is " + fmt2(gap) + " m from the destination"};
        }
        robot.base_pose.x = dest.x;
        robot.base_pose.y = dest.y;  // heading unchanged
        sync_held_object(state, robot);
        return MoveSuccess{a.dx, a.dy};
    }

    Feedback operator()(const OpenAction& a) {
        if (robot.role != RobotRole::MobileManipulation) {
            return OpenFailed{OpenFailReason::OutOfRange,
                              robot.id + " cannot operate furniture; any furniture is outside its "
                                         "operational range"};
        }
        auto fit = state.furniture.find(a.furniture_id);
        if (fit == state.furniture.end()) {
            return OpenFailed{OpenFailReason::AlreadyOpenOrNotOpenable,
                              "no furniture named '" + a.furniture_id + "' in the scene"};
        }
        Furniture& f = fit->second;
        if (!f.openable) {
            return OpenFailed{OpenFailReason::AlreadyOpenOrNotOpenable,
                              a.furniture_id + " cannot be opened"};
        }
        if (f.is_open) {
            return OpenFailed{OpenFailReason::AlreadyOpenOrNotOpenable,
                              a.furniture_id + " is already open"};
        }
        double d = state.distance_to_furniture(robot.base_pose, f);
        if (d > state.thresholds.open_radius) {
            return OpenFailed{OpenFailReason::OutOfRange,
                              "distance " + fmt2(d) + " m exceeds the operating range " +
                                  fmt2(state.thresholds.open_radius) + " m"};
        }
        f.is_open = true;
        OpenSuccess ok{a.furniture_id, {}};
        for (const auto& oid : f.contained_object_ids) {
            auto oit = state.objects.find(oid);
            if (oit != state.objects.end()) {
                ok.contents.push_back({oid, oit->second.display_name, oit->second.pose});
            }
        }
        return ok;
    }

    Feedback operator()(const PickAction& a) {
        if (!robot.can_manipulate) {
            return PickFailed{PickFailReason::InvalidConfiguration, a.object_id, std::nullopt,
                              robot.id + " has no manipulator arm"};
        }
        if (robot.holding) {
            return PickFailed{PickFailReason::GripperOccupied, a.object_id, std::nullopt,
                              "already holding " + *robot.holding};
        }
        auto oit = state.objects.find(a.object_id);
        if (oit == state.objects.end()) {
            return PickFailed{PickFailReason::UnknownObject, a.object_id, std::nullopt,
                              "no object named '" + a.object_id + "' is known"};
        }
        SimObject& obj = oit->second;
        if (obj.support.kind == Support::Kind::InGripper) {
            return PickFailed{PickFailReason::InvalidConfiguration, a.object_id, std::nullopt,
                              a.object_id + " is currently held by " + obj.support.holder};
        }
        if (obj.support.kind == Support::Kind::InFurniture) {
            auto fit = state.furniture.find(obj.support.holder);
            if (fit != state.furniture.end() && !fit->second.is_open) {
                return PickFailed{PickFailReason::InvalidConfiguration, a.object_id, std::nullopt,
                                  "the target is inside closed " + obj.support.holder +
                                      "; the arm's target state is invalid"};
            }
        }
        ReachResult rr = check_reach(robot, obj.pose);
        if (!rr.ok) {
            TooFarInfo info;
            info.distance = rr.distance;
            if (robot.role == RobotRole::MobileManipulation) {
                info.dx = rr.dx;
                info.dy = rr.dy;
            }
            return PickFailed{PickFailReason::TooFar, a.object_id, info,
                              "reach radius is " + fmt2(robot.reach_radius.value_or(0.0)) + " m"};
        }
        detach_from_container(state, a.object_id);
        obj.support = Support{Support::Kind::InGripper, robot.id};
        obj.pose = robot.base_pose;
        robot.holding = a.object_id;
        return PickSuccess{a.object_id};
    }

    Feedback operator()(const PlaceAction& a) {
        if (!robot.can_manipulate) {
            return PlaceFailed{PlaceFailReason::GripperEmpty, a.object_id,
                               robot.id + " has no manipulator arm"};
        }
        if (!robot.holding) {
            return PlaceFailed{PlaceFailReason::GripperEmpty, a.object_id,
                               "nothing is in the gripper"};
        }
        if (*robot.holding != a.object_id) {
            return PlaceFailed{PlaceFailReason::ObjectMismatch, a.object_id,
                               "the gripper is holding " + *robot.holding};
        }
        auto fit = state.furniture.find(a.destination);
        if (fit == state.furniture.end()) {
            return PlaceFailed{PlaceFailReason::NotAtTarget, a.object_id,
                               "unknown destination '" + a.destination + "'"};
        }
        Furniture& dest = fit->second;
        if (dest.openable && !dest.is_open) {
            return PlaceFailed{PlaceFailReason::NotAtTarget, a.object_id,
                               a.destination + " is closed"};
        }
        Pose2D point = state.nearest_footprint_point(robot.base_pose, dest);
        double d = planar_distance(robot.base_pose, point);
        if (d > robot.reach_radius.value_or(0.0)) {
            return PlaceFailed{PlaceFailReason::NotAtTarget, a.object_id,
                               "the destination is beyond reach (distance " + fmt2(d) + " m)"};
        }
        auto oit = state.objects.find(a.object_id);
        SimObject& obj = oit->second;  // held objects always exist
        detach_from_container(state, a.object_id);
        if (dest.openable) {
            obj.support = Support{Support::Kind::InFurniture, a.destination};
            dest.contained_object_ids.push_back(a.object_id);
        } else {
            obj.support = Support{Support::Kind::OnFurniture, a.destination};
            dest.surface_object_ids.push_back(a.object_id);
        }
        obj.pose = point;
        robot.holding.reset();
        return PlaceSuccess{a.object_id, a.destination, point};
    }

    Feedback operator()(const WaitAction&) {
        if (ctx.task && robot.role == RobotRole::Manipulation) {
            return task_status(state, *ctx.task);
        }
        return WaitAck{};
    }

    Feedback operator()(const SendMessageAction& a) {
        if (a.recipient == robot.id) {
            return WaitAck{"message not delivered: cannot send to yourself"};
        }
        if (!state.robots.contains(a.recipient)) {
            return WaitAck{"message not delivered: unknown recipient '" + a.recipient + "'"};
        }
        if (!ctx.bus) {
            return WaitAck{"message not delivered: no channel is available"};
        }
        Message msg;
        msg.sender = robot.id;
        msg.recipient = a.recipient;
        msg.sent_step = state.step;
        msg.payload = a.payload;
        ctx.bus->send(msg);
        return WaitAck{"message sent to " + a.recipient};
    }
};

}  // namespace

Feedback execute(WorldState& state, const std::string& robot_id, const Action& action,
                 const ExecContext& ctx) {
    auto rit = state.robots.find(robot_id);
    if (rit == state.robots.end()) {
        return WaitAck{"no robot named '" + robot_id + "'"};
    }
    return std::visit(Executor{state, rit->second, ctx}, action);
}

Feedback apply_move(WorldState& state, const std::string& robot_id, double dx, double dy) {
    return execute(state, robot_id, Action{MoveAction{dx, dy}});
}

}  // namespace crewsim
