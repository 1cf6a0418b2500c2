#include "crewsim/serialization.hpp"

#include "crewsim/error.hpp"

namespace crewsim {

void to_json(json& j, const Pose2D& p) { j = json{{"x", p.x}, {"y", p.y}, {"theta", p.theta}}; }

void from_json(const json& j, Pose2D& p) {
    p.x = j.at("x").get<double>();
    p.y = j.at("y").get<double>();
    p.theta = j.value("theta", 0.0);
}

void to_json(json& j, const Cell& c) { j = json::array({c.x, c.y}); }

void from_json(const json& j, Cell& c) {
    c.x = j.at(0).get<int>();
    c.y = j.at(1).get<int>();
}

void to_json(json& j, const GridMap& g) {
    json cells = json::array();
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            if (g.occupied({x, y})) cells.push_back(json::array({x, y}));
        }
    }
    j = json{{"resolution", g.resolution()},
             {"width", g.width()},
             {"height", g.height()},
             {"obstacles", std::move(cells)}};
}

void from_json(const json& j, GridMap& g) {
    double res = j.at("resolution").get<double>();
    int w = j.at("width").get<int>();
    int h = j.at("height").get<int>();
    if (res <= 0.0 || w < 1 || h < 1) {
        throw Error(ErrorCode::ScenarioInvalid, "grid needs resolution > 0 and size >= 1x1");
    }
    g = GridMap(res, w, h);
    for (const auto& c : j.at("obstacles")) {
        Cell cell = c.get<Cell>();
        if (!g.in_bounds(cell)) {
            throw Error(ErrorCode::ScenarioInvalid, "obstacle cell out of bounds");
        }
        g.set_occupied(cell, true);
    }
}

void to_json(json& j, const Furniture& f) {
    j = json{{"id", f.id},
             {"kind", furniture_kind_name(f.kind)},
             {"footprint", f.footprint},
             {"openable", f.openable},
             {"open", f.is_open},
             {"nav_targets", f.nav_targets},
             {"surface", f.surface_object_ids},
             {"contains", f.contained_object_ids}};
}

void from_json(const json& j, Furniture& f) {
    f.id = j.at("id").get<std::string>();
    auto kind = furniture_kind_from_name(j.at("kind").get<std::string>());
    if (!kind) {
        throw Error(ErrorCode::ScenarioInvalid,
                    "unknown furniture kind '" + j.at("kind").get<std::string>() + "'");
    }
    f.kind = *kind;
    f.footprint = j.at("footprint").get<std::vector<Cell>>();
    f.openable = j.value("openable", false);
    f.is_open = j.value("open", false);
    f.nav_targets = j.at("nav_targets").get<std::vector<Pose2D>>();
    f.surface_object_ids = j.value("surface", std::vector<std::string>{});
    f.contained_object_ids = j.value("contains", std::vector<std::string>{});
}

void to_json(json& j, const Support& s) {
    switch (s.kind) {
        case Support::Kind::OnFurniture: j = json{{"type", "on"}, {"id", s.holder}}; return;
        case Support::Kind::InFurniture: j = json{{"type", "in"}, {"id", s.holder}}; return;
        case Support::Kind::InGripper: j = json{{"type", "gripper"}, {"id", s.holder}}; return;
    }
}

void from_json(const json& j, Support& s) {
    std::string t = j.at("type").get<std::string>();
    if (t == "on") s.kind = Support::Kind::OnFurniture;
    else if (t == "in") s.kind = Support::Kind::InFurniture;
    else if (t == "gripper") s.kind = Support::Kind::InGripper;
    else throw Error(ErrorCode::ScenarioInvalid, "unknown support type '" + t + "'");
    s.holder = j.at("id").get<std::string>();
}

void to_json(json& j, const SimObject& o) {
    j = json{{"id", o.id},
             {"display_name", o.display_name},
             {"category", o.category},
             {"pose", o.pose},
             {"support", o.support}};
    if (o.color) j["color"] = color_name(*o.color);
}

void from_json(const json& j, SimObject& o) {
    o.id = j.at("id").get<std::string>();
    o.display_name = j.value("display_name", o.id);
    o.category = j.value("category", o.id);
    o.pose = j.at("pose").get<Pose2D>();
    o.support = j.at("support").get<Support>();
    if (j.contains("color")) {
        auto c = color_from_name(j.at("color").get<std::string>());
        if (!c) {
            throw Error(ErrorCode::ScenarioInvalid,
                        "unknown color '" + j.at("color").get<std::string>() + "'");
        }
        o.color = *c;
    } else {
        o.color.reset();
    }
}

namespace {

RobotRole role_from_name(const std::string& s) {
    if (s == "mobile") return RobotRole::Mobile;
    if (s == "manipulation") return RobotRole::Manipulation;
    if (s == "mobile_manipulation") return RobotRole::MobileManipulation;
    throw Error(ErrorCode::ScenarioInvalid, "unknown robot role '" + s + "'");
}

}  // namespace

void to_json(json& j, const Robot& r) {
    j = json{{"id", r.id}, {"role", role_name(r.role)}, {"base", r.base_pose}};
    if (r.reach_radius) j["reach_radius"] = *r.reach_radius;
    if (r.holding) j["holding"] = *r.holding;
}

void from_json(const json& j, Robot& r) {
    r.id = j.at("id").get<std::string>();
    r.role = role_from_name(j.at("role").get<std::string>());
    r.base_pose = j.at("base").get<Pose2D>();
    r.mobile = r.role != RobotRole::Manipulation;
    r.can_manipulate = r.role != RobotRole::Mobile;
    if (j.contains("reach_radius")) r.reach_radius = j.at("reach_radius").get<double>();
    else r.reach_radius.reset();
    if (j.contains("holding")) r.holding = j.at("holding").get<std::string>();
    else r.holding.reset();
}

void to_json(json& j, const Thresholds& t) {
    j = json{{"open_radius", t.open_radius},
             {"pose_tolerance_m", t.pose_tolerance_m},
             {"pose_tolerance_rad", t.pose_tolerance_rad},
             {"visibility_radius", t.visibility_radius}};
}

void from_json(const json& j, Thresholds& t) {
    t.open_radius = j.value("open_radius", 1.0);
    t.pose_tolerance_m = j.value("pose_tolerance_m", 0.10);
    t.pose_tolerance_rad = j.value("pose_tolerance_rad", 0.17);
    t.visibility_radius = j.value("visibility_radius", 1.0);
}

void to_json(json& j, const WorldState& w) {
    json furniture = json::array();
    for (const auto& [id, f] : w.furniture) furniture.push_back(f);
    json objects = json::array();
    for (const auto& [id, o] : w.objects) objects.push_back(o);
    json robots = json::array();
    for (const auto& [id, r] : w.robots) robots.push_back(r);
    j = json{{"grid", w.grid},
             {"furniture", std::move(furniture)},
             {"objects", std::move(objects)},
             {"robots", std::move(robots)},
             {"thresholds", w.thresholds},
             {"step", w.step}};
}

void from_json(const json& j, WorldState& w) {
    w.grid = j.at("grid").get<GridMap>();
    w.furniture.clear();
    for (const auto& fj : j.at("furniture")) {
        Furniture f = fj.get<Furniture>();
        if (w.furniture.contains(f.id)) {
            throw Error(ErrorCode::ScenarioInvalid, "duplicate furniture id '" + f.id + "'");
        }
        w.furniture[f.id] = std::move(f);
    }
    w.objects.clear();
    for (const auto& oj : j.at("objects")) {
        SimObject o = oj.get<SimObject>();
        if (w.objects.contains(o.id) || w.furniture.contains(o.id)) {
            throw Error(ErrorCode::ScenarioInvalid, "duplicate object id '" + o.id + "'");
        }
        w.objects[o.id] = std::move(o);
    }
    w.robots.clear();
    for (const auto& rj : j.at("robots")) {
        Robot r = rj.get<Robot>();
        if (w.robots.contains(r.id)) {
            throw Error(ErrorCode::ScenarioInvalid, "duplicate robot id '" + r.id + "'");
        }
        w.robots[r.id] = std::move(r);
    }
    w.thresholds = j.value("thresholds", Thresholds{});
    w.step = j.value("step", 0);
}

// ---- actions ----

void to_json(json& j, const Action& a) {
    struct Visitor {
        json& j;
        void operator()(const NavigateAction& x) const {
            j = json{{"type", "navigate"}, {"furniture", x.furniture_id}, {"target", x.target_index}};
        }
        void operator()(const MoveAction& x) const {
            j = json{{"type", "move"}, {"dx", x.dx}, {"dy", x.dy}};
        }
        void operator()(const OpenAction& x) const {
            j = json{{"type", "open"}, {"furniture", x.furniture_id}};
        }
        void operator()(const PickAction& x) const {
            j = json{{"type", "pick"}, {"object", x.object_id}};
        }
        void operator()(const PlaceAction& x) const {
            j = json{{"type", "place"}, {"object", x.object_id}, {"destination", x.destination}};
        }
        void operator()(const WaitAction&) const { j = json{{"type", "wait"}}; }
        void operator()(const SendMessageAction& x) const {
            j = json{{"type", "send"}, {"recipient", x.recipient}, {"payload", x.payload}};
        }
    };
    std::visit(Visitor{j}, a);
}

void from_json(const json& j, Action& a) {
    std::string t = j.at("type").get<std::string>();
    if (t == "navigate") a = NavigateAction{j.at("furniture").get<std::string>(), j.value("target", 0)};
    else if (t == "move") a = MoveAction{j.at("dx").get<double>(), j.at("dy").get<double>()};
    else if (t == "open") a = OpenAction{j.at("furniture").get<std::string>()};
    else if (t == "pick") a = PickAction{j.at("object").get<std::string>()};
    else if (t == "place") a = PlaceAction{j.at("object").get<std::string>(), j.at("destination").get<std::string>()};
    else if (t == "wait") a = WaitAction{};
    else if (t == "send") a = SendMessageAction{j.at("recipient").get<std::string>(), j.at("payload").get<MessagePayload>()};
    else throw Error(ErrorCode::LogCorrupt, "unknown action type '" + t + "'");
}

// ---- messages ----

void to_json(json& j, const MessagePayload& p) {
    struct Visitor {
        json& j;
        void operator()(const ExploreRequest& x) const {
            j = json{{"type", "explore_request"}, {"objects", x.object_names}};
        }
        void operator()(const TransportRequest& x) const {
            j = json{{"type", "transport_request"}, {"object", x.object_name}, {"context", x.context_text}};
        }
        void operator()(const DelegatedExplore& x) const {
            j = json{{"type", "delegated_explore"}, {"furniture", x.furniture_ids}};
        }
        void operator()(const LocationReport& x) const {
            j = json{{"type", "location_report"}, {"object", x.object_name}, {"pose", x.pose}, {"furniture", x.furniture_id}};
        }
        void operator()(const TaskStatusShare& x) const {
            j = json{{"type", "task_status_share"}, {"text", x.text}};
        }
        void operator()(const FreeText& x) const { j = json{{"type", "free_text"}, {"text", x.text}}; }
    };
    std::visit(Visitor{j}, p);
}

void from_json(const json& j, MessagePayload& p) {
    std::string t = j.at("type").get<std::string>();
    if (t == "explore_request") p = ExploreRequest{j.at("objects").get<std::vector<std::string>>()};
    else if (t == "transport_request") p = TransportRequest{j.at("object").get<std::string>(), j.value("context", std::string{})};
    else if (t == "delegated_explore") p = DelegatedExplore{j.at("furniture").get<std::vector<std::string>>()};
    else if (t == "location_report") p = LocationReport{j.at("object").get<std::string>(), j.at("pose").get<Pose2D>(), j.at("furniture").get<std::string>()};
    else if (t == "task_status_share") p = TaskStatusShare{j.at("text").get<std::string>()};
    else if (t == "free_text") p = FreeText{j.at("text").get<std::string>()};
    else throw Error(ErrorCode::LogCorrupt, "unknown payload type '" + t + "'");
}

void to_json(json& j, const Message& m) {
    j = json{{"sender", m.sender},
             {"recipient", m.recipient},
             {"sent_step", m.sent_step},
             {"payload", m.payload}};
    if (m.protocol_warning) j["protocol_warning"] = true;
}

void from_json(const json& j, Message& m) {
    m.sender = j.at("sender").get<std::string>();
    m.recipient = j.at("recipient").get<std::string>();
    m.sent_step = j.at("sent_step").get<int>();
    m.payload = j.at("payload").get<MessagePayload>();
    m.protocol_warning = j.value("protocol_warning", false);
}

// ---- feedback ----

namespace {

std::string nav_reason_tag(NavFailReason r) {
    switch (r) {
        case NavFailReason::InvalidEndpoint: return "invalid_endpoint";
        case NavFailReason::InvalidTarget: return "invalid_target";
        case NavFailReason::PoseDiscrepancy: return "pose_discrepancy";
    }
    return "invalid_endpoint";
}

NavFailReason nav_reason_from_tag(const std::string& s) {
    if (s == "invalid_endpoint") return NavFailReason::InvalidEndpoint;
    if (s == "invalid_target") return NavFailReason::InvalidTarget;
    if (s == "pose_discrepancy") return NavFailReason::PoseDiscrepancy;
    throw Error(ErrorCode::LogCorrupt, "unknown nav failure reason '" + s + "'");
}

}  // namespace

void to_json(json& j, const Feedback& f) {
    struct Visitor {
        json& j;
        void operator()(const NavigationSuccess& x) const {
            json items = json::array();
            for (const auto& s : x.surface_objects) {
                items.push_back(json{{"id", s.object_id}, {"name", s.display_name}});
            }
            j = json{{"type", "navigation_success"}, {"target", x.target},
                     {"target_index", x.target_index}, {"surface", std::move(items)}};
        }
        void operator()(const OpenSuccess& x) const {
            json items = json::array();
            for (const auto& c : x.contents) {
                items.push_back(json{{"id", c.object_id}, {"name", c.display_name}, {"pose", c.pose}});
            }
            j = json{{"type", "open_success"}, {"furniture", x.furniture_id}, {"contents", std::move(items)}};
        }
        void operator()(const MoveSuccess& x) const {
            j = json{{"type", "move_success"}, {"dx", x.dx}, {"dy", x.dy}};
        }
        void operator()(const PickSuccess& x) const {
            j = json{{"type", "pick_success"}, {"object", x.object_id}};
        }
        void operator()(const PlaceSuccess& x) const {
            j = json{{"type", "place_success"}, {"object", x.object_id}, {"location", x.location}, {"pose", x.pose}};
        }
        void operator()(const NavigationFailed& x) const {
            j = json{{"type", "navigation_failed"}, {"reason", nav_reason_tag(x.reason)}, {"detail", x.detail}};
        }
        void operator()(const OpenFailed& x) const {
            j = json{{"type", "open_failed"},
                     {"reason", x.reason == OpenFailReason::OutOfRange ? "out_of_range" : "already_open_or_not_openable"},
                     {"detail", x.detail}};
        }
        void operator()(const MoveFailed& x) const {
            j = json{{"type", "move_failed"}, {"reason", nav_reason_tag(x.reason)}, {"detail", x.detail}};
        }
        void operator()(const PickFailed& x) const {
            std::string reason;
            switch (x.reason) {
                case PickFailReason::GripperOccupied: reason = "gripper_occupied"; break;
                case PickFailReason::UnknownObject: reason = "unknown_object"; break;
                case PickFailReason::InvalidConfiguration: reason = "invalid_configuration"; break;
                case PickFailReason::TooFar: reason = "too_far"; break;
            }
            j = json{{"type", "pick_failed"}, {"reason", reason}, {"object", x.object_id}, {"detail", x.detail}};
            if (x.too_far) {
                json tf{{"distance", x.too_far->distance}};
                if (x.too_far->dx) tf["dx"] = *x.too_far->dx;
                if (x.too_far->dy) tf["dy"] = *x.too_far->dy;
                j["too_far"] = std::move(tf);
            }
        }
        void operator()(const PlaceFailed& x) const {
            std::string reason;
            switch (x.reason) {
                case PlaceFailReason::GripperEmpty: reason = "gripper_empty"; break;
                case PlaceFailReason::ObjectMismatch: reason = "object_mismatch"; break;
                case PlaceFailReason::NotAtTarget: reason = "not_at_target"; break;
            }
            j = json{{"type", "place_failed"}, {"reason", reason}, {"object", x.object_id}, {"detail", x.detail}};
        }
        void operator()(const TaskStatus& x) const {
            j = json{{"type", "task_status"}, {"text", x.text}};
        }
        void operator()(const WaitAck& x) const {
            j = json{{"type", "wait_ack"}};
            if (!x.note.empty()) j["note"] = x.note;
        }
    };
    std::visit(Visitor{j}, f);
}

void from_json(const json& j, Feedback& f) {
    std::string t = j.at("type").get<std::string>();
    if (t == "navigation_success") {
        NavigationSuccess x;
        x.target = j.at("target").get<std::string>();
        x.target_index = j.value("target_index", 0);
        for (const auto& it : j.at("surface")) {
            x.surface_objects.push_back({it.at("id").get<std::string>(), it.at("name").get<std::string>()});
        }
        f = std::move(x);
    } else if (t == "open_success") {
        OpenSuccess x;
        x.furniture_id = j.at("furniture").get<std::string>();
        for (const auto& it : j.at("contents")) {
            x.contents.push_back({it.at("id").get<std::string>(), it.at("name").get<std::string>(),
                                  it.at("pose").get<Pose2D>()});
        }
        f = std::move(x);
    } else if (t == "move_success") {
        f = MoveSuccess{j.at("dx").get<double>(), j.at("dy").get<double>()};
    } else if (t == "pick_success") {
        f = PickSuccess{j.at("object").get<std::string>()};
    } else if (t == "place_success") {
        f = PlaceSuccess{j.at("object").get<std::string>(), j.at("location").get<std::string>(),
                         j.at("pose").get<Pose2D>()};
    } else if (t == "navigation_failed") {
        f = NavigationFailed{nav_reason_from_tag(j.at("reason").get<std::string>()),
                             j.value("detail", std::string{})};
    } else if (t == "open_failed") {
        std::string r = j.at("reason").get<std::string>();
        f = OpenFailed{r == "out_of_range" ? OpenFailReason::OutOfRange
                                           : OpenFailReason::AlreadyOpenOrNotOpenable,
                       j.value("detail", std::string{})};
    } else if (t == "move_failed") {
        f = MoveFailed{nav_reason_from_tag(j.at("reason").get<std::string>()),
                       j.value("detail", std::string{})};
    } else if (t == "pick_failed") {
        PickFailed x;
        std::string r = j.at("reason").get<std::string>();
        if (r == "gripper_occupied") x.reason = PickFailReason::GripperOccupied;
        else if (r == "unknown_object") x.reason = PickFailReason::UnknownObject;
        else if (r == "invalid_configuration") x.reason = PickFailReason::InvalidConfiguration;
        else if (r == "too_far") x.reason = PickFailReason::TooFar;
        else throw Error(ErrorCode::LogCorrupt, "unknown pick failure reason '" + r + "'");
        x.object_id = j.value("object", std::string{});
        x.detail = j.value("detail", std::string{});
        if (j.contains("too_far")) {
            TooFarInfo info;
            info.distance = j.at("too_far").at("distance").get<double>();
            if (j.at("too_far").contains("dx")) info.dx = j.at("too_far").at("dx").get<double>();
            if (j.at("too_far").contains("dy")) info.dy = j.at("too_far").at("dy").get<double>();
            x.too_far = info;
        }
        f = std::move(x);
    } else if (t == "place_failed") {
        PlaceFailed x;
        std::string r = j.at("reason").get<std::string>();
        if (r == "gripper_empty") x.reason = PlaceFailReason::GripperEmpty;
        else if (r == "object_mismatch") x.reason = PlaceFailReason::ObjectMismatch;
        else if (r == "not_at_target") x.reason = PlaceFailReason::NotAtTarget;
        else throw Error(ErrorCode::LogCorrupt, "unknown place failure reason '" + r + "'");
        x.object_id = j.value("object", std::string{});
        x.detail = j.value("detail", std::string{});
        f = std::move(x);
    } else if (t == "task_status") {
        f = TaskStatus{j.at("text").get<std::string>()};
    } else if (t == "wait_ack") {
        f = WaitAck{j.value("note", std::string{})};
    } else {
        throw Error(ErrorCode::LogCorrupt, "unknown feedback type '" + t + "'");
    }
}

// ---- tasks ----

void to_json(json& j, const TaskSpec& t) {
    struct Visitor {
        json& j;
        void operator()(const PackObjects& x) const {
            j = json{{"type", "pack_objects"}, {"objects", x.object_ids}, {"tray", x.tray_id}};
        }
        void operator()(const SortSolids& x) const {
            json pairs = json::array();
            for (const auto& [solid, panel] : x.assignments) {
                pairs.push_back(json{{"solid", solid}, {"panel", panel}});
            }
            j = json{{"type", "sort_solids"}, {"assignments", std::move(pairs)}};
        }
        void operator()(const MakeSandwich& x) const {
            j = json{{"type", "make_sandwich"}, {"menu", x.ordered_ingredient_ids}, {"board", x.board_id}};
        }
    };
    std::visit(Visitor{j}, t);
}

void from_json(const json& j, TaskSpec& t) {
    std::string kind = j.at("type").get<std::string>();
    if (kind == "pack_objects") {
        t = PackObjects{j.at("objects").get<std::vector<std::string>>(), j.at("tray").get<std::string>()};
    } else if (kind == "sort_solids") {
        SortSolids x;
        for (const auto& p : j.at("assignments")) {
            x.assignments.emplace_back(p.at("solid").get<std::string>(), p.at("panel").get<std::string>());
        }
        t = std::move(x);
    } else if (kind == "make_sandwich") {
        t = MakeSandwich{j.at("menu").get<std::vector<std::string>>(), j.at("board").get<std::string>()};
    } else {
        throw Error(ErrorCode::ScenarioInvalid, "unknown task type '" + kind + "'");
    }
}

std::string world_state_canonical(const WorldState& w) { return json(w).dump(); }

}  // namespace crewsim
