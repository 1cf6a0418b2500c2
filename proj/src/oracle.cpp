#include "crewsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crewsim {

namespace {

constexpr double kAtPoseEps = 1e-9;

bool at_pose(const Pose2D& a, const Pose2D& b) {
    return std::abs(a.x - b.x) < kAtPoseEps && std::abs(a.y - b.y) < kAtPoseEps;
}

const Feedback* last_feedback(const Observation& obs) {
    if (!obs.memory || obs.memory->feedback_log.empty()) return nullptr;
    return &obs.memory->feedback_log.back().second;
}

bool completion_text(const std::string& text) {
    return text.find("task complete") != std::string::npos;
}

int nearest_nav_index(const FurnitureStaticInfo& info, const Pose2D& to) {
    int best = 0;
    double best_d = std::numeric_limits<double>::max();
    for (size_t i = 0; i < info.nav_targets.size(); ++i) {
        double d = planar_distance(info.nav_targets[i], to);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

PolicyDecision make_decision(Action action) {
    PolicyDecision d;
    d.action = std::move(action);
    d.thought = "(scripted)";
    d.raw_output = "```action\n" + render_action(d.action) + "\n```";
    return d;
}

}  // namespace

OracleBackend::OracleBackend(std::string robot_id, bool david_present)
    : id_(std::move(robot_id)), david_present_(david_present) {}

PolicyDecision OracleBackend::decide(const Observation& obs, const PromptBundle&) {
    Action action = WaitAction{};
    if (obs.task && obs.graph && obs.memory && obs.robot) {
        if (id_ == "bob") action = decide_bob(obs);
        else if (id_ == "alice") action = decide_alice(obs);
        else if (id_ == "david") action = decide_david(obs);
    }
    return make_decision(std::move(action));
}

std::string OracleBackend::work_surface_id(const Observation& obs) const {
    if (!obs.furniture_info || !obs.task) return "";
    auto dests = task_destination_ids(*obs.task);
    auto is_dest = [&](const std::string& id) {
        return std::find(dests.begin(), dests.end(), id) != dests.end();
    };
    // the non-destination surface whose footprint hosts a destination cell
    for (const auto& [id, info] : *obs.furniture_info) {
        if (info.openable || is_dest(id)) continue;
        for (const auto& d : dests) {
            auto dit = obs.furniture_info->find(d);
            if (dit == obs.furniture_info->end() || dit->second.footprint_points.empty()) continue;
            const Pose2D& probe = dit->second.footprint_points.front();
            for (const auto& p : info.footprint_points) {
                if (at_pose(p, probe)) return id;
            }
        }
    }
    // fallback: nearest non-destination surface to the first destination
    std::string best;
    double best_d = std::numeric_limits<double>::max();
    for (const auto& [id, info] : *obs.furniture_info) {
        if (info.openable || is_dest(id)) continue;
        for (const auto& d : dests) {
            auto dit = obs.furniture_info->find(d);
            if (dit == obs.furniture_info->end()) continue;
            double dist = planar_distance(info.centroid, dit->second.centroid);
            if (dist < best_d) {
                best_d = dist;
                best = id;
            }
        }
    }
    return best;
}

bool OracleBackend::object_placed(const Observation& obs, const std::string& object_id) const {
    const Relation* rel = obs.graph->relation_of(object_id);
    if (!rel) return false;
    if (const auto* pack = std::get_if<PackObjects>(obs.task)) {
        return rel->parent == pack->tray_id;
    }
    if (const auto* sort = std::get_if<SortSolids>(obs.task)) {
        for (const auto& [solid, panel] : sort->assignments) {
            if (solid == object_id) return rel->parent == panel;
        }
        return false;
    }
    if (const auto* sandwich = std::get_if<MakeSandwich>(obs.task)) {
        return rel->parent == sandwich->board_id;
    }
    return false;
}

bool OracleBackend::all_objects_placed(const Observation& obs) const {
    for (const auto& oid : task_object_ids(*obs.task)) {
        if (!object_placed(obs, oid)) return false;
    }
    return true;
}

// ---------------------------------------------------------------- bob ----

Action OracleBackend::decide_bob(const Observation& obs) {
    const Robot& self = *obs.robot;
    const std::string surface = work_surface_id(obs);

    if (const Feedback* fb = last_feedback(obs)) {
        if (const auto* pf = std::get_if<PickFailed>(fb)) {
            if (pf->reason == PickFailReason::TooFar) distrusted_.insert(pf->object_id);
        }
    }
    for (const auto& m : obs.new_messages) {
        if (const auto* report = std::get_if<LocationReport>(&m.payload)) {
            distrusted_.erase(report->object_name);
        }
    }

    if (all_objects_placed(obs)) {
        if (david_present_ && !completion_sent_) {
            completion_sent_ = true;
            return SendMessageAction{"david", TaskStatusShare{"task complete"}};
        }
        return WaitAction{};
    }

    auto ids = task_object_ids(*obs.task);

    // something in hand: put it where it belongs
    if (self.holding) {
        const std::string& held = *self.holding;
        if (const auto* pack = std::get_if<PackObjects>(obs.task)) {
            if (std::find(pack->object_ids.begin(), pack->object_ids.end(), held) !=
                pack->object_ids.end()) {
                return PlaceAction{held, pack->tray_id};
            }
        } else if (const auto* sort = std::get_if<SortSolids>(obs.task)) {
            for (const auto& [solid, panel] : sort->assignments) {
                if (solid == held) return PlaceAction{held, panel};
            }
        } else if (const auto* sandwich = std::get_if<MakeSandwich>(obs.task)) {
            for (const auto& oid : sandwich->ordered_ingredient_ids) {
                if (object_placed(obs, oid)) continue;
                if (oid == held) return PlaceAction{held, sandwich->board_id};
                break;  // held object is not the next ingredient
            }
        }
        return PlaceAction{held, surface};  // wrong object in hand: put it down
    }

    // pick candidates (sandwich: strictly the next unplaced menu item)
    std::vector<std::string> candidates;
    if (const auto* sandwich = std::get_if<MakeSandwich>(obs.task)) {
        for (const auto& oid : sandwich->ordered_ingredient_ids) {
            if (!object_placed(obs, oid)) {
                candidates.push_back(oid);
                break;
            }
        }
    } else {
        for (const auto& oid : ids) {
            if (!object_placed(obs, oid)) candidates.push_back(oid);
        }
    }

    for (const auto& oid : candidates) {
        if (distrusted_.count(oid)) continue;
        const SceneNode* node = obs.graph->node(oid);
        const Relation* rel = obs.graph->relation_of(oid);
        if (!node || !rel) continue;
        const SceneNode* parent = obs.graph->node(rel->parent);
        if (parent && parent->open_state.has_value() && !*parent->open_state) continue;
        if (planar_distance(self.base_pose, node->pose) <= self.reach_radius.value_or(0.0)) {
            return PickAction{oid};
        }
    }

    // unknown objects: one batched explore request
    if (!explore_requested_) {
        std::vector<std::string> unknown;
        for (const auto& oid : ids) {
            if (object_placed(obs, oid)) continue;
            if (!obs.graph->node(oid) || !obs.graph->relation_of(oid)) unknown.push_back(oid);
        }
        if (!unknown.empty()) {
            explore_requested_ = true;
            return SendMessageAction{"alice", ExploreRequest{unknown}};
        }
    }

    // known but out of reach: ask for transport, one object per turn
    for (const auto& oid : ids) {
        if (object_placed(obs, oid) || transport_requested_.count(oid)) continue;
        const SceneNode* node = obs.graph->node(oid);
        const Relation* rel = obs.graph->relation_of(oid);
        if (!node || !rel) continue;
        bool out_of_reach = distrusted_.count(oid) ||
                            planar_distance(self.base_pose, node->pose) >
                                self.reach_radius.value_or(0.0);
        if (out_of_reach) {
            transport_requested_.insert(oid);
            return SendMessageAction{
                "alice", TransportRequest{oid, "it is beyond my reach at " + fmt_pose(node->pose)}};
        }
    }

    return WaitAction{};
}

// -------------------------------------------------------------- alice ----

void OracleBackend::alice_enqueue_fetch(const Observation& obs, const std::string& object_id) {
    if (fetch_seen_.count(object_id) || object_placed(obs, object_id)) return;
    auto ids = task_object_ids(*obs.task);
    if (std::find(ids.begin(), ids.end(), object_id) == ids.end()) return;
    fetch_seen_.insert(object_id);
    Job j;
    j.kind = Job::Kind::Fetch;
    j.phase = Job::Phase::GoToSource;
    j.target = object_id;
    jobs_.push_back(std::move(j));
}

void OracleBackend::alice_ensure_plans(const Observation& obs) {
    if (plans_made_ || !obs.furniture_info) return;
    plans_made_ = true;

    auto dests = task_destination_ids(*obs.task);
    const std::string surface = work_surface_id(obs);
    std::vector<std::string> openables;
    std::vector<std::string> surfaces;
    for (const auto& [id, info] : *obs.furniture_info) {  // sorted by id
        if (info.openable) {
            const SceneNode* n = obs.graph->node(id);
            if (n && n->open_state.has_value() && !*n->open_state) openables.push_back(id);
        } else {
            bool is_dest = std::find(dests.begin(), dests.end(), id) != dests.end();
            if (!is_dest && id != surface) surfaces.push_back(id);
        }
    }
    for (const auto& f : openables) {
        if (open_seen_.insert(f).second) {
            Job j;
            j.kind = Job::Kind::Open;
            j.phase = Job::Phase::GoToSource;
            j.target = f;
            jobs_.push_back(std::move(j));
        }
    }
    if (david_present_) {
        if (!surfaces.empty()) {
            delegation_pending_ = true;
            delegation_list_ = surfaces;
        }
    } else {
        for (const auto& f : surfaces) {
            if (survey_seen_.insert(f).second) {
                Job j;
                j.kind = Job::Kind::Survey;
                j.phase = Job::Phase::GoToSource;
                j.target = f;
                jobs_.push_back(std::move(j));
            }
        }
    }
}

void OracleBackend::alice_ingest_messages(const Observation& obs) {
    for (const auto& m : obs.new_messages) {
        if (const auto* explore = std::get_if<ExploreRequest>(&m.payload)) {
            for (const auto& name : explore->object_names) {
                if (obs.graph->node(name) && obs.graph->relation_of(name)) {
                    alice_enqueue_fetch(obs, name);
                } else {
                    pending_explore_.insert(name);
                }
            }
        } else if (const auto* transport = std::get_if<TransportRequest>(&m.payload)) {
            if (obs.graph->node(transport->object_name) &&
                obs.graph->relation_of(transport->object_name)) {
                alice_enqueue_fetch(obs, transport->object_name);
            } else {
                pending_explore_.insert(transport->object_name);
            }
        } else if (const auto* report = std::get_if<LocationReport>(&m.payload)) {
            pending_explore_.erase(report->object_name);
            alice_enqueue_fetch(obs, report->object_name);
        } else if (const auto* share = std::get_if<TaskStatusShare>(&m.payload)) {
            if (completion_text(share->text)) terminal_ = true;
        }
    }
    if (!pending_explore_.empty() || !jobs_.empty()) alice_ensure_plans(obs);
}

void OracleBackend::alice_ingest_feedback(const Observation& obs) {
    const Feedback* fb = last_feedback(obs);
    if (!fb) return;

    if (const auto* open = std::get_if<OpenSuccess>(fb)) {
        for (const auto& item : open->contents) {
            pending_explore_.erase(item.object_id);
            alice_enqueue_fetch(obs, item.object_id);
        }
        if (!jobs_.empty() && jobs_.front().kind == Job::Kind::Open &&
            jobs_.front().target == open->furniture_id) {
            jobs_.pop_front();
        }
        return;
    }
    if (jobs_.empty()) return;
    Job& j = jobs_.front();

    if (const auto* nav = std::get_if<NavigationSuccess>(fb)) {
        if (j.kind == Job::Kind::Survey && j.target == nav->target) {
            for (const auto& item : nav->surface_objects) {
                pending_explore_.erase(item.object_id);
                alice_enqueue_fetch(obs, item.object_id);
            }
            jobs_.pop_front();
            return;
        }
        if (j.phase == Job::Phase::GoToSource) {
            j.phase = j.kind == Job::Kind::Open ? Job::Phase::OpenNow : Job::Phase::PickNow;
        } else if (j.phase == Job::Phase::Carry) {
            j.phase = Job::Phase::PlaceNow;
        }
        return;
    }
    if (std::get_if<NavigationFailed>(fb)) {
        if (j.kind == Job::Kind::Survey) {
            jobs_.pop_front();  // unreachable shelf etc: skip
            return;
        }
        if (j.phase == Job::Phase::GoToSource || j.phase == Job::Phase::Carry) {
            ++j.nav_tries;
            j.nav_index = -1;
            if (j.nav_tries > 3) jobs_.pop_front();
        }
        return;
    }
    if (const auto* opened = std::get_if<OpenFailed>(fb)) {
        if (j.kind == Job::Kind::Open) {
            if (opened->reason == OpenFailReason::OutOfRange && j.nav_tries <= 3) {
                ++j.nav_tries;
                j.nav_index = -1;
                j.phase = Job::Phase::GoToSource;
            } else {
                jobs_.pop_front();  // already open (fine) or hopeless
            }
        }
        return;
    }
    if (const auto* pick = std::get_if<PickSuccess>(fb)) {
        if (j.kind == Job::Kind::Fetch && j.target == pick->object_id) {
            j.phase = Job::Phase::Carry;
            j.nav_index = -1;
            j.nav_tries = 0;
        }
        return;
    }
    if (const auto* pickf = std::get_if<PickFailed>(fb)) {
        if (j.kind != Job::Kind::Fetch || j.target != pickf->object_id) return;
        if (pickf->reason == PickFailReason::TooFar && pickf->too_far && pickf->too_far->dx &&
            pickf->too_far->dy && j.move_attempts < 2) {
            ++j.move_attempts;
            j.pending_dx = *pickf->too_far->dx;
            j.pending_dy = *pickf->too_far->dy;
            j.phase = Job::Phase::AdjustBase;
        } else if (pickf->reason == PickFailReason::InvalidConfiguration) {
            const Relation* rel = obs.graph->relation_of(j.target);
            if (rel && !rel->parent.empty()) {
                // inside something closed: open it first
                pending_explore_.insert(j.target);  // keep the open from being pruned
                j.phase = Job::Phase::GoToSource;
                j.nav_index = -1;
                Job open;
                open.kind = Job::Kind::Open;
                open.phase = Job::Phase::GoToSource;
                open.target = rel->parent;
                jobs_.push_front(std::move(open));
            } else {
                jobs_.pop_front();
            }
        } else if (pickf->reason == PickFailReason::TooFar) {
            ++j.nav_tries;
            j.nav_index = -1;
            j.move_attempts = 0;
            j.phase = Job::Phase::GoToSource;
            if (j.nav_tries > 3) jobs_.pop_front();
        } else {
            jobs_.pop_front();
        }
        return;
    }
    if (std::get_if<MoveSuccess>(fb) || std::get_if<MoveFailed>(fb)) {
        if (j.phase == Job::Phase::AdjustBase) j.phase = Job::Phase::PickNow;
        return;
    }
    if (const auto* place = std::get_if<PlaceSuccess>(fb)) {
        if (j.kind == Job::Kind::Fetch && j.target == place->object_id) {
            j.drop_pose = place->pose;
            j.phase = Job::Phase::Report;
        }
        return;
    }
    if (const auto* placef = std::get_if<PlaceFailed>(fb)) {
        if (j.kind == Job::Kind::Fetch && j.target == placef->object_id) {
            j.phase = Job::Phase::Carry;  // re-approach the work surface
            j.nav_index = -1;
        }
        return;
    }
}

bool OracleBackend::alice_advance_front(const Observation& obs) {
    while (!jobs_.empty()) {
        Job& j = jobs_.front();
        if (j.kind == Job::Kind::Open) {
            const SceneNode* n = obs.graph->node(j.target);
            bool already_open = n && n->open_state.has_value() && *n->open_state;
            if (already_open || pending_explore_.empty()) {
                jobs_.pop_front();
                continue;
            }
        } else if (j.kind == Job::Kind::Fetch) {
            if (object_placed(obs, j.target)) {
                jobs_.pop_front();
                continue;
            }
            if (j.phase == Job::Phase::GoToSource && !obs.graph->relation_of(j.target)) {
                // location unknown: postpone until someone reports it
                pending_explore_.insert(j.target);
                fetch_seen_.erase(j.target);
                jobs_.pop_front();
                continue;
            }
        } else if (j.kind == Job::Kind::Survey) {
            if (pending_explore_.empty()) {
                jobs_.pop_front();  // nothing left to look for
                continue;
            }
        }
        return true;
    }
    return false;
}

Action OracleBackend::decide_alice(const Observation& obs) {
    alice_ingest_messages(obs);
    alice_ingest_feedback(obs);

    if (terminal_) return WaitAction{};

    if (delegation_pending_) {
        delegation_pending_ = false;
        return SendMessageAction{"david", DelegatedExplore{delegation_list_}};
    }

    const Robot& self = *obs.robot;
    const auto& info = *obs.furniture_info;

    // act on the front job; phases that are already satisfied fall through
    for (int guard = 0; guard < 6; ++guard) {
        if (!alice_advance_front(obs)) return WaitAction{};
        Job& j = jobs_.front();

        // a stray held object blocks every other kind of work
        if (self.holding && !(j.kind == Job::Kind::Fetch && j.target == *self.holding)) {
            return PlaceAction{*self.holding, work_surface_id(obs)};
        }

        // pick a navigation destination for the current phase, or nullopt if
        // this phase does not navigate
        std::string nav_furniture;
        Pose2D near_pose = self.base_pose;
        if (j.phase == Job::Phase::GoToSource) {
            if (j.kind == Job::Kind::Fetch) {
                const SceneNode* node = obs.graph->node(j.target);
                const Relation* rel = obs.graph->relation_of(j.target);
                if (!node || !rel) {
                    jobs_.pop_front();
                    continue;
                }
                const SceneNode* parent = obs.graph->node(rel->parent);
                if (parent && parent->open_state.has_value() && !*parent->open_state) {
                    pending_explore_.insert(j.target);
                    Job open;
                    open.kind = Job::Kind::Open;
                    open.phase = Job::Phase::GoToSource;
                    open.target = rel->parent;
                    jobs_.push_front(std::move(open));
                    continue;
                }
                nav_furniture = rel->parent;
                near_pose = node->pose;
            } else {
                nav_furniture = j.target;
                auto iit = info.find(j.target);
                if (iit == info.end()) {
                    jobs_.pop_front();
                    continue;
                }
                near_pose = iit->second.centroid;
            }
        } else if (j.phase == Job::Phase::Carry) {
            nav_furniture = work_surface_id(obs);
            // handoff convention: nav target 0 of the work surface
            auto iit = info.find(nav_furniture);
            if (iit != info.end() && !iit->second.nav_targets.empty()) {
                if (at_pose(self.base_pose, iit->second.nav_targets[0])) {
                    j.phase = Job::Phase::PlaceNow;
                    continue;
                }
                return NavigateAction{nav_furniture, 0};
            }
            j.phase = Job::Phase::PlaceNow;
            continue;
        }

        if (!nav_furniture.empty()) {
            auto iit = info.find(nav_furniture);
            if (iit == info.end()) {
                jobs_.pop_front();
                continue;
            }
            const FurnitureStaticInfo& fi = iit->second;
            if (fi.nav_targets.empty()) {
                jobs_.pop_front();
                continue;
            }
            if (j.nav_index < 0) {
                int preferred = nearest_nav_index(fi, near_pose);
                j.nav_index =
                    (preferred + j.nav_tries) % static_cast<int>(fi.nav_targets.size());
            }
            const Pose2D& target = fi.nav_targets[static_cast<size_t>(j.nav_index)];
            if (!at_pose(self.base_pose, target)) {
                return NavigateAction{nav_furniture, j.nav_index};
            }
            // already standing at the right spot: skip ahead
            if (j.kind == Job::Kind::Open) {
                j.phase = Job::Phase::OpenNow;
            } else if (j.kind == Job::Kind::Fetch) {
                j.phase = Job::Phase::PickNow;
            } else {
                // survey of a spot we already stand on: re-navigate to refresh
                return NavigateAction{nav_furniture, j.nav_index};
            }
            continue;
        }

        switch (j.phase) {
            case Job::Phase::OpenNow:
                return OpenAction{j.target};
            case Job::Phase::PickNow:
                return PickAction{j.target};
            case Job::Phase::PlaceNow:
                return PlaceAction{j.target, work_surface_id(obs)};
            case Job::Phase::AdjustBase: {
                double dx = j.pending_dx, dy = j.pending_dy;
                double best_t = 0.0;
                if (obs.nav_grid) {
                    for (double t = 1.0; t >= 0.05; t -= 0.05) {
                        auto cell = obs.nav_grid->cell_at(self.base_pose.x + t * dx,
                                                          self.base_pose.y + t * dy);
                        if (cell && obs.nav_grid->free_at(*cell)) {
                            best_t = t;
                            break;
                        }
                    }
                }
                if (best_t * std::hypot(dx, dy) < 0.05) {
                    j.phase = Job::Phase::PickNow;  // move would be pointless
                    continue;
                }
                return MoveAction{best_t * dx, best_t * dy};
            }
            case Job::Phase::Report: {
                LocationReport report{j.target, j.drop_pose, work_surface_id(obs)};
                jobs_.pop_front();
                return SendMessageAction{"bob", report};
            }
            default:
                return WaitAction{};
        }
    }
    return WaitAction{};
}

// -------------------------------------------------------------- david ----

Action OracleBackend::decide_david(const Observation& obs) {
    for (const auto& m : obs.new_messages) {
        if (const auto* delegated = std::get_if<DelegatedExplore>(&m.payload)) {
            for (const auto& f : delegated->furniture_ids) {
                if (visit_seen_.insert(f).second) visit_queue_.push_back(f);
            }
        } else if (const auto* share = std::get_if<TaskStatusShare>(&m.payload)) {
            if (completion_text(share->text)) terminal_ = true;
        }
    }

    if (const Feedback* fb = last_feedback(obs)) {
        if (const auto* nav = std::get_if<NavigationSuccess>(fb)) {
            if (!visit_queue_.empty() && visit_queue_.front() == nav->target) {
                auto ids = task_object_ids(*obs.task);
                for (const auto& item : nav->surface_objects) {
                    bool needed = std::find(ids.begin(), ids.end(), item.object_id) != ids.end();
                    if (!needed || reported_.count(item.object_id)) continue;
                    const SceneNode* node = obs.graph->node(item.object_id);
                    if (!node) continue;
                    reported_.insert(item.object_id);
                    reports_.push_back(LocationReport{item.object_id, node->pose, nav->target});
                }
                visit_queue_.pop_front();
            }
        } else if (std::get_if<NavigationFailed>(fb)) {
            if (!visit_queue_.empty()) visit_queue_.pop_front();  // skip unreachable
        }
    }

    if (terminal_) return WaitAction{};
    if (!reports_.empty()) {
        LocationReport r = reports_.front();
        reports_.pop_front();
        return SendMessageAction{"alice", r};
    }
    if (!visit_queue_.empty()) {
        return NavigateAction{visit_queue_.front(), 0};
    }
    return WaitAction{};
}

}  // namespace crewsim
