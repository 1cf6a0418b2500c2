#include "crewsim/scenegraph.hpp"

#include <algorithm>

#include "crewsim/error.hpp"

namespace crewsim {

SceneGraph SceneGraph::initial(const WorldState& world, const std::string& robot_id) {
    SceneGraph g;
    for (const auto& [fid, f] : world.furniture) {
        SceneNode n;
        n.id = fid;
        n.kind = SceneNode::Kind::Furniture;
        n.pose = world.furniture_centroid(f);
        n.furniture_kind = furniture_kind_name(f.kind);
        n.nav_targets = f.nav_targets;
        if (f.openable) {
            n.open_state = f.is_open;
            n.contents_known = false;
        }
        g.nodes_[fid] = std::move(n);
    }

    auto rit = world.robots.find(robot_id);
    if (rit == world.robots.end()) return g;
    const Pose2D& base = rit->second.base_pose;

    // Initial local observation: what sits on nearby furniture is visible.
    for (const auto& [fid, f] : world.furniture) {
        if (world.distance_to_furniture(base, f) > world.thresholds.visibility_radius) continue;
        for (const auto& oid : f.surface_object_ids) {
            auto oit = world.objects.find(oid);
            if (oit == world.objects.end()) continue;
            g.upsert_object(oid, oit->second.display_name, oit->second.pose,
                            Relation{Relation::Kind::On, fid}, 0, true);
        }
        if (f.openable && f.is_open) {
            for (const auto& oid : f.contained_object_ids) {
                auto oit = world.objects.find(oid);
                if (oit == world.objects.end()) continue;
                g.upsert_object(oid, oit->second.display_name, oit->second.pose,
                                Relation{Relation::Kind::In, fid}, 0, true);
            }
            g.nodes_[fid].contents_known = true;
        }
    }
    return g;
}

const SceneNode* SceneGraph::node(const std::string& id) const {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
}

const Relation* SceneGraph::relation_of(const std::string& id) const {
    auto it = relations_.find(id);
    return it == relations_.end() ? nullptr : &it->second;
}

std::vector<std::string> SceneGraph::object_ids() const {
    std::vector<std::string> out;
    for (const auto& [id, n] : nodes_) {
        if (n.kind == SceneNode::Kind::Object) out.push_back(id);
    }
    return out;
}

SceneNode& SceneGraph::require_furniture(const std::string& id, const char* context) {
    auto it = nodes_.find(id);
    if (it == nodes_.end() || it->second.kind != SceneNode::Kind::Furniture) {
        throw Error(ErrorCode::UnknownEntity,
                    std::string(context) + " references unknown furniture '" + id + "'");
    }
    return it->second;
}

void SceneGraph::upsert_object(const std::string& id, const std::string& display, Pose2D pose,
                               Relation rel, int step, bool pose_exact) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) {
        SceneNode n;
        n.id = id;
        n.kind = SceneNode::Kind::Object;
        n.display_name = display.empty() ? id : display;
        n.pose = pose;
        n.last_updated_step = step;
        nodes_[id] = std::move(n);
        relations_[id] = rel;
        held_belief_.erase(id);
        return;
    }
    SceneNode& n = it->second;
    auto rit = relations_.find(id);
    bool relation_changed = rit == relations_.end() || !(rit->second == rel);
    if (pose_exact || relation_changed) n.pose = pose;
    n.last_updated_step = step;
    if (!display.empty()) n.display_name = display;
    relations_[id] = rel;
    held_belief_.erase(id);
}

void SceneGraph::update_from_feedback(const Feedback& f, int step, const std::string& self_id) {
    if (const auto* nav = std::get_if<NavigationSuccess>(&f)) {
        SceneNode& fn = require_furniture(nav->target, "navigation feedback");
        Pose2D proxy = fn.pose;
        // The surface listing is a complete observation of that surface:
        // clear beliefs it contradicts.
        for (auto& [oid, rel] : relations_) {
            if (rel.kind == Relation::Kind::On && rel.parent == nav->target) {
                bool still_there = std::any_of(
                    nav->surface_objects.begin(), nav->surface_objects.end(),
                    [&](const SurfaceItem& s) { return s.object_id == oid; });
                if (!still_there) rel.parent.clear();  // marks "location unknown"
            }
        }
        std::erase_if(relations_, [](const auto& kv) { return kv.second.parent.empty(); });
        for (const auto& item : nav->surface_objects) {
            upsert_object(item.object_id, item.display_name, proxy,
                          Relation{Relation::Kind::On, nav->target}, step, false);
        }
        fn.last_updated_step = step;
        return;
    }
    if (const auto* open = std::get_if<OpenSuccess>(&f)) {
        SceneNode& fn = require_furniture(open->furniture_id, "open feedback");
        fn.open_state = true;
        fn.contents_known = true;
        fn.last_updated_step = step;
        for (const auto& item : open->contents) {
            upsert_object(item.object_id, item.display_name, item.pose,
                          Relation{Relation::Kind::In, open->furniture_id}, step, true);
        }
        return;
    }
    if (const auto* pick = std::get_if<PickSuccess>(&f)) {
        auto it = nodes_.find(pick->object_id);
        if (it == nodes_.end()) {
            SceneNode n;
            n.id = pick->object_id;
            n.kind = SceneNode::Kind::Object;
            n.display_name = pick->object_id;
            nodes_[pick->object_id] = std::move(n);
            it = nodes_.find(pick->object_id);
        }
        it->second.last_updated_step = step;
        relations_.erase(pick->object_id);
        held_belief_[pick->object_id] = self_id;
        return;
    }
    if (const auto* place = std::get_if<PlaceSuccess>(&f)) {
        SceneNode& fn = require_furniture(place->location, "place feedback");
        Relation::Kind kind =
            fn.open_state.has_value() ? Relation::Kind::In : Relation::Kind::On;
        upsert_object(place->object_id, "", place->pose, Relation{kind, place->location}, step,
                      true);
        return;
    }
    // Move success carries no scene delta; failures leave the graph alone.
}

void SceneGraph::update_from_message(const MessagePayload& payload, int step) {
    const auto* report = std::get_if<LocationReport>(&payload);
    if (!report) return;  // only location reports carry geometry
    auto fit = nodes_.find(report->furniture_id);
    if (fit == nodes_.end() || fit->second.kind != SceneNode::Kind::Furniture) {
        return;  // unparseable / unknown anchor: no update
    }
    auto oit = nodes_.find(report->object_name);
    if (oit != nodes_.end() && oit->second.last_updated_step > step) {
        return;  // we already know something fresher
    }
    Relation::Kind kind =
        fit->second.open_state.has_value() ? Relation::Kind::In : Relation::Kind::On;
    upsert_object(report->object_name, "", report->pose, Relation{kind, report->furniture_id},
                  step, true);
}

std::string SceneGraph::render() const {
    std::string out = "Furniture:\n";
    for (const auto& [id, n] : nodes_) {
        if (n.kind != SceneNode::Kind::Furniture) continue;
        out += "- " + id + " (" + n.furniture_kind + "): center " + fmt_pose(n.pose);
        if (n.open_state.has_value()) {
            out += *n.open_state ? ", open" : ", closed";
            out += n.contents_known ? ", contents known" : ", contents unknown";
        }
        out += ", nav targets:";
        for (size_t i = 0; i < n.nav_targets.size(); ++i) {
            out += (i ? "; [" : " [") + std::to_string(i) + "] " + fmt_pose(n.nav_targets[i]);
        }
        out += "\n";
    }
    out += "Known objects:\n";
    bool any = false;
    for (const auto& [id, n] : nodes_) {
        if (n.kind != SceneNode::Kind::Object) continue;
        any = true;
        out += "- " + id;
        if (!n.display_name.empty() && n.display_name != id) out += " (" + n.display_name + ")";
        auto rit = relations_.find(id);
        auto hit = held_belief_.find(id);
        if (rit != relations_.end()) {
            out += rit->second.kind == Relation::Kind::On ? ": on " : ": in ";
            out += rit->second.parent;
            out += ", last seen at " + fmt_pose(n.pose);
        } else if (hit != held_belief_.end()) {
            out += ": in " + hit->second + "'s gripper";
        } else {
            out += ": location unknown";
        }
        out += "\n";
    }
    if (!any) out += "(no objects discovered yet)\n";
    return out;
}

}  // namespace crewsim
