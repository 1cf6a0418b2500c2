#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crewsim/feedback.hpp"
#include "crewsim/message.hpp"
#include "crewsim/world.hpp"

namespace crewsim {

struct SceneNode {
    std::string id;
    enum class Kind { Furniture, Object } kind = Kind::Object;
    Pose2D pose;  // last known; furniture uses its footprint centroid
    std::optional<bool> open_state;  // openable furniture only
    bool contents_known = false;     // meaningful for openable furniture
    int last_updated_step = 0;

    // static extras used for rendering and planning
    std::string furniture_kind;      // furniture nodes
    std::vector<Pose2D> nav_targets; // furniture nodes
    std::string display_name;        // object nodes

    friend bool operator==(const SceneNode&, const SceneNode&) = default;
};

struct Relation {
    enum class Kind { On, In } kind = Kind::On;
    std::string parent;

    friend bool operator==(const Relation&, const Relation&) = default;
};

/// A robot's structured belief about the environment. Furniture is known
/// from the start; objects enter only through observation feedback or
/// received messages. Nodes are never removed, though an object's relation
/// may be cleared when a fresh observation contradicts it.
class SceneGraph {
public:
    SceneGraph() = default;

    /// Static furniture plus an initial local observation: surface objects
    /// of furniture within the visibility radius of the robot's start pose
    /// (contents of closed furniture stay hidden).
    static SceneGraph initial(const WorldState& world, const std::string& robot_id);

    /// Apply the robot's own action feedback. Throws Error(UnknownEntity)
    /// when the feedback references furniture outside the static set.
    void update_from_feedback(const Feedback& f, int step, const std::string& self_id);

    /// Apply a received message (only location reports carry geometry).
    void update_from_message(const MessagePayload& payload, int step);

    /// Deterministic text listing, sorted by entity id.
    std::string render() const;

    bool has_node(const std::string& id) const { return nodes_.count(id) > 0; }
    const SceneNode* node(const std::string& id) const;
    const Relation* relation_of(const std::string& id) const;
    const std::map<std::string, SceneNode>& nodes() const { return nodes_; }
    const std::map<std::string, Relation>& relations() const { return relations_; }

    std::vector<std::string> object_ids() const;

    friend bool operator==(const SceneGraph&, const SceneGraph&) = default;

private:
    void upsert_object(const std::string& id, const std::string& display, Pose2D pose,
                       Relation rel, int step, bool pose_exact);
    SceneNode& require_furniture(const std::string& id, const char* context);

    std::map<std::string, SceneNode> nodes_;
    std::map<std::string, Relation> relations_;        // object id -> relation
    std::map<std::string, std::string> held_belief_;   // object id -> robot id
};

}  // namespace crewsim
