#pragma once

#include <deque>
#include <set>
#include <string>

#include "crewsim/policy.hpp"

namespace crewsim {

/// Deterministic scripted policy that solves the shipped tasks without a
/// language model. It plays by the same rules as an LLM policy: it only
/// sees its own scene graph, memory, messages and the static map, never
/// ground truth. Used to validate that the environment, feedback and
/// message protocol are sufficient for task completion.
///
/// Division of labour:
///  - bob asks alice to explore unknown task objects and to transport
///    known ones beyond his reach, then picks and places whatever is in
///    reach (in menu order for the sandwich task);
///  - alice opens closed furniture while searching, fetches objects, drops
///    them on the work surface next to bob (nav target 0 by convention)
///    and reports each drop, delegating pure surface exploration to david
///    when he is around;
///  - david visits delegated furniture and reports task objects he sees.
class OracleBackend : public PolicyBackend {
public:
    OracleBackend(std::string robot_id, bool david_present);

    PolicyDecision decide(const Observation& obs, const PromptBundle& bundle) override;

private:
    struct Job {
        enum class Kind { Open, Fetch, Survey };
        enum class Phase { GoToSource, AdjustBase, PickNow, OpenNow, Carry, PlaceNow, Report };
        Kind kind = Kind::Fetch;
        Phase phase = Phase::GoToSource;
        std::string target;      // furniture id (open/survey) or object id (fetch)
        int nav_index = -1;      // chosen nav target; -1 = not chosen yet
        int nav_tries = 0;
        int move_attempts = 0;
        double pending_dx = 0.0;  // move to issue in AdjustBase
        double pending_dy = 0.0;
        Pose2D drop_pose;         // where the object was placed (for the report)
    };

    Action decide_bob(const Observation& obs);
    Action decide_alice(const Observation& obs);
    Action decide_david(const Observation& obs);

    void alice_ingest_messages(const Observation& obs);
    void alice_ingest_feedback(const Observation& obs);
    void alice_enqueue_fetch(const Observation& obs, const std::string& object_id);
    void alice_ensure_plans(const Observation& obs);
    bool alice_advance_front(const Observation& obs);  // pops completed jobs

    std::string work_surface_id(const Observation& obs) const;
    bool object_placed(const Observation& obs, const std::string& object_id) const;
    bool all_objects_placed(const Observation& obs) const;

    std::string id_;
    bool david_present_ = true;
    bool terminal_ = false;

    // bob
    bool explore_requested_ = false;
    bool completion_sent_ = false;
    std::set<std::string> transport_requested_;
    std::set<std::string> distrusted_;

    // alice
    std::deque<Job> jobs_;
    std::set<std::string> fetch_seen_;
    std::set<std::string> open_seen_;
    std::set<std::string> survey_seen_;
    std::set<std::string> pending_explore_;
    bool plans_made_ = false;
    bool delegation_pending_ = false;
    std::vector<std::string> delegation_list_;

    // david
    std::deque<std::string> visit_queue_;
    std::set<std::string> visit_seen_;
    std::deque<LocationReport> reports_;
    std::set<std::string> reported_;
};

}  // namespace crewsim
