#pragma once

#include <nlohmann/json.hpp>

#include "crewsim/action.hpp"
#include "crewsim/feedback.hpp"
#include "crewsim/grid.hpp"
#include "crewsim/message.hpp"
#include "crewsim/task_spec.hpp"
#include "crewsim/world.hpp"

// JSON encodings for every value that crosses a file boundary (scenario
// files, episode logs) or the python binding. Uses plain nlohmann::json,
// whose object keys serialize in sorted order, so equal values always dump
// to equal bytes.

namespace crewsim {

using json = nlohmann::json;

void to_json(json& j, const Pose2D& p);
void from_json(const json& j, Pose2D& p);

void to_json(json& j, const Cell& c);
void from_json(const json& j, Cell& c);

void to_json(json& j, const GridMap& g);
void from_json(const json& j, GridMap& g);

void to_json(json& j, const Furniture& f);
void from_json(const json& j, Furniture& f);

void to_json(json& j, const Support& s);
void from_json(const json& j, Support& s);

void to_json(json& j, const SimObject& o);
void from_json(const json& j, SimObject& o);

void to_json(json& j, const Robot& r);
void from_json(const json& j, Robot& r);

void to_json(json& j, const Thresholds& t);
void from_json(const json& j, Thresholds& t);

void to_json(json& j, const WorldState& w);
void from_json(const json& j, WorldState& w);

void to_json(json& j, const Action& a);
void from_json(const json& j, Action& a);

void to_json(json& j, const MessagePayload& p);
void from_json(const json& j, MessagePayload& p);

void to_json(json& j, const Message& m);
void from_json(const json& j, Message& m);

void to_json(json& j, const Feedback& f);
void from_json(const json& j, Feedback& f);

void to_json(json& j, const TaskSpec& t);
void from_json(const json& j, TaskSpec& t);

/// Canonical dump used for hashing world snapshots.
std::string world_state_canonical(const WorldState& w);

}  // namespace crewsim
