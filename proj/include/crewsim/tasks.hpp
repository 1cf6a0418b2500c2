#pragma once

#include <string>

#include "crewsim/task_spec.hpp"
#include "crewsim/world.hpp"

namespace crewsim {

struct GoalReport {
    bool success = false;
    int correctly_placed = 0;
    int total = 0;

    double ratio() const { return total == 0 ? 1.0 : static_cast<double>(correctly_placed) / total; }
};

/// Pure goal check. Pack: objects supported by the tray. Sort: solids on
/// their color-matched panel. Sandwich: longest bottom-up prefix of the
/// board stack matching the menu order.
GoalReport evaluate(const WorldState& state, const TaskSpec& task);

/// The manipulation robot's "what does the work area look like" feedback:
/// tray contents / per-panel listings / board stack bottom-to-top.
TaskStatus task_status(const WorldState& state, const TaskSpec& task);

/// Prompt paragraph describing the task and its goal.
std::string describe_task(const TaskSpec& task);

/// Consistency problems of the task against a world (missing ids, color
/// mismatches); empty when fine.
std::vector<std::string> validate_task(const WorldState& state, const TaskSpec& task);

}  // namespace crewsim
