#include "crewsim/tasks.hpp"

#include <algorithm>

namespace crewsim {

std::string task_kind_name(const TaskSpec& t) {
    struct Visitor {
        std::string operator()(const PackObjects&) const { return "pack_objects"; }
        std::string operator()(const SortSolids&) const { return "sort_solids"; }
        std::string operator()(const MakeSandwich&) const { return "make_sandwich"; }
    };
    return std::visit(Visitor{}, t);
}

std::vector<std::string> task_object_ids(const TaskSpec& t) {
    struct Visitor {
        std::vector<std::string> operator()(const PackObjects& x) const { return x.object_ids; }
        std::vector<std::string> operator()(const SortSolids& x) const {
            std::vector<std::string> out;
            for (const auto& [solid, panel] : x.assignments) out.push_back(solid);
            return out;
        }
        std::vector<std::string> operator()(const MakeSandwich& x) const {
            return x.ordered_ingredient_ids;
        }
    };
    return std::visit(Visitor{}, t);
}

std::vector<std::string> task_destination_ids(const TaskSpec& t) {
    struct Visitor {
        std::vector<std::string> operator()(const PackObjects& x) const { return {x.tray_id}; }
        std::vector<std::string> operator()(const SortSolids& x) const {
            std::vector<std::string> out;
            for (const auto& [solid, panel] : x.assignments) {
                if (std::find(out.begin(), out.end(), panel) == out.end()) out.push_back(panel);
            }
            return out;
        }
        std::vector<std::string> operator()(const MakeSandwich& x) const { return {x.board_id}; }
    };
    return std::visit(Visitor{}, t);
}

namespace {

bool supported_on(const WorldState& state, const std::string& object_id,
                  const std::string& furniture_id) {
    auto it = state.objects.find(object_id);
    if (it == state.objects.end()) return false;
    const Support& s = it->second.support;
    return s.kind != Support::Kind::InGripper && s.holder == furniture_id;
}

}  // namespace

GoalReport evaluate(const WorldState& state, const TaskSpec& task) {
    struct Visitor {
        const WorldState& state;

        GoalReport operator()(const PackObjects& x) const {
            GoalReport r;
            r.total = static_cast<int>(x.object_ids.size());
            for (const auto& oid : x.object_ids) {
                if (supported_on(state, oid, x.tray_id)) ++r.correctly_placed;
            }
            r.success = r.correctly_placed == r.total;
            return r;
        }

        GoalReport operator()(const SortSolids& x) const {
            GoalReport r;
            r.total = static_cast<int>(x.assignments.size());
            for (const auto& [solid, panel] : x.assignments) {
                if (supported_on(state, solid, panel)) ++r.correctly_placed;
            }
            r.success = r.correctly_placed == r.total;
            return r;
        }

        GoalReport operator()(const MakeSandwich& x) const {
            GoalReport r;
            r.total = static_cast<int>(x.ordered_ingredient_ids.size());
            auto fit = state.furniture.find(x.board_id);
            if (fit != state.furniture.end()) {
                const auto& stack = fit->second.surface_object_ids;  // bottom to top
                size_t n = std::min(stack.size(), x.ordered_ingredient_ids.size());
                for (size_t i = 0; i < n; ++i) {
                    if (stack[i] != x.ordered_ingredient_ids[i]) break;
                    ++r.correctly_placed;
                }
            }
            r.success = r.correctly_placed == r.total;
            return r;
        }
    };
    return std::visit(Visitor{state}, task);
}

namespace {

std::string display_of(const WorldState& state, const std::string& oid) {
    auto it = state.objects.find(oid);
    return it == state.objects.end() ? oid : it->second.display_name;
}

std::string listing(const WorldState& state, const std::vector<std::string>& ids) {
    if (ids.empty()) return "nothing";
    std::string out;
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ", ";
        out += display_of(state, ids[i]);
    }
    return out;
}

}  // namespace

TaskStatus task_status(const WorldState& state, const TaskSpec& task) {
    struct Visitor {
        const WorldState& state;

        TaskStatus operator()(const PackObjects& x) const {
            auto fit = state.furniture.find(x.tray_id);
            std::vector<std::string> in_tray;
            if (fit != state.furniture.end()) {
                in_tray = fit->second.surface_object_ids;
            }
            return TaskStatus{"tray contains: " + listing(state, in_tray)};
        }

        TaskStatus operator()(const SortSolids& x) const {
            std::string text;
            for (const auto& panel : task_destination_ids(TaskSpec{x})) {
                auto fit = state.furniture.find(panel);
                std::vector<std::string> on_panel;
                if (fit != state.furniture.end()) on_panel = fit->second.surface_object_ids;
                if (!text.empty()) text += "; ";
                text += panel + ": " + listing(state, on_panel);
            }
            return TaskStatus{text.empty() ? "no panels configured" : text};
        }

        TaskStatus operator()(const MakeSandwich& x) const {
            auto fit = state.furniture.find(x.board_id);
            std::vector<std::string> stack;
            if (fit != state.furniture.end()) stack = fit->second.surface_object_ids;
            return TaskStatus{"cutting board stack from bottom to top: " + listing(state, stack)};
        }
    };
    return std::visit(Visitor{state}, task);
}

std::string describe_task(const TaskSpec& task) {
    struct Visitor {
        std::string operator()(const PackObjects& x) const {
            std::string s = "Task: pack objects. Place each of these objects into the tray '" +
                            x.tray_id + "': ";
            for (size_t i = 0; i < x.object_ids.size(); ++i) {
                if (i) s += ", ";
                s += x.object_ids[i];
            }
            s += ". The task is complete when every listed object is in the tray.";
            return s;
        }
        std::string operator()(const SortSolids& x) const {
            std::string s = "Task: sort solids. Place each solid onto the panel of its own color: ";
            for (size_t i = 0; i < x.assignments.size(); ++i) {
                if (i) s += ", ";
                s += x.assignments[i].first + " onto " + x.assignments[i].second;
            }
            s += ". The task is complete when every solid sits on its matching panel.";
            return s;
        }
        std::string operator()(const MakeSandwich& x) const {
            std::string s = "Task: make a sandwich. Stack these ingredients onto '" + x.board_id +
                            "' strictly in this order, bottom to top: ";
            for (size_t i = 0; i < x.ordered_ingredient_ids.size(); ++i) {
                if (i) s += ", ";
                s += x.ordered_ingredient_ids[i];
            }
            s += ". Order matters: never place an ingredient before all earlier ones are stacked.";
            return s;
        }
    };
    return std::visit(Visitor{}, task);
}

std::vector<std::string> validate_task(const WorldState& state, const TaskSpec& task) {
    std::vector<std::string> issues;
    for (const auto& oid : task_object_ids(task)) {
        if (!state.objects.contains(oid)) issues.push_back("task object '" + oid + "' not in world");
    }
    for (const auto& did : task_destination_ids(task)) {
        if (!state.furniture.contains(did)) {
            issues.push_back("task destination '" + did + "' not in world");
        }
    }
    if (const auto* sort = std::get_if<SortSolids>(&task)) {
        for (const auto& [solid, panel] : sort->assignments) {
            auto oit = state.objects.find(solid);
            if (oit == state.objects.end() || !oit->second.color) continue;
            // panel color is encoded by convention as "<color>_panel"
            std::string want = color_name(*oit->second.color) + "_panel";
            if (panel != want) {
                issues.push_back("solid '" + solid + "' assigned to '" + panel +
                                 "' but its color demands '" + want + "'");
            }
        }
    }
    return issues;
}

}  // namespace crewsim
