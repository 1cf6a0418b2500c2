// Python bindings for the simulator's main operations. Structured values
// cross the boundary as plain dicts/lists using the same JSON encodings as
// the scenario and log files.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crewsim/episode.hpp"
#include "crewsim/gridrun.hpp"
#include "crewsim/policy.hpp"
#include "crewsim/scenario.hpp"
#include "crewsim/serialization.hpp"
#include "crewsim/tasks.hpp"

namespace py = pybind11;
using namespace crewsim;

namespace {

py::object json_to_py(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return py::none();
        case json::value_t::boolean: return py::bool_(j.get<bool>());
        case json::value_t::number_integer: return py::int_(j.get<long long>());
        case json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case json::value_t::number_float: return py::float_(j.get<double>());
        case json::value_t::string: return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it) {
                out[py::str(it.key())] = json_to_py(it.value());
            }
            return out;
        }
        default: return py::none();
    }
}

json py_to_json(const py::handle& obj) {
    if (obj.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
    if (py::isinstance<py::int_>(obj)) return obj.cast<long long>();
    if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
    if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        json out = json::array();
        for (const auto& item : obj) out.push_back(py_to_json(item));
        return out;
    }
    if (py::isinstance<py::dict>(obj)) {
        json out = json::object();
        for (const auto& kv : obj.cast<py::dict>()) {
            out[kv.first.cast<std::string>()] = py_to_json(kv.second);
        }
        return out;
    }
    throw py::type_error("unsupported value in structured argument");
}

json result_json(const EpisodeResult& r) {
    return json{{"success", r.success},
                {"partial_success", r.partial_success},
                {"temporal_steps", r.temporal_steps},
                {"action_steps", r.action_steps},
                {"parse_failures", r.parse_failures},
                {"log_path", r.log_path}};
}

EpisodeConfig build_episode_config(const std::string& scenario, const std::string& task,
                                   int objects, std::uint64_t seed, int horizon,
                                   const std::string& log_path, const std::string& policy,
                                   bool no_feedback, bool no_history, bool no_mobile_robot,
                                   const std::string& endpoint, const std::string& model,
                                   double temperature) {
    EpisodeConfig config;
    config.scenario_path = scenario;
    if (!task.empty()) config.task_request = TaskRequest{task, objects, seed};
    config.horizon = horizon;
    config.log_path = log_path;
    config.policy =
        policy == "chat" ? EpisodeConfig::Policy::Chat : EpisodeConfig::Policy::Oracle;
    config.chat.endpoint = endpoint;
    config.chat.model = model;
    config.chat.temperature = temperature;
    config.ablations = AblationFlags{no_feedback, no_history};
    config.no_mobile_robot = no_mobile_robot;
    return config;
}

}  // namespace

PYBIND11_MODULE(_crewsim, m) {
    m.doc() = "deterministic three-robot collaboration simulator";

    m.def("load_scenario",
          [](const std::string& path) { return json_to_py(json(load_scenario(path))); },
          py::arg("path"), "Load and validate a scenario file; returns it as a dict.");

    m.def("validate_scenario",
          [](const py::dict& scenario) {
              Scenario s = py_to_json(scenario).get<Scenario>();
              return validate_scenario(s);
          },
          py::arg("scenario"), "Return a list of structural problems (empty = valid).");

    m.def("instantiate_task",
          [](const std::string& path, const std::string& task, int objects, std::uint64_t seed) {
              Scenario s = load_scenario(path);
              instantiate_task(s, TaskRequest{task, objects, seed});
              return json_to_py(json(s));
          },
          py::arg("path"), py::arg("task"), py::arg("objects") = 4, py::arg("seed") = 0,
          "Load a scenario and populate it with seeded task objects.");

    m.def("plan_path",
          [](const py::dict& grid, std::pair<double, double> start,
             std::pair<double, double> goal) {
              GridMap g = py_to_json(grid).get<GridMap>();
              PathResult r = plan_path(g, Pose2D{start.first, start.second, 0.0},
                                       Pose2D{goal.first, goal.second, 0.0});
              json out;
              if (r.ok()) {
                  json cells = json::array();
                  for (Cell c : r.path->cells) cells.push_back(json::array({c.x, c.y}));
                  out = json{{"ok", true}, {"cost", r.path->cost()}, {"cells", std::move(cells)}};
              } else {
                  out = json{{"ok", false},
                             {"error", *r.error == PathError::InvalidEndpoint ? "invalid_endpoint"
                                                                              : "no_path"}};
              }
              return json_to_py(out);
          },
          py::arg("grid"), py::arg("start"), py::arg("goal"),
          "A* over an occupancy grid dict {resolution,width,height,obstacles}.");

    m.def("evaluate",
          [](const py::dict& world, const py::dict& task) {
              WorldState w = py_to_json(world).get<WorldState>();
              TaskSpec t = py_to_json(task).get<TaskSpec>();
              GoalReport g = evaluate(w, t);
              return json_to_py(json{{"success", g.success},
                                     {"correctly_placed", g.correctly_placed},
                                     {"total", g.total}});
          },
          py::arg("world"), py::arg("task"), "Goal check for a world-state dict.");

    m.def("parse_action",
          [](const std::string& raw, const std::string& role) -> py::object {
              RobotRole r = role == "mobile" ? RobotRole::Mobile
                            : role == "manipulation" ? RobotRole::Manipulation
                                                     : RobotRole::MobileManipulation;
              ParseResult res = parse_action(raw, r);
              if (const Action* a = std::get_if<Action>(&res)) {
                  return json_to_py(json(*a));
              }
              const auto& pf = std::get<ParseFailure>(res);
              return json_to_py(json{{"parse_failure", parse_failure_text(pf)}});
          },
          py::arg("raw_output"), py::arg("role"),
          "Parse a policy reply; returns the action dict or {'parse_failure': reason}.");

    m.def("render_feedback",
          [](const py::dict& feedback) {
              Feedback f = py_to_json(feedback).get<Feedback>();
              return render_feedback(f);
          },
          py::arg("feedback"), "Deterministic text for a feedback dict.");

    m.def("run_episode",
          [](const std::string& scenario, const std::string& task, int objects,
             std::uint64_t seed, int horizon, const std::string& log_path,
             const std::string& policy, bool no_feedback, bool no_history, bool no_mobile_robot,
             const std::string& endpoint, const std::string& model, double temperature) {
              EpisodeConfig config = build_episode_config(
                  scenario, task, objects, seed, horizon, log_path, policy, no_feedback,
                  no_history, no_mobile_robot, endpoint, model, temperature);
              EpisodeResult result;
              {
                  py::gil_scoped_release release;
                  result = run_episode(config);
              }
              return json_to_py(result_json(result));
          },
          py::arg("scenario"), py::arg("task") = "", py::arg("objects") = 4, py::arg("seed") = 0,
          py::arg("horizon") = 50, py::arg("log_path") = "episode.jsonl",
          py::arg("policy") = "oracle", py::arg("no_feedback") = false,
          py::arg("no_history") = false, py::arg("no_mobile_robot") = false,
          py::arg("endpoint") = "", py::arg("model") = "", py::arg("temperature") = 0.5,
          "Run one episode and return its metrics dict.");

    m.def("run_grid",
          [](const std::vector<std::string>& scenarios, const std::vector<std::string>& tasks,
             const std::vector<int>& objects, std::uint64_t seed, int horizon,
             const std::string& out_dir, const std::string& policy, bool no_mobile_robot,
             int jobs) {
              GridConfig config;
              config.scenario_paths = scenarios;
              if (!tasks.empty()) config.task_kinds = tasks;
              if (!objects.empty()) config.object_counts = objects;
              config.seed = seed;
              config.horizon = horizon;
              config.out_dir = out_dir;
              config.policy = policy == "chat" ? EpisodeConfig::Policy::Chat
                                               : EpisodeConfig::Policy::Oracle;
              config.no_mobile_robot = no_mobile_robot;
              config.jobs = jobs;
              GridOutcome outcome;
              {
                  py::gil_scoped_release release;
                  outcome = run_grid(config);
              }
              json per_task = json::object();
              for (const auto& [kind, m2] : outcome.per_task) {
                  per_task[kind] = json{{"succ_rate", m2.succ_rate},
                                        {"mean_ps", m2.mean_ps},
                                        {"mean_ts", m2.mean_ts},
                                        {"mean_as", m2.mean_as},
                                        {"episodes", m2.episodes}};
              }
              json episodes = json::array();
              for (const auto& rec : outcome.episodes) {
                  episodes.push_back(json{{"scenario", rec.scenario_path},
                                          {"task", rec.task_kind},
                                          {"objects", rec.object_count},
                                          {"completed", rec.completed},
                                          {"result", result_json(rec.result)},
                                          {"error", rec.error}});
              }
              return json_to_py(json{{"per_task", std::move(per_task)},
                                     {"episodes", std::move(episodes)},
                                     {"errors", outcome.errors}});
          },
          py::arg("scenarios"), py::arg("tasks") = std::vector<std::string>{},
          py::arg("objects") = std::vector<int>{}, py::arg("seed") = 0, py::arg("horizon") = 50,
          py::arg("out_dir") = "runs", py::arg("policy") = "oracle",
          py::arg("no_mobile_robot") = false, py::arg("jobs") = 1,
          "Run the experiment grid and return per-task aggregates.");

    m.def("replay",
          [](const std::string& log_path) {
              EpisodeResult result;
              {
                  py::gil_scoped_release release;
                  result = replay_episode(log_path);
              }
              return json_to_py(result_json(result));
          },
          py::arg("log_path"), "Replay a logged episode; raises on drift or corruption.");
}
