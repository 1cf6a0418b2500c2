// crewsim command line: run single episodes, sweep the experiment grid,
// validate scenarios, replay logs, and aggregate results.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crewsim/episode.hpp"
#include "crewsim/error.hpp"
#include "crewsim/gridrun.hpp"
#include "crewsim/scenario.hpp"
#include "crewsim/serialization.hpp"

namespace fs = std::filesystem;
using namespace crewsim;

namespace {

struct PolicyFlags {
    std::string policy = "oracle";
    std::string endpoint;
    std::string model = "gpt-4o";
    double temperature = 0.5;
    int timeout = 60;
    int max_retries = 2;
};

void add_policy_flags(CLI::App* cmd, PolicyFlags& flags) {
    cmd->add_option("--policy", flags.policy, "Decision backend: oracle | chat")
        ->check(CLI::IsMember({"oracle", "chat"}));
    cmd->add_option("--endpoint", flags.endpoint,
                    "Chat backend base URL (api key read from $CREWSIM_API_KEY)");
    cmd->add_option("--model", flags.model, "Chat model name");
    cmd->add_option("--temperature", flags.temperature, "Chat sampling temperature")
        ->check(CLI::Range(0.0, 2.0));
    cmd->add_option("--timeout", flags.timeout, "Chat request timeout in seconds");
    cmd->add_option("--max-retries", flags.max_retries, "Parse-failure re-queries per decision");
}

ChatConfig chat_config_from(const PolicyFlags& flags) {
    ChatConfig c;
    c.endpoint = flags.endpoint;
    c.model = flags.model;
    c.temperature = flags.temperature;
    c.timeout_seconds = flags.timeout;
    c.max_retries = flags.max_retries;
    return c;
}

void print_result(const EpisodeResult& r) {
    std::printf("success:          %s\n", r.success ? "yes" : "no");
    std::printf("partial success:  %.4f\n", r.partial_success);
    std::printf("temporal steps:   %d\n", r.temporal_steps);
    std::printf("action steps:     %d\n", r.action_steps);
    std::printf("parse failures:   %d\n", r.parse_failures);
    std::printf("log:              %s\n", r.log_path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale simulator for decentralized three-robot collaboration"};
    app.require_subcommand(1);

    // ---- run ----
    auto* run = app.add_subcommand("run", "Run a single episode");
    std::string scenario_path;
    std::string task_kind;
    int objects = 4;
    std::uint64_t seed = 0;
    int horizon = 50;
    bool no_feedback = false, no_history = false, no_mobile = false, verbose = false;
    std::string out_dir = "runs";
    PolicyFlags run_policy;
    run->add_option("--scenario", scenario_path, "Scenario file")->required();
    run->add_option("--task", task_kind,
                    "Task to instantiate (pack_objects | sort_solids | make_sandwich); omit when "
                    "the scenario embeds one")
        ->check(CLI::IsMember({"pack_objects", "sort_solids", "make_sandwich"}));
    run->add_option("--objects", objects, "Object count for the instantiated task (3-6)");
    run->add_option("--seed", seed, "Placement sampling seed");
    run->add_option("--horizon", horizon, "Maximum temporal steps");
    run->add_flag("--no-feedback", no_feedback, "Ablation: drop feedback from prompts");
    run->add_flag("--no-history", no_history, "Ablation: keep only [LATEST] history in prompts");
    run->add_flag("--no-mobile-robot", no_mobile, "Ablation: run without david");
    run->add_flag("--verbose", verbose, "Log prompts and chat transcripts");
    run->add_option("--out", out_dir, "Output directory for the episode log");
    add_policy_flags(run, run_policy);

    // ---- grid ----
    auto* grid = app.add_subcommand("grid", "Run the tasks x scenarios x object-counts grid");
    std::vector<std::string> grid_scenarios;
    std::vector<std::string> grid_tasks = {"pack_objects", "sort_solids", "make_sandwich"};
    std::vector<int> grid_counts = {3, 4, 5, 6};
    std::uint64_t grid_seed = 0;
    int grid_horizon = 50;
    int jobs = 1;
    bool g_no_feedback = false, g_no_history = false, g_no_mobile = false, g_verbose = false;
    std::string grid_out = "runs";
    PolicyFlags grid_policy;
    grid->add_option("--scenario", grid_scenarios, "Scenario files (repeatable)")->required();
    grid->add_option("--task", grid_tasks, "Task kinds to include");
    grid->add_option("--objects", grid_counts, "Object counts to include");
    grid->add_option("--seed", grid_seed, "Placement sampling seed");
    grid->add_option("--horizon", grid_horizon, "Maximum temporal steps");
    grid->add_option("--jobs", jobs, "Concurrent episodes");
    grid->add_flag("--no-feedback", g_no_feedback, "Ablation: drop feedback from prompts");
    grid->add_flag("--no-history", g_no_history, "Ablation: keep only [LATEST] history");
    grid->add_flag("--no-mobile-robot", g_no_mobile, "Ablation: run without david");
    grid->add_flag("--verbose", g_verbose, "Log prompts and chat transcripts");
    grid->add_option("--out", grid_out, "Output directory for episode logs");
    add_policy_flags(grid, grid_policy);

    // ---- replay ----
    auto* replay = app.add_subcommand("replay", "Re-execute a logged episode and check for drift");
    std::string replay_log;
    replay->add_option("--log", replay_log, "Episode log to replay")->required();

    // ---- validate ----
    auto* validate = app.add_subcommand("validate", "Lint a scenario file");
    std::string validate_path;
    validate->add_option("--scenario", validate_path, "Scenario file")->required();

    // ---- report ----
    auto* report = app.add_subcommand("report", "Aggregate metrics from episode logs");
    std::vector<std::string> report_logs;
    std::string report_dir;
    report->add_option("--log", report_logs, "Episode logs (repeatable)");
    report->add_option("--dir", report_dir, "Directory of .jsonl episode logs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            EpisodeConfig config;
            config.scenario_path = scenario_path;
            if (!task_kind.empty()) config.task_request = TaskRequest{task_kind, objects, seed};
            config.horizon = horizon;
            config.policy = run_policy.policy == "chat" ? EpisodeConfig::Policy::Chat
                                                        : EpisodeConfig::Policy::Oracle;
            config.chat = chat_config_from(run_policy);
            config.ablations = AblationFlags{no_feedback, no_history};
            config.no_mobile_robot = no_mobile;
            config.verbose = verbose;
            fs::create_directories(out_dir);
            std::string stem = fs::path(scenario_path).stem().string();
            std::string suffix = task_kind.empty() ? "embedded" : task_kind + "_" +
                                 std::to_string(objects) + "_s" + std::to_string(seed);
            config.log_path = (fs::path(out_dir) / (stem + "_" + suffix + ".jsonl")).string();
            EpisodeResult result = run_episode(config);
            print_result(result);
            return 0;  // clean completion regardless of task success
        }
        if (grid->parsed()) {
            GridConfig config;
            config.scenario_paths = grid_scenarios;
            config.task_kinds = grid_tasks;
            config.object_counts = grid_counts;
            config.seed = grid_seed;
            config.horizon = grid_horizon;
            config.policy = grid_policy.policy == "chat" ? EpisodeConfig::Policy::Chat
                                                         : EpisodeConfig::Policy::Oracle;
            config.chat = chat_config_from(grid_policy);
            config.ablations = AblationFlags{g_no_feedback, g_no_history};
            config.no_mobile_robot = g_no_mobile;
            config.verbose = g_verbose;
            config.out_dir = grid_out;
            config.jobs = jobs;
            GridOutcome outcome = run_grid(config);
            std::printf("%s", format_grid_table(outcome).c_str());
            return outcome.errors.empty() ? 0 : 1;
        }
        if (replay->parsed()) {
            EpisodeResult result = replay_episode(replay_log);
            std::printf("replay clean: no drift\n");
            print_result(result);
            return 0;
        }
        if (validate->parsed()) {
            std::ifstream in(validate_path);
            if (!in) throw Error(ErrorCode::Io, "cannot open '" + validate_path + "'");
            json j;
            in >> j;
            Scenario s = j.get<Scenario>();
            auto issues = validate_scenario(s);
            if (issues.empty()) {
                std::printf("%s: ok\n", validate_path.c_str());
                return 0;
            }
            std::printf("%s: %zu problem(s)\n", validate_path.c_str(), issues.size());
            for (const auto& issue : issues) std::printf("  - %s\n", issue.c_str());
            return 1;
        }
        if (report->parsed()) {
            std::vector<std::string> logs = report_logs;
            if (!report_dir.empty()) {
                for (const auto& entry : fs::directory_iterator(report_dir)) {
                    if (entry.path().extension() == ".jsonl") logs.push_back(entry.path().string());
                }
                std::sort(logs.begin(), logs.end());
            }
            if (logs.empty()) throw Error(ErrorCode::Config, "no logs given (use --log or --dir)");
            GridOutcome outcome = report_from_logs(logs);
            std::printf("%s", format_grid_table(outcome).c_str());
            return outcome.errors.empty() ? 0 : 1;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
