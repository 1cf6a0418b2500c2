#pragma once

#include <map>
#include <string>
#include <vector>

#include "crewsim/episode.hpp"

namespace crewsim {

/// The experiment grid: tasks x scenarios x object counts, one episode per
/// combination (the four counts are the four trials per scenario).
struct GridConfig {
    std::vector<std::string> scenario_paths;
    std::vector<std::string> task_kinds = {"pack_objects", "sort_solids", "make_sandwich"};
    std::vector<int> object_counts = {3, 4, 5, 6};
    std::uint64_t seed = 0;
    int horizon = 50;
    EpisodeConfig::Policy policy = EpisodeConfig::Policy::Oracle;
    ChatConfig chat;
    AblationFlags ablations;
    bool no_mobile_robot = false;
    bool verbose = false;
    std::string out_dir = "runs";
    int jobs = 1;
};

struct AggregateMetrics {
    double succ_rate = 0.0;
    double mean_ps = 0.0;
    double mean_ts = 0.0;
    double mean_as = 0.0;
    int episodes = 0;  // completed episodes the means cover
};

struct EpisodeRecord {
    std::string scenario_path;
    std::string task_kind;
    int object_count = 0;
    std::uint64_t seed = 0;
    bool completed = false;
    EpisodeResult result;
    std::string error;  // set when the episode failed to run
};

struct GridOutcome {
    std::map<std::string, AggregateMetrics> per_task;
    AggregateMetrics overall;
    std::vector<EpisodeRecord> episodes;
    std::vector<std::string> errors;
};

AggregateMetrics aggregate(const std::vector<EpisodeResult>& results);

GridOutcome run_grid(const GridConfig& config);

/// Per-task table, one row per task plus an overall row.
std::string format_grid_table(const GridOutcome& outcome);

/// Rebuild aggregates from episode logs on disk (the `report` subcommand).
GridOutcome report_from_logs(const std::vector<std::string>& log_paths);

}  // namespace crewsim
