#include "crewsim/gridrun.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "crewsim/error.hpp"
#include "crewsim/serialization.hpp"

namespace crewsim {

namespace fs = std::filesystem;

AggregateMetrics aggregate(const std::vector<EpisodeResult>& results) {
    AggregateMetrics m;
    if (results.empty()) return m;
    for (const auto& r : results) {
        m.succ_rate += r.success ? 1.0 : 0.0;
        m.mean_ps += r.partial_success;
        m.mean_ts += static_cast<double>(r.temporal_steps);
        m.mean_as += static_cast<double>(r.action_steps);
    }
    double n = static_cast<double>(results.size());
    m.succ_rate /= n;
    m.mean_ps /= n;
    m.mean_ts /= n;
    m.mean_as /= n;
    m.episodes = static_cast<int>(results.size());
    return m;
}

GridOutcome run_grid(const GridConfig& config) {
    if (config.scenario_paths.empty()) {
        throw Error(ErrorCode::Config, "the grid needs at least one scenario");
    }
    fs::create_directories(config.out_dir);

    std::vector<EpisodeConfig> episode_configs;
    std::vector<EpisodeRecord> records;
    for (const auto& task_kind : config.task_kinds) {
        for (const auto& scenario : config.scenario_paths) {
            for (int count : config.object_counts) {
                EpisodeConfig ec;
                ec.scenario_path = scenario;
                ec.task_request = TaskRequest{task_kind, count, config.seed};
                ec.horizon = config.horizon;
                ec.policy = config.policy;
                ec.chat = config.chat;
                ec.ablations = config.ablations;
                ec.no_mobile_robot = config.no_mobile_robot;
                ec.verbose = config.verbose;
                std::string stem = fs::path(scenario).stem().string();
                ec.log_path = (fs::path(config.out_dir) /
                               (stem + "_" + task_kind + "_" + std::to_string(count) + ".jsonl"))
                                  .string();
                episode_configs.push_back(ec);

                EpisodeRecord rec;
                rec.scenario_path = scenario;
                rec.task_kind = task_kind;
                rec.object_count = count;
                rec.seed = config.seed;
                records.push_back(std::move(rec));
            }
        }
    }

    auto run_one = [](const EpisodeConfig& ec) { return run_episode(ec); };

    if (config.jobs <= 1) {
        for (size_t i = 0; i < episode_configs.size(); ++i) {
            try {
                records[i].result = run_one(episode_configs[i]);
                records[i].completed = true;
            } catch (const std::exception& e) {
                records[i].error = e.what();
            }
        }
    } else {
        // independent episodes share no mutable state; run in batches
        size_t next = 0;
        while (next < episode_configs.size()) {
            size_t batch = std::min<size_t>(static_cast<size_t>(config.jobs),
                                            episode_configs.size() - next);
            std::vector<std::future<EpisodeResult>> futures;
            for (size_t k = 0; k < batch; ++k) {
                futures.push_back(std::async(std::launch::async, run_one,
                                             episode_configs[next + k]));
            }
            for (size_t k = 0; k < batch; ++k) {
                try {
                    records[next + k].result = futures[k].get();
                    records[next + k].completed = true;
                } catch (const std::exception& e) {
                    records[next + k].error = e.what();
                }
            }
            next += batch;
        }
    }

    GridOutcome outcome;
    outcome.episodes = records;
    std::map<std::string, std::vector<EpisodeResult>> per_task;
    std::vector<EpisodeResult> all;
    for (const auto& rec : records) {
        if (!rec.completed) {
            outcome.errors.push_back(rec.scenario_path + " / " + rec.task_kind + " / " +
                                     std::to_string(rec.object_count) + " objects: " + rec.error);
            continue;
        }
        per_task[rec.task_kind].push_back(rec.result);
        all.push_back(rec.result);
    }
    for (const auto& [kind, results] : per_task) outcome.per_task[kind] = aggregate(results);
    outcome.overall = aggregate(all);
    return outcome;
}

std::string format_grid_table(const GridOutcome& outcome) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-16s %10s %8s %8s %8s %10s\n", "task", "succ", "ps", "ts",
                  "as", "episodes");
    out << line;
    auto row = [&](const std::string& name, const AggregateMetrics& m) {
        std::snprintf(line, sizeof(line), "%-16s %10.2f %8.2f %8.2f %8.2f %10d\n", name.c_str(),
                      m.succ_rate, m.mean_ps, m.mean_ts, m.mean_as, m.episodes);
        out << line;
    };
    for (const auto& [kind, metrics] : outcome.per_task) row(kind, metrics);
    row("overall", outcome.overall);
    if (!outcome.errors.empty()) {
        out << "episodes that failed to run:\n";
        for (const auto& e : outcome.errors) out << "  - " << e << "\n";
    }
    return out.str();
}

GridOutcome report_from_logs(const std::vector<std::string>& log_paths) {
    GridOutcome outcome;
    std::map<std::string, std::vector<EpisodeResult>> per_task;
    std::vector<EpisodeResult> all;
    for (const auto& path : log_paths) {
        std::ifstream in(path);
        if (!in) {
            outcome.errors.push_back(path + ": cannot open");
            continue;
        }
        std::string line;
        std::string task_kind = "unknown";
        std::optional<EpisodeResult> result;
        size_t lineno = 0;
        try {
            while (std::getline(in, line)) {
                ++lineno;
                if (line.empty()) continue;
                json j = json::parse(line);
                std::string type = j.value("type", "");
                if (type == "header") {
                    task_kind = task_kind_name(j.at("task").get<TaskSpec>());
                } else if (type == "result") {
                    EpisodeResult r;
                    r.success = j.at("success").get<bool>();
                    r.partial_success = j.at("partial_success").get<double>();
                    r.temporal_steps = j.at("temporal_steps").get<int>();
                    r.action_steps = j.at("action_steps").get<int>();
                    r.parse_failures = j.at("parse_failures").get<int>();
                    r.log_path = path;
                    result = r;
                }
            }
        } catch (const std::exception& e) {
            outcome.errors.push_back(path + ": line " + std::to_string(lineno) + ": " + e.what());
            continue;
        }
        if (!result) {
            outcome.errors.push_back(path + ": no result record");
            continue;
        }
        EpisodeRecord rec;
        rec.task_kind = task_kind;
        rec.completed = true;
        rec.result = *result;
        outcome.episodes.push_back(rec);
        per_task[task_kind].push_back(*result);
        all.push_back(*result);
    }
    for (const auto& [kind, results] : per_task) outcome.per_task[kind] = aggregate(results);
    outcome.overall = aggregate(all);
    return outcome;
}

}  // namespace crewsim
