#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crewsim/serialization.hpp"
#include "crewsim/task_spec.hpp"
#include "crewsim/world.hpp"

namespace crewsim {

/// Object placement slot declared by a scenario. Kinds drive task
/// instantiation: "near" sits on the work surface within the manipulation
/// robot's reach, "far" on the work surface beyond it, "remote" on other
/// furniture surfaces, "hidden" inside openable furniture.
struct SpawnSite {
    enum class Kind { Near, Far, Remote, Hidden };
    std::string furniture_id;
    Kind kind = Kind::Near;
    Pose2D pose;
};

std::string site_kind_name(SpawnSite::Kind k);

struct Scenario {
    WorldState world;
    std::vector<SpawnSite> spawn_sites;
    std::optional<TaskSpec> task;
};

void to_json(json& j, const SpawnSite& s);
void from_json(const json& j, SpawnSite& s);
void to_json(json& j, const Scenario& s);
void from_json(const json& j, Scenario& s);

/// Parse + validate. Throws Error(ScenarioInvalid) listing every problem.
Scenario load_scenario(const std::string& path);

/// Canonical serialization; loading the output reproduces the scenario
/// bit-exactly.
void save_scenario(const Scenario& s, const std::string& path);

/// Structural problems; empty means valid.
std::vector<std::string> validate_scenario(const Scenario& s);

/// FNV-1a hash of the scenario file bytes, hex-encoded.
std::string scenario_file_hash(const std::string& path);

struct TaskRequest {
    std::string kind;  // pack_objects | sort_solids | make_sandwich
    int object_count = 4;
    std::uint64_t seed = 0;
};

/// Populate the scenario with task objects placed on seeded spawn sites and
/// attach the task spec. Every instantiation places at least one object
/// inside closed openable furniture and at least one on the work surface
/// beyond the manipulation robot's reach.
void instantiate_task(Scenario& s, const TaskRequest& req);

/// Deterministic bounded sampler (mt19937_64 output only, no libstdc++
/// distributions, so results are identical across platforms).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// uniform in [0, n)
    std::uint64_t below(std::uint64_t n);
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace crewsim
