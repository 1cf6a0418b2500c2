#include "crewsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "crewsim/error.hpp"
#include "crewsim/hash.hpp"
#include "crewsim/tasks.hpp"

namespace crewsim {

std::string site_kind_name(SpawnSite::Kind k) {
    switch (k) {
        case SpawnSite::Kind::Near: return "near";
        case SpawnSite::Kind::Far: return "far";
        case SpawnSite::Kind::Remote: return "remote";
        case SpawnSite::Kind::Hidden: return "hidden";
    }
    return "near";
}

namespace {

SpawnSite::Kind site_kind_from_name(const std::string& s) {
    if (s == "near") return SpawnSite::Kind::Near;
    if (s == "far") return SpawnSite::Kind::Far;
    if (s == "remote") return SpawnSite::Kind::Remote;
    if (s == "hidden") return SpawnSite::Kind::Hidden;
    throw Error(ErrorCode::ScenarioInvalid, "unknown spawn site kind '" + s + "'");
}

}  // namespace

void to_json(json& j, const SpawnSite& s) {
    j = json{{"furniture", s.furniture_id}, {"kind", site_kind_name(s.kind)}, {"pose", s.pose}};
}

void from_json(const json& j, SpawnSite& s) {
    s.furniture_id = j.at("furniture").get<std::string>();
    s.kind = site_kind_from_name(j.at("kind").get<std::string>());
    s.pose = j.at("pose").get<Pose2D>();
}

void to_json(json& j, const Scenario& s) {
    j = json(s.world);
    j["spawn_sites"] = s.spawn_sites;
    if (s.task) j["task"] = *s.task;
}

void from_json(const json& j, Scenario& s) {
    s.world = j.get<WorldState>();
    s.spawn_sites = j.value("spawn_sites", std::vector<SpawnSite>{});
    if (j.contains("task")) s.task = j.at("task").get<TaskSpec>();
    else s.task.reset();
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open scenario file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ScenarioInvalid, "scenario is not valid JSON: " + std::string(e.what()));
    }
    Scenario s = j.get<Scenario>();
    auto issues = validate_scenario(s);
    if (!issues.empty()) {
        std::string msg = "scenario '" + path + "' is invalid:";
        for (const auto& i : issues) msg += "\n  - " + i;
        throw Error(ErrorCode::ScenarioInvalid, msg);
    }
    return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write scenario file '" + path + "'");
    out << json(s).dump(2) << "\n";
}

std::string scenario_file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64_hex(ss.str());
}

std::vector<std::string> validate_scenario(const Scenario& s) {
    std::vector<std::string> issues;
    const WorldState& w = s.world;
    GridMap nav = w.nav_grid();

    // robots: the fixed three-robot roster
    const struct {
        const char* id;
        RobotRole role;
    } roster[] = {{"alice", RobotRole::MobileManipulation},
                  {"bob", RobotRole::Manipulation},
                  {"david", RobotRole::Mobile}};
    for (const auto& want : roster) {
        auto it = w.robots.find(want.id);
        if (it == w.robots.end()) {
            issues.push_back(std::string("missing robot '") + want.id + "'");
            continue;
        }
        const Robot& r = it->second;
        if (r.role != want.role) {
            issues.push_back(std::string("robot '") + want.id + "' must have role " +
                             role_name(want.role));
        }
        if (r.can_manipulate && !r.reach_radius) {
            issues.push_back(std::string("robot '") + want.id + "' needs a reach_radius");
        }
        if (!r.can_manipulate && r.reach_radius) {
            issues.push_back(std::string("robot '") + want.id + "' must not have a reach_radius");
        }
        if (r.reach_radius && *r.reach_radius <= 0.0) {
            issues.push_back(std::string("robot '") + want.id + "' reach_radius must be positive");
        }
        auto cell = nav.cell_at(r.base_pose.x, r.base_pose.y);
        if (!cell || !nav.free_at(*cell)) {
            issues.push_back(std::string("robot '") + want.id + "' does not start on a free cell");
        }
        if (!std::isfinite(r.base_pose.x) || !std::isfinite(r.base_pose.y)) {
            issues.push_back(std::string("robot '") + want.id + "' pose is not finite");
        }
    }
    for (const auto& [id, r] : w.robots) {
        if (id != "alice" && id != "bob" && id != "david") {
            issues.push_back("unexpected robot '" + id + "'");
        }
    }

    // furniture
    for (const auto& [id, f] : w.furniture) {
        if (f.footprint.empty()) issues.push_back("furniture '" + id + "' has an empty footprint");
        for (Cell c : f.footprint) {
            if (!w.grid.in_bounds(c)) {
                issues.push_back("furniture '" + id + "' footprint leaves the map");
                break;
            }
        }
        if (f.nav_targets.empty()) {
            issues.push_back("furniture '" + id + "' needs at least one navigation target");
        }
        for (size_t i = 0; i < f.nav_targets.size(); ++i) {
            auto cell = nav.cell_at(f.nav_targets[i].x, f.nav_targets[i].y);
            if (!cell || !nav.free_at(*cell)) {
                issues.push_back("furniture '" + id + "' nav target " + std::to_string(i) +
                                 " is not on a free cell");
            }
        }
        if (!f.openable) {
            if (f.is_open) issues.push_back("furniture '" + id + "' cannot be open: not openable");
            if (!f.contained_object_ids.empty()) {
                issues.push_back("furniture '" + id + "' cannot contain objects: not openable");
            }
        }
        for (const auto& oid : f.surface_object_ids) {
            if (std::find(f.contained_object_ids.begin(), f.contained_object_ids.end(), oid) !=
                f.contained_object_ids.end()) {
                issues.push_back("object '" + oid + "' is both on and in '" + id + "'");
            }
        }
    }

    // objects and support consistency
    for (const auto& [oid, o] : w.objects) {
        int containers = 0;
        switch (o.support.kind) {
            case Support::Kind::OnFurniture:
            case Support::Kind::InFurniture: {
                auto fit = w.furniture.find(o.support.holder);
                if (fit == w.furniture.end()) {
                    issues.push_back("object '" + oid + "' is supported by unknown furniture '" +
                                     o.support.holder + "'");
                    break;
                }
                const auto& list = o.support.kind == Support::Kind::OnFurniture
                                       ? fit->second.surface_object_ids
                                       : fit->second.contained_object_ids;
                if (std::count(list.begin(), list.end(), oid) != 1) {
                    issues.push_back("object '" + oid + "' support does not match the lists of '" +
                                     o.support.holder + "'");
                }
                if (o.support.kind == Support::Kind::InFurniture && !fit->second.openable) {
                    issues.push_back("object '" + oid + "' cannot be inside non-openable '" +
                                     o.support.holder + "'");
                }
                break;
            }
            case Support::Kind::InGripper: {
                auto rit = w.robots.find(o.support.holder);
                if (rit == w.robots.end() || rit->second.holding != oid) {
                    issues.push_back("object '" + oid + "' gripper support does not match robot state");
                }
                break;
            }
        }
        for (const auto& [fid, f] : w.furniture) {
            containers += static_cast<int>(
                std::count(f.surface_object_ids.begin(), f.surface_object_ids.end(), oid));
            containers += static_cast<int>(
                std::count(f.contained_object_ids.begin(), f.contained_object_ids.end(), oid));
        }
        int expected = o.support.kind == Support::Kind::InGripper ? 0 : 1;
        if (containers != expected) {
            issues.push_back("object '" + oid + "' appears in " + std::to_string(containers) +
                             " container lists, expected " + std::to_string(expected));
        }
    }
    for (const auto& [rid, r] : w.robots) {
        if (r.holding && !w.objects.contains(*r.holding)) {
            issues.push_back("robot '" + rid + "' holds unknown object '" + *r.holding + "'");
        }
    }

    // spawn sites
    for (size_t i = 0; i < s.spawn_sites.size(); ++i) {
        const SpawnSite& site = s.spawn_sites[i];
        auto fit = w.furniture.find(site.furniture_id);
        if (fit == w.furniture.end()) {
            issues.push_back("spawn site " + std::to_string(i) + " references unknown furniture '" +
                             site.furniture_id + "'");
            continue;
        }
        bool hidden = site.kind == SpawnSite::Kind::Hidden;
        if (hidden && !fit->second.openable) {
            issues.push_back("hidden spawn site " + std::to_string(i) +
                             " must sit inside openable furniture");
        }
        if (!hidden && fit->second.openable) {
            issues.push_back("spawn site " + std::to_string(i) +
                             " on openable furniture must be 'hidden'");
        }
        auto cell = w.grid.cell_at(site.pose.x, site.pose.y);
        bool inside = false;
        if (cell) {
            inside = std::find(fit->second.footprint.begin(), fit->second.footprint.end(), *cell) !=
                     fit->second.footprint.end();
        }
        if (!inside) {
            issues.push_back("spawn site " + std::to_string(i) +
                             " pose is not inside its furniture footprint");
        }
    }

    // thresholds
    if (w.thresholds.open_radius <= 0.0 || w.thresholds.pose_tolerance_m <= 0.0 ||
        w.thresholds.pose_tolerance_rad <= 0.0 || w.thresholds.visibility_radius < 0.0) {
        issues.push_back("thresholds must be positive");
    }

    // embedded task, when present
    if (s.task) {
        auto task_issues = validate_task(w, *s.task);
        issues.insert(issues.end(), task_issues.begin(), task_issues.end());
    }
    return issues;
}

std::uint64_t SeededRng::next() {
    // splitmix64; stable across platforms
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t SeededRng::below(std::uint64_t n) {
    if (n == 0) return 0;
    // rejection sampling to stay unbiased
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          (std::numeric_limits<std::uint64_t>::max() % n);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
}

namespace {

struct ObjectSpec {
    std::string id;
    std::string display;
    std::string category;
    std::optional<ObjectColor> color;
};

std::vector<ObjectSpec> pack_vocabulary() {
    return {{"apple", "apple", "apple", std::nullopt},
            {"fork", "fork", "fork", std::nullopt},
            {"soap", "soap", "soap", std::nullopt},
            {"toy_duck", "toy duck", "toy_duck", std::nullopt},
            {"phone", "phone", "phone", std::nullopt},
            {"bottle", "bottle", "bottle", std::nullopt},
            {"book", "book", "book", std::nullopt}};
}

std::vector<ObjectSpec> solid_vocabulary() {
    std::vector<ObjectSpec> out;
    for (ObjectColor c : {ObjectColor::Red, ObjectColor::Blue, ObjectColor::Pink,
                          ObjectColor::Green, ObjectColor::Yellow, ObjectColor::Purple}) {
        out.push_back({color_name(c) + "_solid", color_name(c) + " cube", "solid", c});
    }
    return out;
}

std::vector<ObjectSpec> sandwich_menu(int n) {
    // always bread at the bottom and the top; fillings in between
    std::vector<ObjectSpec> fillings = {{"ham", "ham", "ham", std::nullopt},
                                        {"cheese", "cheese", "cheese", std::nullopt},
                                        {"tomato", "tomato", "tomato", std::nullopt},
                                        {"bacon", "bacon", "bacon", std::nullopt},
                                        {"cucumber", "cucumber", "cucumber", std::nullopt},
                                        {"beef_patty", "beef patty", "beef_patty", std::nullopt}};
    std::vector<ObjectSpec> menu;
    menu.push_back({"bread_slice_1", "bread slice", "bread_slice", std::nullopt});
    for (int i = 0; i + 2 < n && i < static_cast<int>(fillings.size()); ++i) {
        menu.push_back(fillings[static_cast<size_t>(i)]);
    }
    menu.push_back({"bread_slice_2", "bread slice", "bread_slice", std::nullopt});
    return menu;
}

std::vector<SpawnSite::Kind> site_quota(int n) {
    switch (n) {
        case 3: return {SpawnSite::Kind::Hidden, SpawnSite::Kind::Far, SpawnSite::Kind::Near};
        case 4:
            return {SpawnSite::Kind::Hidden, SpawnSite::Kind::Far, SpawnSite::Kind::Remote,
                    SpawnSite::Kind::Near};
        case 5:
            return {SpawnSite::Kind::Hidden, SpawnSite::Kind::Far, SpawnSite::Kind::Remote,
                    SpawnSite::Kind::Near, SpawnSite::Kind::Near};
        default:
            return {SpawnSite::Kind::Hidden, SpawnSite::Kind::Far, SpawnSite::Kind::Remote,
                    SpawnSite::Kind::Remote, SpawnSite::Kind::Near, SpawnSite::Kind::Near};
    }
}

}  // namespace

void instantiate_task(Scenario& s, const TaskRequest& req) {
    if (req.object_count < 3 || req.object_count > 6) {
        throw Error(ErrorCode::Config, "object count must be between 3 and 6");
    }
    if (!s.world.objects.empty()) {
        throw Error(ErrorCode::Config, "scenario already contains objects; cannot instantiate");
    }

    std::vector<ObjectSpec> specs;
    if (req.kind == "pack_objects") {
        specs = pack_vocabulary();
    } else if (req.kind == "sort_solids") {
        specs = solid_vocabulary();
    } else if (req.kind == "make_sandwich") {
        specs = sandwich_menu(req.object_count);
    } else {
        throw Error(ErrorCode::Config, "unknown task kind '" + req.kind + "'");
    }
    specs.resize(static_cast<size_t>(req.object_count));

    SeededRng rng(req.seed ^ fnv1a64(req.kind) ^ (static_cast<std::uint64_t>(req.object_count) << 32));

    // Pick sites per the quota, falling back to any leftover site when a
    // kind runs out. Hidden and far slots always come first so every
    // episode needs both exploration and transport.
    std::vector<SpawnSite::Kind> quota = site_quota(req.object_count);
    std::vector<size_t> chosen;
    std::vector<bool> used(s.spawn_sites.size(), false);
    auto take_of_kind = [&](SpawnSite::Kind k) -> std::optional<size_t> {
        std::vector<size_t> candidates;
        for (size_t i = 0; i < s.spawn_sites.size(); ++i) {
            if (!used[i] && s.spawn_sites[i].kind == k) candidates.push_back(i);
        }
        if (candidates.empty()) return std::nullopt;
        size_t pick = candidates[static_cast<size_t>(rng.below(candidates.size()))];
        used[pick] = true;
        return pick;
    };
    for (SpawnSite::Kind k : quota) {
        auto site = take_of_kind(k);
        if (!site) {
            for (SpawnSite::Kind alt : {SpawnSite::Kind::Near, SpawnSite::Kind::Remote,
                                        SpawnSite::Kind::Far, SpawnSite::Kind::Hidden}) {
                site = take_of_kind(alt);
                if (site) break;
            }
        }
        if (!site) {
            throw Error(ErrorCode::ScenarioInvalid,
                        "scenario does not declare enough spawn sites for " +
                            std::to_string(req.object_count) + " objects");
        }
        chosen.push_back(*site);
    }

    // Which object lands on which slot is the seeded part; the task order
    // itself stays canonical.
    std::vector<size_t> object_order(specs.size());
    for (size_t i = 0; i < specs.size(); ++i) object_order[i] = i;
    rng.shuffle(object_order);

    for (size_t slot = 0; slot < chosen.size(); ++slot) {
        const SpawnSite& site = s.spawn_sites[chosen[slot]];
        const ObjectSpec& spec = specs[object_order[slot]];
        SimObject o;
        o.id = spec.id;
        o.display_name = spec.display;
        o.category = spec.category;
        o.color = spec.color;
        o.pose = site.pose;
        Furniture& f = s.world.furniture.at(site.furniture_id);
        if (site.kind == SpawnSite::Kind::Hidden) {
            o.support = Support{Support::Kind::InFurniture, site.furniture_id};
            f.contained_object_ids.push_back(o.id);
        } else {
            o.support = Support{Support::Kind::OnFurniture, site.furniture_id};
            f.surface_object_ids.push_back(o.id);
        }
        s.world.objects[o.id] = std::move(o);
    }

    // task spec referencing the canonical order
    if (req.kind == "pack_objects") {
        std::string tray;
        for (const auto& [fid, f] : s.world.furniture) {
            if (f.kind == FurnitureKind::TrayStand) {
                tray = fid;
                break;
            }
        }
        if (tray.empty()) {
            throw Error(ErrorCode::ScenarioInvalid, "pack task needs a tray-stand furniture");
        }
        PackObjects t;
        for (const auto& spec : specs) t.object_ids.push_back(spec.id);
        t.tray_id = tray;
        s.task = std::move(t);
    } else if (req.kind == "sort_solids") {
        SortSolids t;
        for (const auto& spec : specs) {
            std::string panel = color_name(*spec.color) + "_panel";
            if (!s.world.furniture.contains(panel)) {
                throw Error(ErrorCode::ScenarioInvalid, "sort task needs furniture '" + panel + "'");
            }
            t.assignments.emplace_back(spec.id, panel);
        }
        s.task = std::move(t);
    } else {
        if (!s.world.furniture.contains("cutting_board")) {
            throw Error(ErrorCode::ScenarioInvalid, "sandwich task needs furniture 'cutting_board'");
        }
        MakeSandwich t;
        for (const auto& spec : specs) t.ordered_ingredient_ids.push_back(spec.id);
        t.board_id = "cutting_board";
        s.task = std::move(t);
    }

    auto issues = validate_scenario(s);
    if (!issues.empty()) {
        std::string msg = "instantiated scenario is invalid:";
        for (const auto& i : issues) msg += "\n  - " + i;
        throw Error(ErrorCode::ScenarioInvalid, msg);
    }
}

}  // namespace crewsim
