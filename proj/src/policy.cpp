#include "crewsim/policy.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "crewsim/tasks.hpp"

namespace crewsim {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool parse_double(const std::string& s, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

}  // namespace

std::string system_prompt(const std::string& robot_id, RobotRole role) {
    std::string pretty = role_name(role);
    for (auto& c : pretty) {
        if (c == '_') c = ' ';
    }
    std::string s;
    s += "You are " + robot_id + ", a " + pretty +
         " robot. The team: alice (mobile manipulation), bob (manipulation, fixed at the work "
         "table), david (mobile scout, no arm).\n";
    switch (role) {
        case RobotRole::Mobile:
            s += "You can drive around the room and observe what lies on furniture when you "
                 "arrive, but you have no arm: you can never open, pick or place anything. Your "
                 "job is to explore locations that alice delegates to you and report the objects "
                 "you find back to her.\n";
            break;
        case RobotRole::Manipulation:
            s += "Your base is bolted next to the work table; you can only pick and place objects "
                 "within your reach radius. You carry out all final tabletop operations yourself. "
                 "When a task object is unknown to you, ask alice to explore for it; when it lies "
                 "on the table beyond your reach, ask alice to transport it to you.\n";
            break;
        case RobotRole::MobileManipulation:
            s += "You combine a mobile base with an arm: you can navigate, fine-tune your base "
                 "position with move, open furniture, and pick and place objects. You fetch "
                 "objects for bob and drop them on the work surface within his reach, then tell "
                 "him where they are. You may delegate pure exploration to david. You never place "
                 "objects into the final task destinations yourself; bob does that.\n";
            break;
    }
    s += "One action per turn. After each action you receive textual feedback; use it to replan. "
         "If a pick fails because the target is too far, reposition your base using the reported "
         "dx/dy offsets before trying again.\n";
    s += "Respond with your reasoning first, then exactly one action in a fenced block:\n"
         "```action\n<action>\n```\n";
    return s;
}

std::string action_syntax(RobotRole role) {
    std::string s = "Available actions:\n";
    if (role != RobotRole::Manipulation) {
        s += "- navigate(<furniture>[, <k>]): drive to the k-th navigation target of a furniture "
             "(default 0)\n";
        s += "- move(<dx>, <dy>): shift the base by dx, dy meters\n";
    }
    if (role == RobotRole::MobileManipulation) {
        s += "- open(<furniture>): open an openable furniture within operating range\n";
    }
    if (role != RobotRole::Mobile) {
        s += "- pick(<object>): grasp an object within reach\n";
        s += "- place(<object>, <destination>): put the held object onto/into a destination\n";
    }
    s += "- wait(): do nothing this turn\n";
    s += "- send(<recipient>, <payload>): message another robot; payload forms: "
         "'explore: <obj>, <obj>' | 'transport: <obj> | <context>' | 'delegate: <furniture>, "
         "<furniture>' | 'found: <obj> @ (<x>, <y>) at <furniture>' | 'status: <text>' | free "
         "text\n";
    return s;
}

PromptBundle serialize_observation(const Observation& obs, const AblationFlags& ablations) {
    PromptBundle b;
    b.system_text = system_prompt(obs.robot_id, obs.role);

    std::string u;
    if (obs.task) {
        u += describe_task(*obs.task) + "\n";
    } else {
        u += "Task: (none configured)\n";
    }
    u += "\nScene graph:\n";
    u += obs.graph ? obs.graph->render() : std::string("(none)\n");

    u += "\nYour status:\n";
    if (obs.robot) {
        const Robot& r = *obs.robot;
        u += "- pose: (" + fmt2(r.base_pose.x) + ", " + fmt2(r.base_pose.y) + ", " +
             fmt2(r.base_pose.theta) + ")\n";
        if (r.can_manipulate) {
            u += "- gripper: " + (r.holding ? "holding " + *r.holding : std::string("empty")) + "\n";
            u += "- reach radius: " + fmt2(r.reach_radius.value_or(0.0)) + " m\n";
        } else {
            u += "- no manipulator arm\n";
        }
        u += std::string("- mobile base: ") + (r.mobile ? "yes" : "no") + "\n";
    }

    u += "\nNew messages this turn:\n";
    if (obs.new_messages.empty()) {
        u += "(none)\n";
    } else {
        for (const auto& m : obs.new_messages) u += "- " + render_message(m) + "\n";
    }

    u += "\nMemory:\n";
    if (obs.memory) {
        MemoryRenderOptions opts;
        opts.no_feedback = ablations.no_feedback;
        opts.latest_only = ablations.no_history;
        u += render_memory(*obs.memory, opts);
    } else {
        u += "(none)\n";
    }

    u += "\n" + action_syntax(obs.role);
    u += "\nThink step by step about what to do at step " + std::to_string(obs.step) +
         ", then give exactly one action in a fenced ```action block.\n";
    b.user_text = std::move(u);
    return b;
}

std::string parse_failure_text(const ParseFailure& pf) {
    switch (pf.reason) {
        case ParseFailure::Reason::NoActionBlock:
            return "no fenced action block found" + (pf.detail.empty() ? "" : ": " + pf.detail);
        case ParseFailure::Reason::Malformed:
            return "malformed action" + (pf.detail.empty() ? "" : ": " + pf.detail);
        case ParseFailure::Reason::UnknownAction:
            return "unknown action" + (pf.detail.empty() ? "" : ": " + pf.detail);
        case ParseFailure::Reason::RoleIllegal:
            return "action not allowed for this robot" +
                   (pf.detail.empty() ? "" : ": " + pf.detail);
    }
    return "parse failure";
}

MessagePayload parse_payload_wire(const std::string& text) {
    std::string t = trim(text);
    auto starts = [&](const char* prefix) {
        return t.rfind(prefix, 0) == 0;
    };
    if (starts("explore:")) {
        ExploreRequest r;
        for (auto& name : split(t.substr(8), ',')) {
            if (!name.empty()) r.object_names.push_back(name);
        }
        if (!r.object_names.empty()) return r;
    } else if (starts("transport:")) {
        std::string rest = trim(t.substr(10));
        auto bar = rest.find('|');
        TransportRequest r;
        if (bar == std::string::npos) {
            r.object_name = trim(rest);
        } else {
            r.object_name = trim(rest.substr(0, bar));
            r.context_text = trim(rest.substr(bar + 1));
        }
        if (!r.object_name.empty()) return r;
    } else if (starts("delegate:")) {
        DelegatedExplore r;
        for (auto& f : split(t.substr(9), ',')) {
            if (!f.empty()) r.furniture_ids.push_back(f);
        }
        if (!r.furniture_ids.empty()) return r;
    } else if (starts("found:")) {
        // found: <obj> @ (<x>, <y>) at <furniture>
        std::string rest = trim(t.substr(6));
        auto at_sign = rest.find('@');
        auto open_paren = rest.find('(', at_sign == std::string::npos ? 0 : at_sign);
        auto close_paren = rest.find(')', open_paren == std::string::npos ? 0 : open_paren);
        auto at_word = rest.find(" at ", close_paren == std::string::npos ? 0 : close_paren);
        if (at_sign != std::string::npos && open_paren != std::string::npos &&
            close_paren != std::string::npos && at_word != std::string::npos) {
            LocationReport r;
            r.object_name = trim(rest.substr(0, at_sign));
            auto coords = split(rest.substr(open_paren + 1, close_paren - open_paren - 1), ',');
            double x = 0.0, y = 0.0;
            if (coords.size() == 2 && parse_double(coords[0], x) && parse_double(coords[1], y)) {
                r.pose = make_pose(x, y, 0.0);
                r.furniture_id = trim(rest.substr(at_word + 4));
                if (!r.object_name.empty() && !r.furniture_id.empty()) return r;
            }
        }
    } else if (starts("status:")) {
        return TaskStatusShare{trim(t.substr(7))};
    }
    return FreeText{t};
}

namespace {

std::optional<std::string> extract_last_action_block(const std::string& raw) {
    // last ```action ... ``` fence; tolerate a bare ``` fence as fallback
    const std::string tag = "```action";
    size_t pos = raw.rfind(tag);
    size_t body_start = std::string::npos;
    if (pos != std::string::npos) {
        body_start = pos + tag.size();
    } else {
        size_t fence = raw.rfind("```");
        if (fence == std::string::npos) return std::nullopt;
        // find the opening fence before it
        size_t open = raw.rfind("```", fence == 0 ? 0 : fence - 1);
        if (open == std::string::npos || open == fence) return std::nullopt;
        body_start = open + 3;
        std::string body = raw.substr(body_start, fence - body_start);
        return trim(body);
    }
    size_t end = raw.find("```", body_start);
    std::string body =
        end == std::string::npos ? raw.substr(body_start) : raw.substr(body_start, end - body_start);
    return trim(body);
}

}  // namespace

ParseResult parse_action(const std::string& raw_output, RobotRole role) {
    auto block = extract_last_action_block(raw_output);
    if (!block || block->empty()) {
        return ParseFailure{ParseFailure::Reason::NoActionBlock, ""};
    }
    // first non-empty line of the block is the command
    std::string cmd;
    {
        std::istringstream ss(*block);
        std::string line;
        while (std::getline(ss, line)) {
            line = trim(line);
            if (!line.empty()) {
                cmd = line;
                break;
            }
        }
    }
    auto open_paren = cmd.find('(');
    if (open_paren == std::string::npos || cmd.back() != ')') {
        return ParseFailure{ParseFailure::Reason::Malformed, "expected <name>(<args>)"};
    }
    std::string name = trim(cmd.substr(0, open_paren));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::string args = cmd.substr(open_paren + 1, cmd.size() - open_paren - 2);

    Action action;
    if (name == "navigate") {
        auto parts = split(args, ',');
        if (parts.empty() || parts[0].empty()) {
            return ParseFailure{ParseFailure::Reason::Malformed, "navigate needs a furniture"};
        }
        int idx = 0;
        if (parts.size() >= 2 && !parts[1].empty()) {
            try {
                idx = std::stoi(parts[1]);
            } catch (...) {
                return ParseFailure{ParseFailure::Reason::Malformed, "bad navigation target index"};
            }
        }
        action = NavigateAction{parts[0], idx};
    } else if (name == "move") {
        auto parts = split(args, ',');
        double dx = 0.0, dy = 0.0;
        if (parts.size() != 2 || !parse_double(parts[0], dx) || !parse_double(parts[1], dy)) {
            return ParseFailure{ParseFailure::Reason::Malformed, "move needs two numbers"};
        }
        action = MoveAction{dx, dy};
    } else if (name == "open") {
        std::string f = trim(args);
        if (f.empty()) return ParseFailure{ParseFailure::Reason::Malformed, "open needs a furniture"};
        action = OpenAction{f};
    } else if (name == "pick") {
        std::string o = trim(args);
        if (o.empty()) return ParseFailure{ParseFailure::Reason::Malformed, "pick needs an object"};
        action = PickAction{o};
    } else if (name == "place") {
        auto parts = split(args, ',');
        if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
            return ParseFailure{ParseFailure::Reason::Malformed,
                                "place needs an object and a destination"};
        }
        action = PlaceAction{parts[0], parts[1]};
    } else if (name == "wait") {
        action = WaitAction{};
    } else if (name == "send") {
        auto comma = args.find(',');
        if (comma == std::string::npos) {
            return ParseFailure{ParseFailure::Reason::Malformed,
                                "send needs a recipient and a payload"};
        }
        std::string recipient = trim(args.substr(0, comma));
        std::string payload = trim(args.substr(comma + 1));
        if (recipient.empty()) {
            return ParseFailure{ParseFailure::Reason::Malformed, "send needs a recipient"};
        }
        action = SendMessageAction{recipient, parse_payload_wire(payload)};
    } else {
        return ParseFailure{ParseFailure::Reason::UnknownAction, "'" + name + "'"};
    }

    if (!role_legal(role, action)) {
        return ParseFailure{ParseFailure::Reason::RoleIllegal,
                            "'" + name + "' is not available to a " + role_name(role) + " robot"};
    }
    return action;
}

}  // namespace crewsim
