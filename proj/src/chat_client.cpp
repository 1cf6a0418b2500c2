#include "crewsim/chat_client.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace crewsim {

namespace {

using nlohmann::json;

std::string cot_before_block(const std::string& raw) {
    size_t fence = raw.find("```");
    std::string head = fence == std::string::npos ? raw : raw.substr(0, fence);
    while (!head.empty() && (head.back() == '\n' || head.back() == ' ')) head.pop_back();
    return head;
}

class HttpTransport : public ChatTransport {
public:
    ChatOutcome complete(const std::vector<ChatRequestMessage>& messages,
                         const ChatConfig& config) override {
        ChatOutcome out;
        if (config.endpoint.empty()) {
            out.error = "no endpoint configured";
            return out;
        }
        httplib::Client client(config.endpoint);
        client.set_connection_timeout(config.timeout_seconds, 0);
        client.set_read_timeout(config.timeout_seconds, 0);

        json body;
        body["model"] = config.model;
        body["temperature"] = config.temperature;
        json msgs = json::array();
        for (const auto& m : messages) {
            msgs.push_back(json{{"role", m.role}, {"content", m.content}});
        }
        body["messages"] = std::move(msgs);

        httplib::Headers headers;
        if (const char* key = std::getenv(config.api_key_env.c_str())) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }

        auto res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
        if (!res) {
            out.error = "transport error: " + httplib::to_string(res.error());
            return out;
        }
        if (res->status != 200) {
            out.error = "http status " + std::to_string(res->status);
            return out;
        }
        try {
            json reply = json::parse(res->body);
            out.content = reply.at("choices").at(0).at("message").at("content").get<std::string>();
            out.ok = true;
        } catch (const std::exception& e) {
            out.error = std::string("bad response body: ") + e.what();
        }
        return out;
    }
};

}  // namespace

std::unique_ptr<ChatTransport> make_http_transport() { return std::make_unique<HttpTransport>(); }

ChatOutcome ScriptedTransport::complete(const std::vector<ChatRequestMessage>& messages,
                                        const ChatConfig&) {
    calls_.push_back(messages);
    if (calls_.size() > responses_.size()) {
        return ChatOutcome{false, "", "scripted transport exhausted"};
    }
    return ChatOutcome{true, responses_[calls_.size() - 1], ""};
}

ChatModelBackend::ChatModelBackend(ChatConfig config, std::shared_ptr<ChatTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {}

PolicyDecision ChatModelBackend::decide(const Observation& obs, const PromptBundle& bundle) {
    exchanges_.clear();
    PolicyDecision decision;
    decision.action = WaitAction{};

    std::vector<ChatRequestMessage> messages{{"system", bundle.system_text},
                                             {"user", bundle.user_text}};
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        ChatOutcome outcome;
        try {
            outcome = transport_->complete(messages, config_);
        } catch (const std::exception& e) {
            outcome = ChatOutcome{false, "", std::string("transport exception: ") + e.what()};
        }
        exchanges_.push_back({messages, outcome.ok ? outcome.content : outcome.error, outcome.ok});
        if (!outcome.ok) {
            // backend unavailable: degrade to wait, episode continues
            decision.backend_error = true;
            decision.raw_output = outcome.error;
            decision.thought = "(backend unavailable)";
            return decision;
        }
        decision.raw_output = outcome.content;
        ParseResult parsed = parse_action(outcome.content, obs.role);
        if (const Action* action = std::get_if<Action>(&parsed)) {
            decision.action = *action;
            decision.thought = cot_before_block(outcome.content);
            return decision;
        }
        ++decision.parse_failures;
        const auto& failure = std::get<ParseFailure>(parsed);
        messages.push_back({"assistant", outcome.content});
        messages.push_back({"user",
                            "Your previous reply could not be executed (" +
                                parse_failure_text(failure) +
                                "). Reply again with exactly one valid action for your role in a "
                                "fenced ```action block."});
    }
    decision.thought = "(parse retries exhausted; waiting)";
    decision.action = WaitAction{};
    return decision;
}

}  // namespace crewsim
