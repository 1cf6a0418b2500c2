#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "crewsim/policy.hpp"

namespace crewsim {

struct ChatConfig {
    std::string endpoint;          // base URL, e.g. http://localhost:8000
    std::string model;
    double temperature = 0.5;
    int timeout_seconds = 60;
    int max_retries = 2;           // re-queries after a parse failure
    std::string api_key_env = "CREWSIM_API_KEY";
};

struct ChatRequestMessage {
    std::string role;  // system | user | assistant
    std::string content;
};

struct ChatOutcome {
    bool ok = false;
    std::string content;  // assistant text on success
    std::string error;    // transport/HTTP error otherwise
};

/// Transport seam: the real HTTP client and test doubles implement this.
class ChatTransport {
public:
    virtual ~ChatTransport() = default;
    virtual ChatOutcome complete(const std::vector<ChatRequestMessage>& messages,
                                 const ChatConfig& config) = 0;
};

/// Blocking client for the common chat-completions HTTP wire format
/// (POST /v1/chat/completions with model/temperature/messages). Reads the
/// bearer token from the environment variable named in the config.
std::unique_ptr<ChatTransport> make_http_transport();

/// Scripted transport for tests: returns the queued responses in order,
/// then errors.
class ScriptedTransport : public ChatTransport {
public:
    explicit ScriptedTransport(std::vector<std::string> responses)
        : responses_(std::move(responses)) {}

    ChatOutcome complete(const std::vector<ChatRequestMessage>& messages,
                         const ChatConfig& config) override;

    const std::vector<std::vector<ChatRequestMessage>>& calls() const { return calls_; }

private:
    std::vector<std::string> responses_;
    std::vector<std::vector<ChatRequestMessage>> calls_;
};

/// Transcript entry surfaced to the episode log under --verbose.
struct ChatExchange {
    std::vector<ChatRequestMessage> request;
    std::string response;
    bool ok = false;
};

/// LLM-driven policy. Parse failures trigger bounded corrective re-queries;
/// transport failures and retry exhaustion degrade to Wait.
class ChatModelBackend : public PolicyBackend {
public:
    ChatModelBackend(ChatConfig config, std::shared_ptr<ChatTransport> transport);

    PolicyDecision decide(const Observation& obs, const PromptBundle& bundle) override;

    /// Exchanges recorded by the most recent decide call.
    const std::vector<ChatExchange>& last_exchanges() const { return exchanges_; }

private:
    ChatConfig config_;
    std::shared_ptr<ChatTransport> transport_;
    std::vector<ChatExchange> exchanges_;
};

}  // namespace crewsim
