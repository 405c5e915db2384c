#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "pixgym/demo.hpp"
#include "pixgym/env.hpp"

namespace pixgym {

/// Converts a raw UI event {kind, px, py, key?, modifier?, z?} into an
/// action. Pixels are observation coordinates, banner included.
/// kinds: click, mousedown, mouseup, key, scroll. Throws GrammarError.
Action action_from_event(const nlohmann::json& event, const BinConfig& bins);

/// All protocol logic, independent of the transport. Every request is a JSON
/// object with a "type"; every reply is a JSON object, errors as
/// {"type":"error","code":...,"message":...}.
///
///   {"type":"list_tasks"}                       -> {"type":"tasks","tasks":[{"id","horizon"}]}
///   {"type":"create","task","seed"}             -> {"type":"obs","session","png","digest","step":0}
///   {"type":"act","session","action":"click 3 4"}
///   {"type":"act","session","event":{...}}      -> {"type":"obs"|"done",...,"action"}
///   {"type":"save","session"}                   -> {"type":"saved","session","file"}
///
/// A "done" reply adds "raw", "score" and "incomplete". Sessions are
/// independent; requests on one session are applied one at a time in arrival
/// order. Thread-safe.
class SessionManager {
public:
    SessionManager(const Env& env, std::filesystem::path demo_dir);

    nlohmann::json handle(const nlohmann::json& request);
    /// Parses text, handles it, and serializes the reply.
    std::string handle_text(const std::string& text);

    std::size_t session_count() const;

private:
    struct Session {
        std::mutex mu;
        EnvState state;
        DemoEpisode record;
        std::optional<std::filesystem::path> saved;
    };

    nlohmann::json create(const nlohmann::json& req);
    nlohmann::json act(const nlohmann::json& req);
    nlohmann::json save(const nlohmann::json& req);
    nlohmann::json list_tasks() const;
    std::shared_ptr<Session> find(const nlohmann::json& req) const;
    nlohmann::json observation_reply(const std::string& id, const Observation& obs) const;

    const Env* env_;
    std::filesystem::path demo_dir_;
    mutable std::mutex mu_;
    std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t next_id_ = 0;
};

/// WebSocket front end: each text message is passed to the manager and the
/// reply sent back on the same connection.
class SessionServer {
public:
    explicit SessionServer(SessionManager& manager);
    ~SessionServer();

    /// Binds 127.0.0.1 (or `address`) and starts accepting. Port 0 picks a
    /// free port. Returns the bound port.
    std::uint16_t start(std::uint16_t port, const std::string& address = "127.0.0.1");
    /// Closes the listener and all open connections, then joins.
    void stop();
    /// Blocks until stop() is called from another thread.
    void wait();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace pixgym
