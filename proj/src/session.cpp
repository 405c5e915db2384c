#include "pixgym/session.hpp"

#include <cstdio>

#include "pixgym/demo_store.hpp"
#include "pixgym/errors.hpp"
#include "pixgym/png_codec.hpp"
#include "pixgym/rng.hpp"

namespace pixgym {

namespace {

nlohmann::json error_reply(std::string_view code, std::string_view message) {
    return {{"type", "error"}, {"code", code}, {"message", message}};
}

int int_field(const nlohmann::json& j, const char* name) {
    if (!j.contains(name) || !j[name].is_number()) throw GrammarError(std::string("event needs numeric ") + name);
    return static_cast<int>(j[name].get<double>());
}

}  // namespace

Action action_from_event(const nlohmann::json& event, const BinConfig& bins) {
    if (!event.is_object() || !event.contains("kind") || !event["kind"].is_string()) {
        throw GrammarError("event needs a string kind");
    }
    const std::string kind = event["kind"];
    const auto bin_of = [&] {
        const int px = int_field(event, "px");
        const int py = int_field(event, "py");
        if (px < 0 || px >= bins.width_px || py < 0 || py >= bins.height_px) throw GrammarError("event outside frame");
        return std::pair{px_to_bin(px, bins.width_px, bins.x_bins), px_to_bin(py, bins.height_px, bins.y_bins)};
    };
    Action a;
    if (kind == "click") {
        const auto [x, y] = bin_of();
        a = Click{x, y};
    } else if (kind == "mousedown") {
        const auto [x, y] = bin_of();
        a = BeginDrag{x, y};
    } else if (kind == "mouseup") {
        const auto [x, y] = bin_of();
        a = EndDrag{x, y};
    } else if (kind == "key") {
        if (!event.contains("key") || !event["key"].is_string()) throw GrammarError("key event needs a key");
        Key k;
        if (event.contains("modifier") && !event["modifier"].is_null()) {
            k.modifier = parse_modifier(event["modifier"].get<std::string>());
            if (!k.modifier) throw GrammarError("unknown modifier");
        }
        std::string key = event["key"];
        if (key == " ") key = "space";
        k.keys = {key};
        a = k;
    } else if (kind == "scroll") {
        a = Scroll{int_field(event, "z")};
    } else {
        throw GrammarError("unknown event kind: " + kind);
    }
    validate_action(a, bins);
    return a;
}

SessionManager::SessionManager(const Env& env, std::filesystem::path demo_dir)
    : env_(&env), demo_dir_(std::move(demo_dir)) {}

std::size_t SessionManager::session_count() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
}

std::string SessionManager::handle_text(const std::string& text) {
    nlohmann::json req;
    try {
        req = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        return error_reply("bad_request", e.what()).dump();
    }
    return handle(req).dump();
}

nlohmann::json SessionManager::handle(const nlohmann::json& req) {
    try {
        if (!req.is_object() || !req.contains("type") || !req["type"].is_string()) {
            return error_reply("bad_request", "message needs a string type");
        }
        const std::string type = req["type"];
        if (type == "list_tasks") return list_tasks();
        if (type == "create") return create(req);
        if (type == "act") return act(req);
        if (type == "save") return save(req);
        return error_reply("bad_request", "unknown message type: " + type);
    } catch (const GrammarError& e) {
        return error_reply("bad_action", e.what());
    } catch (const RangeError& e) {
        return error_reply("bad_action", e.what());
    } catch (const Error& e) {
        return error_reply(e.code(), e.what());
    } catch (const nlohmann::json::exception& e) {
        return error_reply("bad_request", e.what());
    } catch (const std::exception& e) {
        return error_reply("internal", e.what());
    }
}

nlohmann::json SessionManager::list_tasks() const {
    nlohmann::json tasks = nlohmann::json::array();
    for (const auto& id : env_->tasks().ids()) {
        tasks.push_back({{"id", id}, {"horizon", env_->tasks().get(id).horizon_hint()}});
    }
    return {{"type", "tasks"}, {"tasks", tasks}};
}

nlohmann::json SessionManager::observation_reply(const std::string& id, const Observation& obs) const {
    return {{"type", "obs"},
            {"session", id},
            {"png", base64_encode(encode_png(obs.frame))},
            {"digest", digest_hex(obs.digest)},
            {"step", obs.step_index}};
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const nlohmann::json& req) const {
    const std::string id = req.at("session").get<std::string>();
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw UnknownSession("no session " + id);
    return it->second;
}

nlohmann::json SessionManager::create(const nlohmann::json& req) {
    const std::string task = req.at("task").get<std::string>();
    const auto seed = req.contains("seed") ? req["seed"].get<std::uint64_t>() : 0;
    auto [state, obs] = env_->reset(task, seed);

    auto session = std::make_shared<Session>();
    session->state = std::move(state);
    session->record.task_id = task;
    session->record.seed = seed;
    session->record.source = DemoSource::human;

    std::string id;
    {
        std::lock_guard lock(mu_);
        id = digest_hex(hash_combine(0x5E55'10A5ULL, next_id_++));
        sessions_.emplace(id, session);
    }
    return observation_reply(id, obs);
}

nlohmann::json SessionManager::act(const nlohmann::json& req) {
    const std::string id = req.at("session").get<std::string>();
    auto session = find(req);
    const auto& bins = env_->config().bins;
    Action a;
    if (req.contains("action")) {
        a = parse_action(req["action"].get<std::string>(), bins);
    } else if (req.contains("event")) {
        a = action_from_event(req["event"], bins);
    } else if (req.contains("kind")) {
        a = action_from_event(req, bins);
    } else {
        throw GrammarError("act needs an action or an event");
    }

    std::lock_guard lock(session->mu);
    if (session->state.done) throw TerminalStateError("episode already finished");
    const Digest before = env_->observe(session->state).digest;
    auto [next, r] = env_->step(session->state, a);
    session->state = std::move(next);
    session->record.steps.push_back({serialize_action(a), before, {}});

    nlohmann::json reply = observation_reply(id, r.observation);
    reply["action"] = serialize_action(a);
    if (r.done) {
        reply["type"] = "done";
        reply["raw"] = *r.raw_reward;
        reply["incomplete"] = r.incomplete;
        reply["score"] = episode_score(*r.raw_reward, r.incomplete);
        session->record.raw = *r.raw_reward;
    }
    return reply;
}

nlohmann::json SessionManager::save(const nlohmann::json& req) {
    const std::string id = req.at("session").get<std::string>();
    auto session = find(req);
    std::lock_guard lock(session->mu);
    if (!session->state.done) throw NotDone("episode is still running");
    if (!session->saved) {
        std::filesystem::create_directories(demo_dir_);
        const auto path = demo_dir_ / (id + ".jsonl");
        write_jsonl(path, {session->record});
        session->saved = path;
    }
    return {{"type", "saved"}, {"session", id}, {"file", session->saved->string()}};
}

}  // namespace pixgym
