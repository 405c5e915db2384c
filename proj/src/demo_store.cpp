#include "pixgym/demo_store.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "pixgym/errors.hpp"
#include "pixgym/png_codec.hpp"

namespace pixgym {

std::string_view demo_source_name(DemoSource s) {
    switch (s) {
        case DemoSource::human: return "human";
        case DemoSource::oracle: return "oracle";
        case DemoSource::search: return "search";
    }
    return "oracle";
}

DemoSource parse_demo_source(std::string_view s) {
    if (s == "human") return DemoSource::human;
    if (s == "oracle") return DemoSource::oracle;
    if (s == "search") return DemoSource::search;
    throw FormatError("unknown demo source: " + std::string(s));
}

nlohmann::json to_json(const DemoEpisode& demo) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : demo.steps) {
        nlohmann::json step = {{"a", s.action}, {"d", digest_hex(s.digest)}};
        if (s.frame_png) step["png"] = base64_encode(*s.frame_png);
        steps.push_back(std::move(step));
    }
    return {{"task", demo.task_id},
            {"seed", demo.seed},
            {"steps", steps},
            {"raw", demo.raw},
            {"source", demo_source_name(demo.source)}};
}

DemoEpisode demo_from_json(const nlohmann::json& j) {
    try {
        DemoEpisode d;
        d.task_id = j.at("task").get<std::string>();
        d.seed = j.at("seed").get<std::uint64_t>();
        d.raw = j.at("raw").get<double>();
        d.source = parse_demo_source(j.at("source").get<std::string>());
        for (const auto& s : j.at("steps")) {
            DemoStep step;
            step.action = s.at("a").get<std::string>();
            step.digest = parse_digest_hex(s.at("d").get<std::string>());
            if (s.contains("png")) step.frame_png = base64_decode(s["png"].get<std::string>());
            d.steps.push_back(std::move(step));
        }
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad demo record: ") + e.what());
    }
}

void write_jsonl(std::ostream& out, const DemoEpisode& demo) { out << to_json(demo).dump() << '\n'; }

void write_jsonl(const std::filesystem::path& path, const std::vector<DemoEpisode>& demos, bool append) {
    std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    for (const auto& d : demos) write_jsonl(out, d);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<DemoEpisode> read_jsonl(std::istream& in) {
    std::vector<DemoEpisode> out;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(demo_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("line " + std::to_string(n) + ": " + e.what());
        } catch (const Error& e) {
            throw FormatError("line " + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

std::vector<DemoEpisode> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_jsonl(in);
}

DemoEpisode to_demo(const EpisodeRecord& rec, DemoSource source) {
    DemoEpisode d;
    d.task_id = rec.task_id;
    d.seed = rec.seed;
    d.raw = rec.raw;
    d.source = source;
    for (std::size_t i = 0; i < rec.actions.size(); ++i) d.steps.push_back({rec.actions[i], rec.digests[i], {}});
    return d;
}

std::vector<DemoEpisode> record_oracle_demos(const Env& env, const std::vector<std::string>& tasks, std::size_t n_seeds,
                                             std::uint64_t seed_base) {
    std::vector<DemoEpisode> out;
    for (const auto& task : tasks) {
        for (std::size_t i = 0; i < n_seeds; ++i) {
            OracleAgent agent(env);
            out.push_back(to_demo(run_episode(env, agent, task, seed_base + i), DemoSource::oracle));
        }
    }
    return out;
}

void attach_frames(const Env& env, DemoEpisode& demo) {
    auto [state, obs] = env.reset(demo.task_id, demo.seed);
    for (auto& step : demo.steps) {
        step.frame_png = encode_png(obs.frame);
        if (state.done) break;
        auto [next, r] = env.step(state, parse_action(step.action, env.config().bins));
        state = std::move(next);
        obs = std::move(r.observation);
    }
}

ReplayReport replay_validate(const Env& env, const DemoEpisode& demo) {
    auto [state, obs] = env.reset(demo.task_id, demo.seed);
    const auto fail = [](std::size_t i, std::string why) { return ReplayReport{false, i, std::move(why)}; };
    for (std::size_t i = 0; i < demo.steps.size(); ++i) {
        if (state.done) return fail(i, "episode ended before step " + std::to_string(i));
        if (obs.digest != demo.steps[i].digest) {
            return fail(i, "digest " + digest_hex(obs.digest) + " != recorded " + digest_hex(demo.steps[i].digest));
        }
        Action a;
        try {
            a = parse_action(demo.steps[i].action, env.config().bins);
        } catch (const Error& e) {
            return fail(i, std::string("unparseable action: ") + e.what());
        }
        auto [next, r] = env.step(state, a);
        state = std::move(next);
        obs = std::move(r.observation);
    }
    const std::size_t end = demo.steps.size();
    if (!state.done) return fail(end, "episode not finished after the recorded actions");
    const double raw = state.incomplete ? -1.0 : state.task.raw;
    if (raw != demo.raw) {
        return fail(end, "raw reward " + std::to_string(raw) + " != recorded " + std::to_string(demo.raw));
    }
    return {true, std::nullopt, ""};
}

std::vector<DemoEpisode> filter_low_reward(const std::vector<DemoEpisode>& demos, double threshold) {
    std::vector<DemoEpisode> out;
    for (const auto& d : demos) {
        if (d.raw >= threshold) out.push_back(d);
    }
    return out;
}

Key key_for_char(char c) {
    if (c == ' ') return Key{std::nullopt, {"space"}};
    if (c < 0x21 || c > 0x7E) throw GrammarError("untypeable character");
    return Key{std::nullopt, {std::string(1, c)}};
}

namespace {

// Scrolls (when a viewport exists) until the rect centre is visible, then
// clicks it.
void click_center(const Rect& r, const BinConfig& cfg, std::optional<Viewport>& vp, std::vector<Action>& out) {
    const Point c = r.center();
    if (c.x < 0 || c.x >= cfg.width_px) throw OffscreenElement("element centre outside the frame horizontally");
    int y = c.y;
    if (vp) {
        if (c.y < 0 || c.y >= vp->page_height) throw OffscreenElement("element centre outside the page");
        // Whole-viewport steps: the smallest shift that brings the centre into view.
        int shift = 0;
        if (c.y < vp->top) shift = -((vp->top - c.y + vp->height - 1) / vp->height);
        else if (c.y >= vp->top + vp->height) shift = (c.y - vp->top - vp->height) / vp->height + 1;
        while (shift != 0) {
            const int z = std::clamp(shift, -cfg.scroll_bin_max, cfg.scroll_bin_max);
            out.emplace_back(Scroll{z});
            shift -= z;
            vp->top += z * vp->height;
        }
        y = c.y - vp->top;
        if (y < 0 || y >= vp->height || y >= cfg.height_px) throw OffscreenElement("no scroll reveals the element");
    } else if (c.y < 0 || c.y >= cfg.height_px) {
        throw OffscreenElement("element centre outside the frame vertically");
    }
    out.emplace_back(click_at_px(c.x, y, cfg));
}

}  // namespace

std::vector<Action> convert_high_level(const std::vector<HighLevelOp>& trace, const BinConfig& cfg,
                                       std::optional<Viewport> viewport) {
    std::vector<Action> out;
    for (const auto& op : trace) {
        if (const auto* c = std::get_if<ClickElement>(&op)) {
            click_center(c->rect, cfg, viewport, out);
        } else if (const auto* t = std::get_if<TypeText>(&op)) {
            click_center(t->field, cfg, viewport, out);
            for (char ch : t->text) out.emplace_back(key_for_char(ch));
        } else {
            const auto& s = std::get<Search>(op);
            click_center(s.box, cfg, viewport, out);
            for (char ch : s.query) out.emplace_back(key_for_char(ch));
            out.emplace_back(Key{std::nullopt, {"enter"}});
        }
    }
    return out;
}

std::vector<std::optional<std::vector<Action>>> convert_traces(const std::vector<std::vector<HighLevelOp>>& traces,
                                                               const BinConfig& cfg, ConversionReport& report,
                                                               std::optional<Viewport> viewport) {
    std::vector<std::optional<std::vector<Action>>> out;
    for (const auto& t : traces) {
        ++report.attempted;
        try {
            out.emplace_back(convert_high_level(t, cfg, viewport));
            ++report.converted;
        } catch (const Error&) {
            out.emplace_back(std::nullopt);
        }
    }
    return out;
}

}  // namespace pixgym
