#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pixgym/agent.hpp"
#include "pixgym/demo.hpp"
#include "pixgym/env.hpp"

namespace pixgym {

nlohmann::json to_json(const DemoEpisode& demo);
/// Throws FormatError on schema violations.
DemoEpisode demo_from_json(const nlohmann::json& j);

void write_jsonl(std::ostream& out, const DemoEpisode& demo);
void write_jsonl(const std::filesystem::path& path, const std::vector<DemoEpisode>& demos, bool append = false);
/// Throws FormatError with the 1-based line number of the first bad line.
std::vector<DemoEpisode> read_jsonl(std::istream& in);
std::vector<DemoEpisode> read_jsonl(const std::filesystem::path& path);

DemoEpisode to_demo(const EpisodeRecord& rec, DemoSource source);

/// One scripted-oracle episode per (task, seed), seeds base .. base + n - 1.
std::vector<DemoEpisode> record_oracle_demos(const Env& env, const std::vector<std::string>& tasks, std::size_t n_seeds,
                                             std::uint64_t seed_base = 0);

/// Replays the demo and stores a PNG of every pre-action frame.
void attach_frames(const Env& env, DemoEpisode& demo);

struct ReplayReport {
    bool valid = false;
    /// First step whose recorded digest disagrees with the replay, or
    /// steps.size() when only the ending (termination or raw reward) differs.
    std::optional<std::size_t> first_mismatch;
    std::string reason;
};

/// Throws UnknownTask.
ReplayReport replay_validate(const Env& env, const DemoEpisode& demo);

/// Keeps demos with raw >= threshold.
std::vector<DemoEpisode> filter_low_reward(const std::vector<DemoEpisode>& demos, double threshold = 0.8);

struct ClickElement {
    Rect rect;  // page coordinates
};
struct TypeText {
    Rect field;
    std::string text;
};
struct Search {
    Rect box;
    std::string query;
};
using HighLevelOp = std::variant<ClickElement, TypeText, Search>;

/// A vertically scrolling page shown through the observation. Rect y values
/// are page coordinates; one scroll bin moves the view by one viewport height.
struct Viewport {
    int top = 0;
    int height = 210;
    int page_height = 210;
};

/// Maps high-level operations onto the binned action space by targeting
/// element centres. Throws OffscreenElement when a centre cannot be shown.
std::vector<Action> convert_high_level(const std::vector<HighLevelOp>& trace, const BinConfig& cfg,
                                       std::optional<Viewport> viewport = std::nullopt);

/// Key action typing one character.
Key key_for_char(char c);

struct ConversionReport {
    std::size_t attempted = 0;
    std::size_t converted = 0;
    double rate() const { return attempted ? static_cast<double>(converted) / static_cast<double>(attempted) : 0.0; }
};

/// Converts every trace; failed traces come back as nullopt.
std::vector<std::optional<std::vector<Action>>> convert_traces(const std::vector<std::vector<HighLevelOp>>& traces,
                                                               const BinConfig& cfg, ConversionReport& report,
                                                               std::optional<Viewport> viewport = std::nullopt);

}  // namespace pixgym
