#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pixgym/agent.hpp"
#include "pixgym/demo.hpp"
#include "pixgym/mcts.hpp"

namespace pixgym {

struct HarvestOptions {
    std::vector<std::string> tasks;
    std::size_t n_seeds = 100;
    std::uint64_t seed_base = 0;
    std::size_t threads = 0;  // 0 = hardware concurrency
};

struct Harvest {
    std::vector<DemoEpisode> episodes;  // task-major, seed order
    std::vector<EpisodeRecord> records;  // same order, with per-step surrogate rewards
    double search_mean_score = 0.0;  // mean of per-task mean scores
};

/// One search-policy episode per (task, seed).
Harvest harvest(const Env& env, std::shared_ptr<const TreeSearch> search, const HarvestOptions& opts);

/// Keeps episodes with raw >= threshold.
std::vector<DemoEpisode> filter_successes(const std::vector<DemoEpisode>& episodes, double threshold = 0.8);

/// Seeded shuffle, then the first round(fraction * N) episodes form the dev set.
/// Returns (train, dev).
std::pair<std::vector<DemoEpisode>, std::vector<DemoEpisode>> split_dev(const std::vector<DemoEpisode>& episodes,
                                                                        double fraction, std::uint64_t split_seed);

struct Iteration {
    std::size_t index = 0;
    std::size_t harvested = 0;
    std::size_t kept = 0;
    double greedy_mean_score = 0.0;
    double search_mean_score = 0.0;
};

nlohmann::json to_json(const Iteration& it);

struct ImproveOptions {
    HarvestOptions harvest;
    MctsConfig mcts;
    std::size_t iterations = 2;
    double threshold = 0.8;
};

struct ImproveResult {
    std::vector<Iteration> reports;
    std::shared_ptr<const ActionScorer> final_scorer;  // fitted after the last iteration
    std::vector<DemoEpisode> kept;  // cumulative
};

/// Iteration i evaluates scorer_i greedily and with search (value function
/// fixed), keeps the successful search episodes, and refits scorer_{i+1} on
/// everything kept so far.
ImproveResult improve(const Env& env, std::shared_ptr<const ActionScorer> initial,
                      std::shared_ptr<const ValueFn> value, const ImproveOptions& opts);

}  // namespace pixgym
