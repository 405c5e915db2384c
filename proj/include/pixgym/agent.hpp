#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pixgym/env.hpp"
#include "pixgym/mcts.hpp"
#include "pixgym/policy.hpp"
#include "pixgym/value.hpp"

namespace pixgym {

/// Episode-scoped decision maker. Not thread-safe; make one per episode.
class Agent {
public:
    virtual ~Agent() = default;
    virtual Action act(const EnvState& state, const Observation& obs) = 0;
};

using AgentFactory = std::function<std::unique_ptr<Agent>()>;

class GreedyAgent final : public Agent {
public:
    GreedyAgent(std::shared_ptr<const ActionScorer> scorer, std::size_t k = 8) : policy_(std::move(scorer), k) {}
    Action act(const EnvState& state, const Observation& obs) override { return policy_.select(state, obs); }

private:
    GreedyPolicy policy_;
};

/// Tree search with subtree reuse across steps.
class SearchAgent final : public Agent {
public:
    explicit SearchAgent(std::shared_ptr<const TreeSearch> search) : search_(std::move(search)) {}
    Action act(const EnvState& state, const Observation& obs) override;

    std::size_t last_rounds() const { return last_rounds_; }

private:
    std::shared_ptr<const TreeSearch> search_;
    std::unique_ptr<SearchNode> subtree_;
    std::size_t last_rounds_ = 0;
};

/// Follows the scripted oracle exactly.
class OracleAgent final : public Agent {
public:
    explicit OracleAgent(const Env& env) : env_(&env) {}
    Action act(const EnvState& state, const Observation& obs) override;

private:
    const Env* env_;
};

AgentFactory greedy_factory(std::shared_ptr<const ActionScorer> scorer, std::size_t k = 8);
AgentFactory search_factory(std::shared_ptr<const TreeSearch> search);
AgentFactory oracle_factory(const Env& env);

struct EpisodeRecord {
    std::string task_id;
    std::uint64_t seed = 0;
    std::vector<std::string> actions;
    std::vector<Digest> digests;  // observation before each action
    std::vector<double> step_rewards;  // surrogate reward of each transition
    double raw = 0.0;
    bool incomplete = false;

    double score() const { return episode_score(raw, incomplete); }
};

/// Runs one episode to termination (the step limit guarantees it ends).
EpisodeRecord run_episode(const Env& env, Agent& agent, std::string_view task_id, std::uint64_t seed,
                          const SurrogateConfig& surrogate = {});

}  // namespace pixgym
