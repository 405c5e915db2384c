#include "pixgym/agent.hpp"

#include "pixgym/errors.hpp"

namespace pixgym {

Action SearchAgent::act(const EnvState& state, const Observation& obs) {
    auto result = search_->search_act(state, obs, std::move(subtree_));
    last_rounds_ = result.rounds_run;
    subtree_ = result.take_subtree();
    return result.action;
}

Action OracleAgent::act(const EnvState& state, const Observation&) {
    const auto plan = env_->oracle_actions(state);
    if (plan.empty()) throw NoOracle("oracle has no action for " + state.task_id);
    return plan.front();
}

AgentFactory greedy_factory(std::shared_ptr<const ActionScorer> scorer, std::size_t k) {
    return [scorer = std::move(scorer), k] { return std::make_unique<GreedyAgent>(scorer, k); };
}

AgentFactory search_factory(std::shared_ptr<const TreeSearch> search) {
    return [search = std::move(search)] { return std::make_unique<SearchAgent>(search); };
}

AgentFactory oracle_factory(const Env& env) {
    return [&env] { return std::make_unique<OracleAgent>(env); };
}

EpisodeRecord run_episode(const Env& env, Agent& agent, std::string_view task_id, std::uint64_t seed,
                          const SurrogateConfig& surrogate) {
    EpisodeRecord rec;
    rec.task_id = std::string(task_id);
    rec.seed = seed;
    auto [state, obs] = env.reset(task_id, seed);
    while (!state.done) {
        const Action a = agent.act(state, obs);
        rec.actions.push_back(serialize_action(a));
        rec.digests.push_back(obs.digest);
        auto [next, r] = env.step(state, a);
        rec.step_rewards.push_back(surrogate_step(r.done, r.raw_reward.value_or(0.0), r.incomplete, surrogate));
        if (r.done) {
            rec.raw = *r.raw_reward;
            rec.incomplete = r.incomplete;
        }
        state = std::move(next);
        obs = std::move(r.observation);
    }
    return rec;
}

}  // namespace pixgym
