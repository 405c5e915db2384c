#include "pixgym/improve.hpp"

#include <cmath>

#include "pixgym/demo_store.hpp"
#include "pixgym/errors.hpp"
#include "pixgym/eval.hpp"
#include "pixgym/parallel.hpp"
#include "pixgym/rng.hpp"

namespace pixgym {

Harvest harvest(const Env& env, std::shared_ptr<const TreeSearch> search, const HarvestOptions& opts) {
    const std::size_t n = opts.tasks.size() * opts.n_seeds;
    std::vector<EpisodeRecord> records(n);
    parallel_for(
        n,
        [&](std::size_t i) {
            SearchAgent agent(search);
            records[i] = run_episode(env, agent, opts.tasks[i / opts.n_seeds], opts.seed_base + i % opts.n_seeds,
                                     search->config().surrogate);
        },
        opts.threads ? opts.threads : default_threads());

    Harvest out;
    std::vector<double> task_means;
    for (std::size_t t = 0; t < opts.tasks.size(); ++t) {
        double total = 0.0;
        for (std::size_t s = 0; s < opts.n_seeds; ++s) total += records[t * opts.n_seeds + s].score();
        task_means.push_back(opts.n_seeds ? total / static_cast<double>(opts.n_seeds) : 0.0);
    }
    out.search_mean_score = task_means.empty() ? 0.0 : suite_mean(task_means);
    for (const auto& r : records) out.episodes.push_back(to_demo(r, DemoSource::search));
    out.records = std::move(records);
    return out;
}

std::vector<DemoEpisode> filter_successes(const std::vector<DemoEpisode>& episodes, double threshold) {
    return filter_low_reward(episodes, threshold);
}

std::pair<std::vector<DemoEpisode>, std::vector<DemoEpisode>> split_dev(const std::vector<DemoEpisode>& episodes,
                                                                        double fraction, std::uint64_t split_seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw RangeError("dev fraction must be in (0, 1)");
    std::vector<std::size_t> order(episodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    SplitMix64 rng(split_seed);
    rng.shuffle(order);
    const auto n_dev = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(episodes.size())));
    std::pair<std::vector<DemoEpisode>, std::vector<DemoEpisode>> out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < n_dev ? out.second : out.first).push_back(episodes[order[i]]);
    }
    return out;
}

nlohmann::json to_json(const Iteration& it) {
    return {{"iteration", it.index},
            {"harvested", it.harvested},
            {"kept", it.kept},
            {"greedy_mean", it.greedy_mean_score},
            {"search_mean", it.search_mean_score}};
}

ImproveResult improve(const Env& env, std::shared_ptr<const ActionScorer> initial,
                      std::shared_ptr<const ValueFn> value, const ImproveOptions& opts) {
    if (opts.iterations < 1) throw RangeError("need at least one iteration");
    ImproveResult out;
    std::shared_ptr<const ActionScorer> scorer = std::move(initial);
    for (std::size_t i = 0; i < opts.iterations; ++i) {
        auto search = std::make_shared<const TreeSearch>(env, scorer, value, opts.mcts);
        Harvest h = harvest(env, search, opts.harvest);
        auto kept = filter_successes(h.episodes, opts.threshold);

        EvalOptions eval;
        eval.n_seeds = opts.harvest.n_seeds;
        eval.seed_base = opts.harvest.seed_base;
        eval.threads = opts.harvest.threads;
        const auto greedy = eval_suite(env, greedy_factory(scorer, opts.mcts.k), opts.harvest.tasks, eval);

        Iteration it;
        it.index = i;
        it.harvested = h.episodes.size();
        it.kept = kept.size();
        it.greedy_mean_score = greedy.mean_score;
        it.search_mean_score = h.search_mean_score;
        out.reports.push_back(it);

        out.kept.insert(out.kept.end(), kept.begin(), kept.end());
        if (!out.kept.empty()) scorer = tabular_bc_fit(bc_dataset(out.kept), env.config().bins);
    }
    out.final_scorer = scorer;
    return out;
}

}  // namespace pixgym
