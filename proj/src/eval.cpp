#include "pixgym/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "pixgym/errors.hpp"
#include "pixgym/parallel.hpp"

namespace pixgym {

TaskReport eval_task(const Env& env, const AgentFactory& agent, const std::string& task_id, const EvalOptions& opts) {
    env.tasks().get(task_id);  // UnknownTask before any work
    std::vector<EpisodeRecord> records(opts.n_seeds);
    parallel_for(
        opts.n_seeds,
        [&](std::size_t i) {
            auto a = agent();
            records[i] = run_episode(env, *a, task_id, opts.seed_base + i);
        },
        opts.threads ? opts.threads : default_threads());

    TaskReport r;
    r.task_id = task_id;
    r.episodes = records.size();
    double total = 0.0;
    for (const auto& rec : records) {
        total += rec.score();
        if (rec.incomplete) ++r.incomplete;
        else if (rec.raw >= 0.8) ++r.successes;
    }
    r.mean_score = records.empty() ? 0.0 : total / static_cast<double>(records.size());
    if (opts.keep_records) r.records = std::move(records);
    return r;
}

double suite_mean(const std::vector<double>& task_means) {
    if (task_means.empty()) throw std::invalid_argument("suite needs at least one task");
    return std::accumulate(task_means.begin(), task_means.end(), 0.0) / static_cast<double>(task_means.size());
}

SuiteReport eval_suite(const Env& env, const AgentFactory& agent, const std::vector<std::string>& task_ids,
                       const EvalOptions& opts) {
    std::vector<std::string> ids = task_ids;
    std::sort(ids.begin(), ids.end());
    SuiteReport r;
    std::vector<double> means;
    for (const auto& id : ids) {
        r.tasks.push_back(eval_task(env, agent, id, opts));
        means.push_back(r.tasks.back().mean_score);
    }
    r.mean_score = suite_mean(means);
    return r;
}

VarianceReport summarize_trials(std::vector<double> trial_means) {
    if (trial_means.size() < 2) throw RangeError("need at least two trials");
    VarianceReport r;
    const double n = static_cast<double>(trial_means.size());
    r.mean = std::accumulate(trial_means.begin(), trial_means.end(), 0.0) / n;
    double ss = 0.0;
    for (double m : trial_means) ss += (m - r.mean) * (m - r.mean);
    r.stddev = std::sqrt(ss / (n - 1.0));
    r.trial_means = std::move(trial_means);
    return r;
}

VarianceReport seed_variance_report(const Env& env, const AgentFactory& agent, const std::string& task_id,
                                    std::size_t trials, std::size_t seeds_per_trial, std::size_t threads) {
    if (trials < 2) throw RangeError("need at least two trials");
    if (seeds_per_trial > 10000) throw RangeError("trial seed blocks would overlap");
    std::vector<double> means;
    for (std::size_t t = 0; t < trials; ++t) {
        EvalOptions opts;
        opts.n_seeds = seeds_per_trial;
        opts.seed_base = 10000 * t;
        opts.threads = threads;
        means.push_back(eval_task(env, agent, task_id, opts).mean_score);
    }
    return summarize_trials(std::move(means));
}

nlohmann::json to_json(const SuiteReport& r) {
    nlohmann::json tasks = nlohmann::json::array();
    for (const auto& t : r.tasks) {
        tasks.push_back({{"task", t.task_id},
                         {"mean_score", t.mean_score},
                         {"episodes", t.episodes},
                         {"successes", t.successes},
                         {"incomplete", t.incomplete}});
    }
    return {{"mean_score", r.mean_score}, {"tasks", tasks}};
}

std::string format_table(const SuiteReport& r) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-18s %8s %9s %10s\n", "task", "score", "success", "timeouts");
    out += line;
    for (const auto& t : r.tasks) {
        std::snprintf(line, sizeof line, "%-18s %8.1f %5zu/%-3zu %10zu\n", t.task_id.c_str(), t.mean_score,
                      t.successes, t.episodes, t.incomplete);
        out += line;
    }
    std::snprintf(line, sizeof line, "%-18s %8.1f\n", "MEAN", r.mean_score);
    out += line;
    return out;
}

}  // namespace pixgym
