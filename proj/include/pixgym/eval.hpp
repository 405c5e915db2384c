#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pixgym/agent.hpp"

namespace pixgym {

struct TaskReport {
    std::string task_id;
    double mean_score = 0.0;
    std::size_t episodes = 0;
    std::size_t successes = 0;  // raw >= 0.8
    std::size_t incomplete = 0;
    std::vector<EpisodeRecord> records;  // in seed order
};

struct EvalOptions {
    std::size_t n_seeds = 100;
    std::uint64_t seed_base = 0;
    std::size_t threads = 0;  // 0 = hardware concurrency
    bool keep_records = false;
};

/// Mean per-episode score over seeds base .. base + n_seeds - 1.
TaskReport eval_task(const Env& env, const AgentFactory& agent, const std::string& task_id,
                     const EvalOptions& opts = {});

struct SuiteReport {
    double mean_score = 0.0;
    std::vector<TaskReport> tasks;  // sorted by task id
};

/// Unweighted mean of task means. Throws std::invalid_argument on an empty list.
double suite_mean(const std::vector<double>& task_means);

SuiteReport eval_suite(const Env& env, const AgentFactory& agent, const std::vector<std::string>& task_ids,
                       const EvalOptions& opts = {});

struct VarianceReport {
    std::vector<double> trial_means;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation (n - 1)
};

/// Sample mean and standard deviation of a list of trial means.
VarianceReport summarize_trials(std::vector<double> trial_means);

/// Trial t evaluates seeds 10000 * t .. 10000 * t + seeds_per_trial - 1.
VarianceReport seed_variance_report(const Env& env, const AgentFactory& agent, const std::string& task_id,
                                    std::size_t trials, std::size_t seeds_per_trial, std::size_t threads = 0);

nlohmann::json to_json(const SuiteReport& r);
/// Fixed-width text table: task, mean, successes, incomplete.
std::string format_table(const SuiteReport& r);

}  // namespace pixgym
