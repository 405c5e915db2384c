#include <gtest/gtest.h>

#include <stdexcept>

#include "pixgym/agent.hpp"
#include "pixgym/errors.hpp"
#include "pixgym/eval.hpp"

using namespace pixgym;

namespace {

const Env& env() {
    static const Env e;
    return e;
}

class BannerAgent final : public Agent {
public:
    Action act(const EnvState&, const Observation&) override { return Click{0, 0}; }
};

// Oracle on even seeds; on odd seeds clicks the other click-test-2 button.
class HalfRightAgent final : public Agent {
public:
    Action act(const EnvState& s, const Observation&) override {
        if (s.seed % 2 == 0) return env().oracle_actions(s).front();
        return env().click_in(s.task.widgets.at(1 - s.task.targets.at(0)).rect);
    }
};

AgentFactory banner() {
    return [] { return std::make_unique<BannerAgent>(); };
}

TEST(EvalTask, OracleScores100) {
    EvalOptions opts;
    opts.keep_records = true;
    const auto r = eval_task(env(), oracle_factory(env()), "click-test", opts);
    EXPECT_EQ(r.mean_score, 100.0);
    EXPECT_EQ(r.episodes, 100u);
    EXPECT_EQ(r.successes, 100u);
    ASSERT_EQ(r.records.size(), 100u);
    for (std::size_t i = 0; i < r.records.size(); ++i) EXPECT_EQ(r.records[i].seed, i);
}

TEST(EvalTask, TimeoutsScoreZero) {
    EvalOptions opts;
    opts.n_seeds = 10;
    const auto r = eval_task(env(), banner(), "click-test", opts);
    EXPECT_EQ(r.mean_score, 0.0);
    EXPECT_EQ(r.incomplete, 10u);
    EXPECT_EQ(r.successes, 0u);
}

TEST(EvalTask, HalfSuccessesGiveFifty) {
    const auto r = eval_task(env(), [] { return std::make_unique<HalfRightAgent>(); }, "click-test-2");
    EXPECT_EQ(r.successes, 50u);
    EXPECT_DOUBLE_EQ(r.mean_score, 50.0);
}

TEST(EvalTask, DeterministicAcrossThreadCounts) {
    EvalOptions one;
    one.threads = 1;
    one.n_seeds = 40;
    EvalOptions many = one;
    many.threads = 4;
    const auto noisy = greedy_factory(noisy_oracle_scorer(env(), 0.3, 0));
    EXPECT_EQ(eval_task(env(), noisy, "click-color", one).mean_score,
              eval_task(env(), noisy, "click-color", many).mean_score);
}

TEST(EvalTask, UnknownTask) { EXPECT_THROW(eval_task(env(), banner(), "nope"), UnknownTask); }

TEST(SuiteMean, Examples) {
    EXPECT_EQ(suite_mean({100, 0}), 50.0);
    EXPECT_EQ(suite_mean({73.5}), 73.5);
    EXPECT_EQ(suite_mean({10, 20, 60}), suite_mean({60, 10, 20}));
    EXPECT_THROW(suite_mean({}), std::invalid_argument);
}

TEST(EvalSuite, SortedTableAndMean) {
    EvalOptions opts;
    opts.n_seeds = 20;
    const auto r = eval_suite(env(), oracle_factory(env()), {"drag-box", "click-test", "enter-text"}, opts);
    ASSERT_EQ(r.tasks.size(), 3u);
    EXPECT_EQ(r.tasks[0].task_id, "click-test");
    EXPECT_EQ(r.tasks[1].task_id, "drag-box");
    EXPECT_EQ(r.tasks[2].task_id, "enter-text");
    EXPECT_EQ(r.mean_score, 100.0);

    const auto j = to_json(r);
    EXPECT_EQ(j["mean_score"], 100.0);
    EXPECT_EQ(j["tasks"].size(), 3u);
    const auto table = format_table(r);
    EXPECT_NE(table.find("drag-box"), std::string::npos);
}

TEST(EvalSuite, MeanStaysInRange) {
    EvalOptions opts;
    opts.n_seeds = 20;
    const auto r = eval_suite(env(), greedy_factory(noisy_oracle_scorer(env(), 0.5, 1)), env().tasks().ids(), opts);
    EXPECT_GE(r.mean_score, 0.0);
    EXPECT_LT(r.mean_score, 100.0);
}

TEST(Variance, SampleStddev) {
    const auto v = summarize_trials({96.2, 96.4, 96.1});
    EXPECT_NEAR(v.mean, 96.2333333, 1e-6);
    EXPECT_NEAR(v.stddev, 0.1527525, 1e-6);
    EXPECT_EQ(summarize_trials({5, 5}).stddev, 0.0);
    EXPECT_THROW(summarize_trials({1.0}), RangeError);
    EXPECT_THROW(seed_variance_report(env(), banner(), "click-test", 1, 10), RangeError);
}

TEST(Variance, OracleIsExact) {
    const auto v = seed_variance_report(env(), oracle_factory(env()), "click-color", 3, 30);
    EXPECT_EQ(v.trial_means, (std::vector<double>{100, 100, 100}));
    EXPECT_EQ(v.stddev, 0.0);
}

TEST(Variance, NoisyPolicyHasFiniteSpread) {
    const auto v = seed_variance_report(env(), greedy_factory(noisy_oracle_scorer(env(), 0.3, 0)), "click-test-2", 3,
                                        100);
    ASSERT_EQ(v.trial_means.size(), 3u);
    EXPECT_TRUE(std::isfinite(v.stddev));
    EXPECT_GT(v.stddev, 0.0);
}

}  // namespace
