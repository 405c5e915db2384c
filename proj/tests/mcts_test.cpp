#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "pixgym/errors.hpp"
#include "pixgym/mcts.hpp"

using namespace pixgym;

namespace {

constexpr double kAlpha = -1.0 / 30.0;

const Env& env() {
    static const Env e;
    return e;
}

// Always proposes the same fixed beam.
class FixedScorer final : public ActionScorer {
public:
    explicit FixedScorer(std::vector<ScoredAction> beam) : beam_(std::move(beam)) {}
    std::vector<ScoredAction> top_k(const EnvState&, const Observation&, std::size_t k) const override {
        auto b = beam_;
        if (b.size() > k) b.resize(k);
        return b;
    }

private:
    std::vector<ScoredAction> beam_;
};

class ConstValue final : public ValueFn {
public:
    explicit ConstValue(std::size_t bucket) : bucket_(bucket) {}
    std::vector<BucketProb> top_n(const EnvState&, const Observation&, std::size_t) const override {
        return {{bucket_, 1.0}};
    }
    const ValueBuckets& buckets() const override { return b_; }

private:
    std::size_t bucket_;
    ValueBuckets b_;
};

SearchNode node_with_edges(std::vector<std::tuple<const char*, double, std::size_t, double>> edges,
                           std::size_t visits) {
    SearchNode n;
    n.visits = visits;
    for (const auto& [text, prior, count, q] : edges) {
        Edge e;
        e.action = parse_action(text, BinConfig{});
        e.text = text;
        e.prior = prior;
        e.n = count;
        e.q = q;
        n.edges.push_back(std::move(e));
    }
    return n;
}

// Depth-first hash of the tree shape and statistics.
std::string describe(const SearchNode& n) {
    std::string out = "(" + std::to_string(n.visits);
    for (const auto& e : n.edges) {
        out += " " + e.text + ":" + std::to_string(e.n) + ":" + std::to_string(e.q);
        if (e.child) out += describe(*e.child);
    }
    return out + ")";
}

TEST(Exploration, Examples) {
    EXPECT_DOUBLE_EQ(exploration_bonus(0.5, 16, 3, 0.1), 0.05);
    EXPECT_EQ(exploration_bonus(0.5, 0, 0, 0.1), 0.0);
    EXPECT_EQ(exploration_bonus(0.9, 100, 2, 0.0), 0.0);
}

TEST(SelectChild, LargerSumWins) {
    // Same Q; priors chosen so U = {0.05, 0.01} at N = 16, n = 3.
    const auto n = node_with_edges({{"click 1 1", 0.5, 3, 0.5}, {"click 2 2", 0.1, 3, 0.5}}, 16);
    EXPECT_EQ(select_child(n, MctsConfig{}), 0u);
}

TEST(SelectChild, TieGoesToHigherPrior) {
    MctsConfig cfg;
    cfg.c = 0.0;
    const auto n = node_with_edges({{"click 1 1", 0.4, 0, 0.5}, {"click 2 2", 0.6, 0, 0.5}}, 1);
    EXPECT_EQ(select_child(n, cfg), 1u);
    const auto same = node_with_edges({{"click 2 2", 0.5, 0, 0.5}, {"click 1 1", 0.5, 0, 0.5}}, 1);
    EXPECT_EQ(select_child(same, cfg), 1u);  // then lexicographic text
    EXPECT_THROW(select_child(SearchNode{}, cfg), NoEdges);
}

TEST(InitEdges, QIsLeafValuePlusAlpha) {
    SearchNode n;
    const std::vector<ScoredAction> beam = {{Click{1, 1}, 0.7}, {Click{2, 2}, 0.3}};
    init_edges(n, beam, 0.6, MctsConfig{});
    ASSERT_EQ(n.edges.size(), 2u);
    for (const auto& e : n.edges) {
        EXPECT_NEAR(e.q, 0.56667, 1e-5);
        EXPECT_EQ(e.n, 0u);
        EXPECT_FALSE(e.child);
    }
    EXPECT_EQ(n.edges[1].text, "click 2 2");
    SearchNode z;
    init_edges(z, beam, 0.0, MctsConfig{});
    EXPECT_DOUBLE_EQ(z.edges[0].q, kAlpha);
}

TEST(Backup, SingleEdgeAboveLeaf) {
    auto root = node_with_edges({{"click 1 1", 1.0, 0, 0.0}}, 1);
    backup({{&root, 0}}, 0.7, MctsConfig{});
    EXPECT_EQ(root.edges[0].n, 1u);
    EXPECT_DOUBLE_EQ(root.edges[0].q, kAlpha + 0.7);
    EXPECT_EQ(root.visits, 2u);
}

TEST(Backup, RunningMeanOfReturns) {
    auto root = node_with_edges({{"click 1 1", 1.0, 0, 0.0}}, 1);
    backup({{&root, 0}}, 0.7, MctsConfig{});
    backup({{&root, 0}}, 0.1, MctsConfig{});
    EXPECT_NEAR(root.edges[0].q, ((kAlpha + 0.7) + (kAlpha + 0.1)) / 2, 1e-12);
}

TEST(Backup, DeeperEdgesChargeEachStep) {
    auto root = node_with_edges({{"click 1 1", 1.0, 0, 0.0}}, 1);
    auto mid = node_with_edges({{"click 2 2", 1.0, 0, 0.0}}, 1);
    backup({{&root, 0}, {&mid, 0}}, 0.5, MctsConfig{});
    EXPECT_NEAR(root.edges[0].q, 2 * kAlpha + 0.5, 1e-12);
    EXPECT_NEAR(mid.edges[0].q, kAlpha + 0.5, 1e-12);
}

TEST(MostVisited, CountsThenQThenPrior) {
    EXPECT_EQ(most_visited(node_with_edges({{"click 1 1", 0.9, 10, 0.0}, {"click 2 2", 0.1, 6, 0.9}}, 17)), 0u);
    EXPECT_EQ(most_visited(node_with_edges({{"click 1 1", 0.9, 8, 0.1}, {"click 2 2", 0.1, 8, 0.2}}, 17)), 1u);
    EXPECT_EQ(most_visited(node_with_edges({{"click 1 1", 0.2, 8, 0.1}, {"click 2 2", 0.8, 8, 0.1}}, 17)), 1u);
}

TEST(Conservation, DetectsBrokenCounts) {
    EXPECT_NO_THROW(check_conservation(node_with_edges({{"click 1 1", 0.5, 3, 0}, {"click 2 2", 0.5, 2, 0}}, 6)));
    EXPECT_THROW(check_conservation(node_with_edges({{"click 1 1", 0.5, 3, 0}}, 6)), RangeError);
}

TEST(Config, Validate) {
    MctsConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.rounds = 0;
    EXPECT_THROW(cfg.validate(), RangeError);
    cfg = {};
    cfg.lambda = 1.5;
    EXPECT_THROW(cfg.validate(), RangeError);
    cfg = {};
    cfg.c = -0.1;
    EXPECT_THROW(cfg.validate(), RangeError);
}

class SearchTest : public ::testing::Test {
protected:
    std::shared_ptr<const ActionScorer> noisy = noisy_oracle_scorer(env(), 0.3, 0);
    std::shared_ptr<const ValueFn> oracle_v = oracle_value_fn(env());
};

TEST_F(SearchTest, FreshSearchRunsKRoundsAndConserves) {
    const TreeSearch search(env(), noisy, oracle_v);
    const auto [s, o] = env().reset("click-checkboxes", 3);
    const auto r = search.search_act(s, o);
    EXPECT_EQ(r.rounds_run, 16u);
    EXPECT_EQ(r.root->visits, 17u);
    EXPECT_NO_THROW(check_conservation(*r.root));
    EXPECT_EQ(r.action, r.root->edges[r.edge].action);
}

TEST_F(SearchTest, ReusedTreeRunsOnlyTheRemainingRounds) {
    MctsConfig small;
    small.rounds = 9;
    const auto [s, o] = env().reset("click-checkboxes", 3);
    // 9 rounds on a fresh root leave it with N = 10, like a child visited 10 times.
    auto first = TreeSearch(env(), noisy, oracle_v, small).search_act(s, o);
    ASSERT_EQ(first.root->visits, 10u);
    const TreeSearch full(env(), noisy, oracle_v);
    const auto again = full.search_act(s, o, std::move(first.root));
    EXPECT_EQ(again.rounds_run, 6u);
    EXPECT_EQ(again.root->visits, 16u);
    EXPECT_NO_THROW(check_conservation(*again.root));
}

TEST_F(SearchTest, ChildSubtreeCarriesItsVisitCount) {
    const TreeSearch search(env(), noisy, oracle_v);
    auto [s, o] = env().reset("enter-text", 5);
    auto r = search.search_act(s, o);
    const std::size_t n = r.root->edges[r.edge].n;
    auto sub = r.take_subtree();
    ASSERT_TRUE(sub);
    EXPECT_EQ(sub->visits, n);
    auto [next, step] = env().step(s, r.action);
    const auto r2 = search.search_act(next, step.observation, std::move(sub));
    EXPECT_EQ(r2.rounds_run, n >= 16 ? 0u : 16u - n);
    EXPECT_NO_THROW(check_conservation(*r2.root));
}

TEST_F(SearchTest, MismatchedReusedNodeIsDiscarded) {
    const TreeSearch search(env(), noisy, oracle_v);
    const auto [s1, o1] = env().reset("click-color", 1);
    const auto [s2, o2] = env().reset("click-color", 2);
    auto r1 = search.search_act(s1, o1);
    const auto r2 = search.search_act(s2, o2, std::move(r1.root));
    EXPECT_EQ(r2.rounds_run, 16u);
    EXPECT_EQ(r2.root->state, s2);
}

TEST_F(SearchTest, Deterministic) {
    const TreeSearch search(env(), noisy, oracle_v);
    for (const char* task : {"click-test-2", "click-checkboxes", "drag-box"}) {
        const auto [s, o] = env().reset(task, 7);
        const auto a = search.search_act(s, o);
        const auto b = search.search_act(s, o);
        EXPECT_EQ(a.action, b.action) << task;
        EXPECT_EQ(describe(*a.root), describe(*b.root)) << task;
    }
}

TEST_F(SearchTest, TerminalRootThrows) {
    const TreeSearch search(env(), noisy, oracle_v);
    const auto [s, o] = env().reset("click-test", 0);
    auto [done, r] = env().step(s, env().oracle_actions(s).front());
    EXPECT_THROW(search.search_act(done, r.observation), TerminalStateError);
    const TreeSearch empty(env(), std::make_shared<FixedScorer>(std::vector<ScoredAction>{}), oracle_v);
    EXPECT_THROW(empty.search_act(s, o), EmptyBeam);
}

TEST(LeafEvaluation, FailingRolloutClipsToZero) {
    // Only ever clicks the banner: 20 step penalties and no reward.
    auto dead = std::make_shared<FixedScorer>(std::vector<ScoredAction>{{Click{0, 0}, 1.0}});
    MctsConfig cfg;
    cfg.lambda = 0.0;
    const TreeSearch search(env(), dead, std::make_shared<ConstValue>(29), cfg);
    const auto [s, o] = env().reset("click-test", 0);
    EXPECT_EQ(search.rollout(s, o), 0.0);
    EXPECT_EQ(search.evaluate_leaf(s, o), 0.0);
}

TEST(LeafEvaluation, LambdaSelectsMode) {
    const auto oracle = oracle_scorer(env());
    const auto v = std::make_shared<ConstValue>(20);
    const double c20 = unbucketize(20, ValueBuckets{});
    const auto [s, o] = env().reset("click-checkboxes", 2);
    const double steps = static_cast<double>(env().oracle_actions(s).size());
    const double rollout = 1.0 + steps * kAlpha;

    MctsConfig cfg;
    cfg.lambda = 1.0;
    EXPECT_DOUBLE_EQ(TreeSearch(env(), oracle, v, cfg).evaluate_leaf(s, o), c20);
    cfg.lambda = 0.0;
    EXPECT_NEAR(TreeSearch(env(), oracle, v, cfg).evaluate_leaf(s, o), rollout, 1e-12);
    cfg.lambda = 0.1;
    EXPECT_NEAR(TreeSearch(env(), oracle, v, cfg).evaluate_leaf(s, o), 0.1 * c20 + 0.9 * rollout, 1e-12);
}

TEST(LeafEvaluation, TerminalNodeValue) {
    const TreeSearch search(env(), oracle_scorer(env()), std::make_shared<ConstValue>(0));
    const auto [s, o] = env().reset("click-test", 0);
    auto [done, r] = env().step(s, env().oracle_actions(s).front());
    const auto node = search.make_node(done, r.observation);
    EXPECT_TRUE(node->terminal);
    EXPECT_EQ(node->value, 1.0);
    EXPECT_TRUE(node->edges.empty());
}

TEST(OneStepTasks, SearchPicksOracleActionForAnyLambda) {
    const auto v = oracle_value_fn(env());
    for (double lambda : {0.0, 0.1, 1.0}) {
        MctsConfig cfg;
        cfg.lambda = lambda;
        const TreeSearch search(env(), oracle_scorer(env()), v, cfg);
        for (const char* task : {"click-test", "click-test-2", "click-button", "click-color", "grid-coordinate"}) {
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const auto [s, o] = env().reset(task, seed);
                EXPECT_EQ(search.search_act(s, o).action, env().oracle_actions(s).front())
                    << task << " seed " << seed << " lambda " << lambda;
            }
        }
    }
}

}  // namespace
