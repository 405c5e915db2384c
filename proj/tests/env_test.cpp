#include <gtest/gtest.h>

#include <set>

#include "pixgym/env.hpp"
#include "pixgym/errors.hpp"
#include "support/generators.hpp"

using namespace pixgym;

namespace {

// Bin (0, 0) lies on the instruction banner, where a click hits no widget.
const Action kBannerClick = Click{0, 0};

class EnvTest : public ::testing::Test {
protected:
    Env env;
};

TEST_F(EnvTest, ResetIsDeterministic) {
    for (const auto& task : env.tasks().ids()) {
        const auto [s1, o1] = env.reset(task, 42);
        const auto [s2, o2] = env.reset(task, 42);
        EXPECT_EQ(s1, s2) << task;
        EXPECT_EQ(o1.frame, o2.frame) << task;
        EXPECT_EQ(o1.step_index, 0u);
    }
}

TEST_F(EnvTest, DifferentSeedsGiveDifferentLayouts) {
    for (const auto& task : env.tasks().ids()) {
        int differ = 0;
        for (std::uint64_t i = 0; i < 100; ++i) {
            if (env.reset(task, 2 * i).second.digest != env.reset(task, 2 * i + 1).second.digest) ++differ;
        }
        EXPECT_GT(differ, 90) << task;
    }
}

TEST_F(EnvTest, UnknownTask) { EXPECT_THROW(env.reset("no-such-task", 0), UnknownTask); }

TEST_F(EnvTest, InitialCursorAndBookkeeping) {
    const auto [s, o] = env.reset("click-test", 0);
    EXPECT_EQ(s.cursor_px, (Point{80, 105}));
    EXPECT_FALSE(s.mouse_down);
    EXPECT_FALSE(s.drag_origin.has_value());
    EXPECT_EQ(s.steps_taken, 0u);
    EXPECT_FALSE(s.done);
    EXPECT_EQ(o.frame.width(), 160);
    EXPECT_EQ(o.frame.height(), 210);
}

TEST_F(EnvTest, CorrectClickEndsWithPlusOne) {
    const auto [s, o] = env.reset("click-test-2", 5);
    const auto plan = env.oracle_actions(s);
    ASSERT_EQ(plan.size(), 1u);
    const auto [next, r] = env.step(s, plan.front());
    EXPECT_TRUE(r.done);
    ASSERT_TRUE(r.raw_reward.has_value());
    EXPECT_EQ(*r.raw_reward, 1.0);
    EXPECT_FALSE(r.incomplete);
}

TEST_F(EnvTest, TimeoutScoresZero) {
    auto [s, o] = env.reset("click-test", 0);
    StepResult last;
    for (int i = 0; i < 30; ++i) {
        ASSERT_FALSE(s.done) << i;
        auto [next, r] = env.step(s, kBannerClick);
        if (i < 29) {
            EXPECT_FALSE(r.raw_reward.has_value()) << i;  // reward only at the end
        }
        s = std::move(next);
        last = std::move(r);
    }
    EXPECT_TRUE(last.done);
    EXPECT_TRUE(last.incomplete);
    ASSERT_TRUE(last.raw_reward.has_value());
    EXPECT_EQ(episode_score(*last.raw_reward, last.incomplete), 0.0);
    EXPECT_THROW(env.step(s, kBannerClick), TerminalStateError);
}

TEST_F(EnvTest, StepsTakenIncrementsByOne) {
    auto [s, o] = env.reset("click-checkboxes", 3);
    for (std::size_t i = 1; i <= 5; ++i) {
        auto [next, r] = env.step(s, kBannerClick);
        EXPECT_EQ(next.steps_taken, i);
        EXPECT_EQ(r.observation.step_index, i);
        s = std::move(next);
    }
}

TEST_F(EnvTest, StepIsPure) {
    const auto [s, o] = env.reset("enter-text", 9);
    const EnvState before = s;
    const auto a = env.oracle_actions(s).front();
    const auto r1 = env.step(s, a);
    const auto r2 = env.step(s, a);
    EXPECT_EQ(s, before);
    EXPECT_EQ(env.observe(s).frame, o.frame);
    EXPECT_EQ(r1.first, r2.first);
    EXPECT_EQ(r1.second.observation.digest, r2.second.observation.digest);
}

TEST_F(EnvTest, ClonesOfMidDragStateAreIdentical) {
    auto [s, o] = env.reset("drag-box", 1);
    auto [mid, r] = env.step(s, env.oracle_actions(s).front());
    ASSERT_TRUE(mid.mouse_down);
    ASSERT_TRUE(mid.drag_origin.has_value());
    const Digest d = env.observe(mid).digest;
    std::set<Digest> seen;
    for (int i = 0; i < 1000; ++i) seen.insert(env.observe(clone(mid)).digest);
    EXPECT_EQ(seen, std::set<Digest>{d});
    EXPECT_EQ(d, r.observation.digest);
}

TEST_F(EnvTest, DragBookkeeping) {
    auto [s, o] = env.reset("drag-box", 2);
    auto [down, r1] = env.step(s, BeginDrag{5, 5});
    EXPECT_TRUE(down.mouse_down);
    EXPECT_EQ(down.drag_origin, std::make_optional(env.bin_center(5, 5)));
    // A second begin_drag only moves the cursor.
    auto [again, r2] = env.step(down, BeginDrag{6, 6});
    EXPECT_EQ(again.drag_origin, down.drag_origin);
    EXPECT_EQ(again.cursor_px, env.bin_center(6, 6));
    auto [up, r3] = env.step(again, EndDrag{7, 7});
    EXPECT_FALSE(up.mouse_down);
    EXPECT_FALSE(up.drag_origin.has_value());
    // end_drag with the button up only moves the cursor.
    auto [moved, r4] = env.step(up, EndDrag{8, 8});
    EXPECT_EQ(moved.cursor_px, env.bin_center(8, 8));
    EXPECT_FALSE(moved.mouse_down);
}

TEST_F(EnvTest, MouseDownMarkerFollowsState) {
    auto [s, o] = env.reset("drag-box", 2);
    const Rect m = env.config().overlay.mousedown_marker;
    EXPECT_EQ(o.frame.at(m.x, m.y), colors::banner_yellow);
    auto [down, r] = env.step(s, BeginDrag{5, 5});
    EXPECT_EQ(r.observation.frame.at(m.x, m.y), colors::marker_red);
}

TEST_F(EnvTest, RecentActionsBoundedByHistoryLength) {
    auto [s, o] = env.reset("click-checkboxes", 4);
    for (int i = 0; i < 8; ++i) {
        auto [next, r] = env.step(s, Scroll{i % 3});
        s = std::move(next);
    }
    ASSERT_EQ(s.recent_actions.size(), 5u);
    EXPECT_EQ(s.recent_actions.back(), "scroll 1");
}

TEST_F(EnvTest, RandomSequencesReplayIdentically) {
    SplitMix64 rng(99);
    for (const auto& task : env.tasks().ids()) {
        for (int trial = 0; trial < 20; ++trial) {
            const std::uint64_t seed = rng.next() % 1000;
            std::vector<Action> actions;
            for (int i = 0; i < 30; ++i) actions.push_back(test_support::random_action(rng, env.config().bins));
            auto run = [&] {
                std::vector<Digest> ds;
                auto [s, o] = env.reset(task, seed);
                for (const auto& a : actions) {
                    if (s.done) break;
                    auto [next, r] = env.step(s, a);
                    ds.push_back(r.observation.digest);
                    s = std::move(next);
                }
                return std::pair{ds, s};
            };
            const auto a = run();
            const auto b = run();
            ASSERT_EQ(a.first, b.first) << task;
            ASSERT_EQ(a.second, b.second) << task;
            EXPECT_LE(a.second.steps_taken, env.config().max_steps);
        }
    }
}

TEST_F(EnvTest, ClickInPicksABinCentreInsideTheRect) {
    const Rect r{40, 20, 20, 10};  // task coordinates
    const Click c = env.click_in(r);
    const auto local = env.to_task(env.bin_center(c.x_bin, c.y_bin));
    ASSERT_TRUE(local.has_value());
    EXPECT_TRUE(r.contains(*local));
    EXPECT_THROW(env.click_in(Rect{0, 0, 1, 1}), NoOracle);
}

TEST(Score, LinearMap) {
    EXPECT_EQ(raw_to_score(1.0), 100.0);
    EXPECT_EQ(raw_to_score(-1.0), 0.0);
    EXPECT_EQ(raw_to_score(0.0), 50.0);
    EXPECT_EQ(raw_to_score(0.8), 90.0);
    EXPECT_THROW(raw_to_score(1.5), RangeError);
    EXPECT_EQ(episode_score(1.0, true), 0.0);
}

TEST(EnvConfig, Validate) {
    EnvConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.max_steps = 0;
    EXPECT_THROW(cfg.validate(), RangeError);
}

}  // namespace
