#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pixgym/action.hpp"
#include "pixgym/observation.hpp"
#include "pixgym/task.hpp"

namespace pixgym {

struct EnvConfig {
    std::size_t max_steps = 30;
    int width = 160;
    int height = 210;
    BinConfig bins;
    OverlayConfig overlay;

    void validate() const;
    TaskGeometry task_geometry() const { return {width, height - overlay.banner_height_px}; }
};

/// Full MDP state. A plain value: copying it is cloning.
struct EnvState {
    std::string task_id;
    std::uint64_t seed = 0;
    TaskState task;
    Point cursor_px;
    bool mouse_down = false;
    std::optional<Point> drag_origin;  // observation coordinates
    std::size_t steps_taken = 0;
    std::vector<std::string> recent_actions;  // at most overlay.history_len
    bool done = false;
    bool incomplete = false;  // ended by the step limit

    friend bool operator==(const EnvState&, const EnvState&) = default;
};

inline EnvState clone(const EnvState& s) { return s; }

struct StepResult {
    Observation observation;
    std::optional<double> raw_reward;  // present iff done
    bool done = false;
    bool incomplete = false;
};

/// Deterministic environment over a task registry. All members are const;
/// one Env may be shared by any number of threads.
class Env {
public:
    explicit Env(EnvConfig cfg = {}, const TaskRegistry& tasks = builtin_tasks());

    const EnvConfig& config() const { return cfg_; }
    const TaskRegistry& tasks() const { return *tasks_; }

    std::pair<EnvState, Observation> reset(std::string_view task_id, std::uint64_t seed) const;

    /// Pure transition f(s, a). Throws TerminalStateError on a finished state.
    std::pair<EnvState, StepResult> step(const EnvState& s, const Action& a) const;

    Observation observe(const EnvState& s) const;

    /// Scripted actions that finish the task from `s` with raw reward >= 0.8.
    std::vector<Action> oracle_actions(const EnvState& s) const;

    /// Centre pixel (observation coordinates) of a bin pair.
    Point bin_center(int x_bin, int y_bin) const;
    /// A click whose bin centre lies inside `task_rect` (task-frame coordinates),
    /// as close to the rect centre as possible. Throws NoOracle if none exists.
    Click click_in(const Rect& task_rect) const;
    std::optional<Point> to_task(Point obs_px) const;
    Rect to_observation(const Rect& task_rect) const;

private:
    std::vector<Action> lower_plan(const std::vector<OracleStep>& plan, const EnvState& s) const;

    EnvConfig cfg_;
    const TaskRegistry* tasks_;
};

/// Linear map of a raw reward in [-1, 1] onto [0, 100].
double raw_to_score(double raw);

/// Per-episode score: 0 for incomplete episodes, raw_to_score otherwise.
double episode_score(double raw, bool incomplete);

}  // namespace pixgym
