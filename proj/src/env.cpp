#include "pixgym/env.hpp"

#include <cmath>
#include <limits>

#include "pixgym/errors.hpp"

namespace pixgym {

void EnvConfig::validate() const {
    if (max_steps < 1) throw RangeError("max_steps must be >= 1");
    if (bins.width_px != width || bins.height_px != height) {
        throw RangeError("bin grid must cover the full observation");
    }
    bins.validate();
    if (overlay.banner_height_px < 0 || overlay.banner_height_px >= height) {
        throw RangeError("banner must be shorter than the frame");
    }
}

Env::Env(EnvConfig cfg, const TaskRegistry& tasks) : cfg_(std::move(cfg)), tasks_(&tasks) { cfg_.validate(); }

std::pair<EnvState, Observation> Env::reset(std::string_view task_id, std::uint64_t seed) const {
    const Task& task = tasks_->get(task_id);
    EnvState s;
    s.task_id = std::string(task_id);
    s.seed = seed;
    s.task = task.generate(seed, cfg_.task_geometry());
    s.cursor_px = {cfg_.width / 2, cfg_.height / 2};
    Observation obs = observe(s);
    return {std::move(s), std::move(obs)};
}

Point Env::bin_center(int x_bin, int y_bin) const {
    return {bin_to_px(x_bin, cfg_.width, cfg_.bins.x_bins), bin_to_px(y_bin, cfg_.height, cfg_.bins.y_bins)};
}

std::optional<Point> Env::to_task(Point p) const {
    const int y = p.y - cfg_.overlay.banner_height_px;
    if (y < 0) return std::nullopt;
    return Point{p.x, y};
}

Rect Env::to_observation(const Rect& r) const { return r.translated(0, cfg_.overlay.banner_height_px); }

Click Env::click_in(const Rect& task_rect) const {
    const Rect r = to_observation(task_rect);
    const Point c = r.center();
    const auto& b = cfg_.bins;
    const int x_lo = px_to_bin(std::clamp(r.x, 0, cfg_.width - 1), cfg_.width, b.x_bins);
    const int x_hi = px_to_bin(std::clamp(r.x + r.w - 1, 0, cfg_.width - 1), cfg_.width, b.x_bins);
    const int y_lo = px_to_bin(std::clamp(r.y, 0, cfg_.height - 1), cfg_.height, b.y_bins);
    const int y_hi = px_to_bin(std::clamp(r.y + r.h - 1, 0, cfg_.height - 1), cfg_.height, b.y_bins);

    std::optional<Click> best;
    long long best_d = std::numeric_limits<long long>::max();
    for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
            const Point p = bin_center(x, y);
            if (!r.contains(p)) continue;
            const long long dx = p.x - c.x;
            const long long dy = p.y - c.y;
            if (dx * dx + dy * dy < best_d) {
                best_d = dx * dx + dy * dy;
                best = Click{x, y};
            }
        }
    }
    if (!best) throw NoOracle("no bin centre falls inside the widget");
    return *best;
}

Observation Env::observe(const EnvState& s) const {
    const Task& task = tasks_->get(s.task_id);
    const TaskGeometry geo = cfg_.task_geometry();
    Framebuffer frame(geo.width, geo.height, colors::white);
    task.render(s.task, frame);
    return compose(frame, s.task.instruction, s.cursor_px, s.mouse_down, s.recent_actions, cfg_.overlay,
                   s.steps_taken);
}

std::pair<EnvState, StepResult> Env::step(const EnvState& s, const Action& a) const {
    if (s.done) throw TerminalStateError("episode already finished");
    validate_action(a, cfg_.bins);
    const Task& task = tasks_->get(s.task_id);
    EnvState next = s;

    auto deliver = [&](const TaskEvent& e) {
        if (!next.task.terminal) task.on_event(next.task, e);
    };
    auto drop_at = [&](Point p) {
        const std::optional<Point> from = next.drag_origin ? to_task(*next.drag_origin) : std::nullopt;
        next.mouse_down = false;
        next.drag_origin.reset();
        deliver(PointerDrop{from, to_task(p)});
    };

    std::visit(
        [&](const auto& act) {
            using T = std::decay_t<decltype(act)>;
            if constexpr (std::is_same_v<T, Click>) {
                const Point p = bin_center(act.x_bin, act.y_bin);
                next.cursor_px = p;
                // Clicking while the button is held releases it at the click point.
                if (next.mouse_down) {
                    drop_at(p);
                } else if (auto local = to_task(p)) {
                    deliver(PointerClick{*local});
                }
            } else if constexpr (std::is_same_v<T, BeginDrag>) {
                const Point p = bin_center(act.x_bin, act.y_bin);
                next.cursor_px = p;
                if (!next.mouse_down) {
                    next.mouse_down = true;
                    next.drag_origin = p;
                }
            } else if constexpr (std::is_same_v<T, EndDrag>) {
                const Point p = bin_center(act.x_bin, act.y_bin);
                next.cursor_px = p;
                if (next.mouse_down) drop_at(p);
            } else if constexpr (std::is_same_v<T, Key>) {
                for (const auto& k : act.keys) deliver(KeyPress{act.modifier, k});
            } else {
                deliver(ScrollEvent{act.z_bin});
            }
        },
        a);

    next.recent_actions.push_back(serialize_action(a));
    const std::size_t keep = cfg_.overlay.history_len;
    if (next.recent_actions.size() > keep) {
        next.recent_actions.erase(next.recent_actions.begin(),
                                  next.recent_actions.end() - static_cast<std::ptrdiff_t>(keep));
    }
    ++next.steps_taken;

    StepResult result;
    if (next.task.terminal) {
        next.done = true;
        result.raw_reward = task.terminal_reward(next.task);
    } else if (next.steps_taken >= cfg_.max_steps) {
        next.done = true;
        next.incomplete = true;
        result.raw_reward = -1.0;
    }
    result.done = next.done;
    result.incomplete = next.incomplete;
    result.observation = observe(next);
    return {std::move(next), std::move(result)};
}

std::vector<Action> Env::oracle_actions(const EnvState& s) const {
    if (s.done) throw NoOracle("state is terminal");
    const Task& task = tasks_->get(s.task_id);
    PointerContext pointer;
    pointer.mouse_down = s.mouse_down;
    if (s.drag_origin) pointer.drag_origin = to_task(*s.drag_origin);
    return lower_plan(task.oracle(s.task, pointer), s);
}

std::vector<Action> Env::lower_plan(const std::vector<OracleStep>& plan, const EnvState& s) const {
    std::vector<Action> out;
    std::optional<Point> origin = s.drag_origin;  // observation coordinates
    for (const auto& step : plan) {
        if (const auto* c = std::get_if<ClickIn>(&step)) {
            out.emplace_back(click_in(c->rect));
        } else if (const auto* b = std::get_if<BeginDragIn>(&step)) {
            const Click at = click_in(b->rect);
            out.emplace_back(BeginDrag{at.x_bin, at.y_bin});
            origin = bin_center(at.x_bin, at.y_bin);
        } else if (const auto* d = std::get_if<DropInto>(&step)) {
            if (!origin) throw NoOracle("drop without a drag in progress");
            const Rect box = to_observation(d->box);
            const Rect target = to_observation(d->target);
            // The box moves by (release - origin); pick the release bin that
            // lands the box centre nearest the target centre.
            const Point bc = box.center();
            const Point tc = target.center();
            const Point from = origin.value_or(Point{});
            std::optional<EndDrag> best;
            long long best_d = std::numeric_limits<long long>::max();
            for (int y = 0; y < cfg_.bins.y_bins; ++y) {
                for (int x = 0; x < cfg_.bins.x_bins; ++x) {
                    const Point p = bin_center(x, y);
                    if (!to_task(p)) continue;
                    const Point moved{bc.x + p.x - from.x, bc.y + p.y - from.y};
                    if (!target.contains(moved)) continue;
                    const long long dx = moved.x - tc.x;
                    const long long dy = moved.y - tc.y;
                    if (dx * dx + dy * dy < best_d) {
                        best_d = dx * dx + dy * dy;
                        best = EndDrag{x, y};
                    }
                }
            }
            if (!best) throw NoOracle("no release point drops the box into the target");
            out.emplace_back(*best);
            origin.reset();
        } else if (std::holds_alternative<Release>(step)) {
            // Bin (0, 0) lies on the banner, where a release hits no widget.
            out.emplace_back(EndDrag{0, 0});
            origin.reset();
        } else {
            out.emplace_back(Key{std::nullopt, {std::get<Type>(step).key}});
        }
    }
    return out;
}

double raw_to_score(double raw) {
    if (!(raw >= -1.0 && raw <= 1.0)) throw RangeError("raw reward outside [-1, 1]");
    return (raw + 1.0) * 50.0;
}

double episode_score(double raw, bool incomplete) { return incomplete ? 0.0 : raw_to_score(raw); }

}  // namespace pixgym
