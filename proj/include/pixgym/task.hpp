#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pixgym/action.hpp"
#include "pixgym/framebuffer.hpp"

namespace pixgym {

enum class WidgetKind { button, checkbox, text_field, draggable_box, drop_target, colored_square, grid_cell };

std::string_view widget_kind_name(WidgetKind k);

struct Widget {
    WidgetKind kind = WidgetKind::button;
    Rect rect;  // task-frame coordinates
    std::string label;
    Rgb color = colors::button_gray;
    bool checked = false;
    std::string content;

    friend bool operator==(const Widget&, const Widget&) = default;
};

/// Task-specific state. All eight tasks share this widget-based shape, which
/// keeps EnvState a plain copyable value.
struct TaskState {
    std::vector<Widget> widgets;
    std::string instruction;
    std::vector<std::size_t> targets;  // widget indices the instruction refers to
    std::string goal_text;
    std::optional<std::size_t> focus;
    bool terminal = false;
    double raw = 0.0;

    friend bool operator==(const TaskState&, const TaskState&) = default;
};

/// Events delivered to a task, in task-frame coordinates. A pointer position
/// outside the task frame (e.g. on the instruction banner) is nullopt.
struct PointerClick {
    Point at;
};
struct PointerDrop {
    std::optional<Point> from;
    std::optional<Point> to;
};
struct KeyPress {
    std::optional<Modifier> modifier;
    std::string key;
};
struct ScrollEvent {
    int z = 0;
};
using TaskEvent = std::variant<PointerClick, PointerDrop, KeyPress, ScrollEvent>;

/// Oracle plans are expressed against widget rectangles; the environment
/// turns them into bin-addressed actions.
struct ClickIn {
    Rect rect;
};
struct BeginDragIn {
    Rect rect;
};
/// Release so that `box` (grabbed at the current drag origin) ends centred in `target`.
struct DropInto {
    Rect box;
    Rect target;
};
/// Release the mouse somewhere that hits nothing.
struct Release {};
struct Type {
    std::string key;
};
using OracleStep = std::variant<ClickIn, BeginDragIn, DropInto, Release, Type>;

/// Pointer state owned by the environment that some oracles need.
struct PointerContext {
    bool mouse_down = false;
    std::optional<Point> drag_origin;  // task-frame coordinates, nullopt if on banner
};

struct TaskGeometry {
    int width = 160;
    int height = 182;
};

class Task {
public:
    virtual ~Task() = default;

    virtual std::string_view id() const = 0;
    virtual std::size_t horizon_hint() const = 0;

    /// Pure function of the seed.
    virtual TaskState generate(std::uint64_t seed, const TaskGeometry& geo) const = 0;
    virtual void on_event(TaskState& state, const TaskEvent& event) const = 0;
    /// Remaining plan from `state`; throws NoOracle for inconsistent states.
    virtual std::vector<OracleStep> oracle(const TaskState& state, const PointerContext& pointer) const = 0;

    /// Raw reward in [-1, 1]; throws NonTerminal if the task has not ended.
    double terminal_reward(const TaskState& state) const;

    void render(const TaskState& state, Framebuffer& frame) const;
};

class TaskRegistry {
public:
    void add(std::unique_ptr<Task> task);
    /// Throws UnknownTask.
    const Task& get(std::string_view id) const;
    bool contains(std::string_view id) const;
    std::vector<std::string> ids() const;

private:
    std::vector<std::unique_ptr<Task>> tasks_;
};

/// The eight built-in tasks.
const TaskRegistry& builtin_tasks();

/// Task ids whose reward is strictly +1 / -1.
bool is_binary_task(std::string_view id);

}  // namespace pixgym
