#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

#include "pixgym/errors.hpp"
#include "pixgym/font.hpp"
#include "pixgym/rng.hpp"
#include "pixgym/task.hpp"

namespace pixgym {

namespace {

constexpr std::array<std::string_view, 40> kWords = {
    "cat", "dog", "sun", "tree", "blue", "red",  "book", "fish", "bird", "cake",
    "milk", "star", "moon", "rain", "wind", "leaf", "rock", "sand", "ship", "door",
    "lamp", "desk", "cup", "hat",  "pen",  "key",  "box",  "car",  "bus",  "map",
    "egg", "ice", "owl", "fox",  "bee",  "ant",  "jam",  "tea",  "pie",  "web"};

struct NamedColor {
    std::string_view name;
    Rgb rgb;
};

constexpr std::array<NamedColor, 10> kPalette = {{
    {"red", {230, 25, 25}},
    {"green", {40, 170, 60}},
    {"blue", {30, 80, 220}},
    {"yellow", {240, 200, 20}},
    {"orange", {245, 130, 30}},
    {"purple", {140, 50, 180}},
    {"pink", {240, 130, 200}},
    {"brown", {140, 90, 40}},
    {"cyan", {40, 200, 210}},
    {"gray", {128, 128, 128}},
}};

constexpr Rgb kFocusBlue{30, 90, 230};
constexpr Rgb kTargetFill{200, 240, 200};
constexpr Rgb kTargetBorder{30, 130, 30};
constexpr Rgb kBoxColor{30, 80, 220};

void finish(TaskState& s, double raw) {
    s.terminal = true;
    s.raw = raw;
}

// Topmost widget under `p`.
std::optional<std::size_t> hit(const TaskState& s, Point p) {
    for (std::size_t i = s.widgets.size(); i-- > 0;) {
        if (s.widgets[i].rect.contains(p)) return i;
    }
    return std::nullopt;
}

// A click, or a press and release on the same widget, acts as a click.
std::optional<Point> click_point(const TaskState& s, const TaskEvent& e) {
    if (const auto* c = std::get_if<PointerClick>(&e)) return c->at;
    if (const auto* d = std::get_if<PointerDrop>(&e)) {
        if (!d->from || !d->to) return std::nullopt;
        const auto a = hit(s, *d->from);
        if (a && a == hit(s, *d->to)) return d->to;
    }
    return std::nullopt;
}

// Places a w x h rect that keeps `gap` pixels from every rect in `placed`.
Rect place(SplitMix64& rng, const TaskGeometry& geo, const std::vector<Rect>& placed, int w, int h,
           int gap = 4) {
    constexpr int kMargin = 2;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Rect r{rng.range(kMargin, geo.width - w - kMargin), rng.range(kMargin, geo.height - h - kMargin), w, h};
        const Rect grown{r.x - gap, r.y - gap, r.w + 2 * gap, r.h + 2 * gap};
        if (std::none_of(placed.begin(), placed.end(), [&](const Rect& o) { return grown.intersects(o); })) {
            return r;
        }
    }
    throw std::logic_error("layout does not fit the task frame");
}

std::vector<std::size_t> sample_indices(SplitMix64& rng, std::size_t population, std::size_t n) {
    std::vector<std::size_t> idx(population);
    for (std::size_t i = 0; i < population; ++i) idx[i] = i;
    rng.shuffle(idx);
    idx.resize(n);
    return idx;
}

Widget button(Rect r, std::string label) {
    Widget w;
    w.kind = WidgetKind::button;
    w.rect = r;
    w.label = std::move(label);
    return w;
}

void require_targets(const TaskState& s, std::size_t count) {
    if (s.targets.size() < count) throw NoOracle("state has no target widget");
    for (auto t : s.targets) {
        if (t >= s.widgets.size()) throw NoOracle("target index out of range");
    }
}

void release_if_down(const PointerContext& pointer, std::vector<OracleStep>& steps) {
    if (pointer.mouse_down) steps.emplace_back(Release{});
}

std::string key_name(char c) { return c == ' ' ? "space" : std::string(1, c); }

// ---------------------------------------------------------------------------

class ClickTest final : public Task {
public:
    std::string_view id() const override { return "click-test"; }
    std::size_t horizon_hint() const override { return 1; }

    TaskState generate(std::uint64_t seed, const TaskGeometry& geo) const override {
        SplitMix64 rng(seed);
        TaskState s;
        s.widgets.push_back(button(place(rng, geo, {}, 60, 20), "Click Me!"));
        s.targets = {0};
        s.instruction = "Click the button.";
        return s;
    }

    void on_event(TaskState& s, const TaskEvent& e) const override {
        if (auto p = click_point(s, e); p && s.widgets[0].rect.contains(*p)) finish(s, 1.0);
    }

    std::vector<OracleStep> oracle(const TaskState& s, const PointerContext& pointer) const override {
        require_targets(s, 1);
        std::vector<OracleStep> steps;
        release_if_down(pointer, steps);
        steps.emplace_back(ClickIn{s.widgets[s.targets[0]].rect});
        return steps;
    }
};

// Shared shape of the "click exactly one of several widgets" tasks: any
// widget other than the target ends the episode with -1.
class PickOneTask : public Task {
public:
    void on_event(TaskState& s, const TaskEvent& e) const override {
        const auto p = click_point(s, e);
        if (!p) return;
        const auto w = hit(s, *p);
        if (!w) return;
        finish(s, *w == s.targets.at(0) ? 1.0 : -1.0);
    }

    std::vector<OracleStep> oracle(const TaskState& s, const PointerContext& pointer) const override {
        require_targets(s, 1);
        std::vector<OracleStep> steps;
        release_if_down(pointer, steps);
        steps.emplace_back(ClickIn{s.widgets[s.targets[0]].rect});
        return steps;
    }
};

class ClickTest2 final : public PickOneTask {
public:
    std::string_view id() const override { return "click-test-2"; }
    std::size_t horizon_hint() const override { return 1; }

    TaskState generate(std::uint64_t seed, const TaskGeometry& geo) const override {
        SplitMix64 rng(seed);
        TaskState s;
        const Rect a = place(rng, geo, {}, 40, 20);
        const Rect b = place(rng, geo, {a}, 40, 20);
        s.widgets = {button(a, "ONE"), button(b, "TWO")};
        const std::size_t target = rng.below(2);
        s.targets = {target};
        s.instruction = "Click button " + s.widgets[target].label + ".";
        return s;
    }
};

class ClickButton final : public PickOneTask {
public:
    std::string_view id() const override { return "click-button"; }
    std::size_t horizon_hint() const override { return 1; }

    TaskState generate(std::uint64_t seed, const TaskGeometry& geo) const override {
        SplitMix64 rng(seed);
        TaskState s;
        const int n = rng.range(3, 6);
        const auto words = sample_indices(rng, kWords.size(), static_cast<std::size_t>(n));
        std::vector<Rect> placed;
        for (int i = 0; i < n; ++i) {
            placed.push_back(place(rng, geo, placed, 40, 18));
            s.widgets.push_back(button(placed.back(), std::string(kWords[words[i]])));
        }
        const std::size_t target = rng.below(static_cast<std::uint64_t>(n));
        s.targets = {target};
        s.instruction = "Click on the \"" + s.widgets[target].label + "\" button.";
        return s;
    }
};

class ClickColor final : public PickOneTask {
public:
    std::string_view id() const override { return "click-color"; }
    std::size_t horizon_hint() const override { return 1; }

    TaskState generate(std::uint64_t seed, const TaskGeometry& geo) const override {
        SplitMix64 rng(seed);
        TaskState s;
        const int n = rng.range(4, 8);
        const auto picks = sample_indices(rng, kPalette.size(), static_cast<std::size_t>(n));
        std::vector<Rect> placed;
        for (int i = 0; i < n; ++i) {
            placed.push_back(place(rng, geo, placed, 20, 20));
            Widget w;
            w.kind = WidgetKind::colored_square;
            w.rect = placed.back();
            w.label = std::string(kPalette[picks[i]].name);
            w.color = kPalette[picks[i]].rgb;
            s.widgets.push_back(w);
        }
        const std::size_t target = rng.below(static_cast<std::uint64_t>(n));
        s.targets = {target};
        s.instruction = "Click on the " + s.widgets[target].label + " square.";
        return s;
    }
};

class GridCoordinate final : public PickOneTask {
public:
    static constexpr int kCell = 24;

    std::string_view id() const override { return "grid-coordinate"; }
    std::size_t horizon_hint() const override { return 1; }

    TaskState generate(std::uint64_t seed, const TaskGeometry& geo) const override {
        SplitMix64 rng(seed);
        TaskState s;
        const int n = rng.range(2, 5);
        const int ox = rng.range(2, geo.width - 2 - n * kCell);
        const int oy = rng.range(2, geo.height - 2 - n * kCell);
        for (int row = 0; row < n; ++row) {
            for (int col = 0; col < n; ++col) {
                Widget w;
                w.kind = WidgetKind::grid_cell;
                w.rect = {ox + col * kCell, oy + row * kCell, kCell, kCell};
                w.label = std::to_string(col) + "," + std::to_string(row);
                s.widgets.push_back(w);
            }
        }
        const int tx = rng.range(0, n - 1);
        const int ty = rng.range(0, n - 1);
        s.targets = {static_cast<std::size_t>(ty * n + tx)};
        s.instruction = "click the cell (" + std::to_string(tx) + ", " + std::to_string(ty) + ")";
        return s;
    }
};

class ClickCheckboxes final : public Task {
public:
    static constexpr int kRow = 16;

    std::string_view id() const override { return "click-checkboxes"; }
    std::size_t horizon_hint() const override { return 4; }

    TaskState generate(std::uint64_t seed, const TaskGeometry& geo) const override {
        SplitMix64 rng(seed);
        TaskState s;
        const int n = rng.range(3, 6);
        const auto words = sample_indices(rng, kWords.size(), static_cast<std::size_t>(n));
        const int x = rng.range(2, geo.width - 2 - 60);
        const int y0 = rng.range(2, geo.height - 2 - (n * kRow + 4 + 18));
        for (int i = 0; i < n; ++i) {
            Widget w;
            w.kind = WidgetKind::checkbox;
            w.rect = {x, y0 + i * kRow, 60, 12};
            w.label = std::string(kWords[words[i]]);
            s.widgets.push_back(w);
        }
        s.widgets.push_back(button({x, y0 + n * kRow + 4, 50, 18}, "Submit"));

        const int m = rng.range(1, std::min(3, n));
        auto picks = sample_indices(rng, static_cast<std::size_t>(n), static_cast<std::size_t>(m));
        std::sort(picks.begin(), picks.end());
        s.targets = picks;

        std::string names;
        for (std::size_t i = 0; i < picks.size(); ++i) {
            if (i > 0) names += ", ";
            names += s.widgets[picks[i]].label;
        }
        s.instruction = "Select " + names + " and click Submit.";
        return s;
    }

    void on_event(TaskState& s, const TaskEvent& e) const override {
        const auto p = click_point(s, e);
        if (!p) return;
        const auto w = hit(s, *p);
        if (!w) return;
        if (s.widgets[*w].kind == WidgetKind::checkbox) {
            s.widgets[*w].checked = !s.widgets[*w].checked;
            return;
        }
        bool ok = true;
        for (std::size_t i = 0; i + 1 < s.widgets.size(); ++i) {
            const bool wanted = std::find(s.targets.begin(), s.targets.end(), i) != s.targets.end();
            ok = ok && s.widgets[i].checked == wanted;
        }
        finish(s, ok ? 1.0 : -1.0);
    }

    std::vector<OracleStep> oracle(const TaskState& s, const PointerContext& pointer) const override {
        require_targets(s, 1);
        if (s.widgets.empty() || s.widgets.back().kind != WidgetKind::button) throw NoOracle("no submit button");
        std::vector<OracleStep> steps;
        release_if_down(pointer, steps);
        for (std::size_t i = 0; i + 1 < s.widgets.size(); ++i) {
            const bool wanted = std::find(s.targets.begin(), s.targets.end(), i) != s.targets.end();
            if (s.widgets[i].checked != wanted) steps.emplace_back(ClickIn{s.widgets[i].rect});
        }
        steps.emplace_back(ClickIn{s.widgets.back().rect});
        return steps;
    }
};

class EnterText final : public Task {
public:
    std::string_view id() const override { return "enter-text"; }
    // click field + up to four letters + submit
    std::size_t horizon_hint() const override { return 6; }

    TaskState generate(std::uint64_t seed, const TaskGeometry& geo) const override {
        SplitMix64 rng(seed);
        TaskState s;
        s.goal_text = std::string(kWords[rng.below(kWords.size())]);
        Widget field;
        field.kind = WidgetKind::text_field;
        field.rect = place(rng, geo, {}, 100, 16);
        field.color = colors::white;
        s.widgets.push_back(field);
        s.widgets.push_back(button(place(rng, geo, {field.rect}, 50, 18), "Submit"));
        s.targets = {0};
        s.instruction = "Enter \"" + s.goal_text + "\" and press Submit.";
        return s;
    }

    // 2 * (matched prefix / longer length) - 1.
    static double partial_reward(const std::string& typed, const std::string& goal) {
        std::size_t match = 0;
        while (match < typed.size() && match < goal.size() && typed[match] == goal[match]) ++match;
        const std::size_t denom = std::max(typed.size(), goal.size());
        const double frac = denom == 0 ? 1.0 : static_cast<double>(match) / static_cast<double>(denom);
        return 2.0 * frac - 1.0;
    }

    void on_event(TaskState& s, const TaskEvent& e) const override {
        if (const auto* k = std::get_if<KeyPress>(&e)) {
            if (!s.focus) return;
            if (k->modifier == Modifier::ctrl || k->modifier == Modifier::alt) return;
            auto& content = s.widgets[*s.focus].content;
            if (k->key == "backspace") {
                if (!content.empty()) content.pop_back();
            } else if (k->key == "space") {
                content += ' ';
            } else if (k->key.size() == 1) {
                char c = k->key[0];
                if (k->modifier == Modifier::shift) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
                content += c;
            }
            return;
        }
        const auto p = click_point(s, e);
        if (!p) return;
        const auto w = hit(s, *p);
        if (w && s.widgets[*w].kind == WidgetKind::text_field) {
            s.focus = *w;
        } else if (w && s.widgets[*w].kind == WidgetKind::button) {
            finish(s, partial_reward(s.widgets[0].content, s.goal_text));
        } else {
            s.focus.reset();
        }
    }

    std::vector<OracleStep> oracle(const TaskState& s, const PointerContext& pointer) const override {
        require_targets(s, 1);
        if (s.widgets.size() != 2 || s.goal_text.empty()) throw NoOracle("malformed enter-text state");
        std::vector<OracleStep> steps;
        release_if_down(pointer, steps);
        if (s.focus != std::optional<std::size_t>{0}) steps.emplace_back(ClickIn{s.widgets[0].rect});
        const std::string& typed = s.widgets[0].content;
        std::size_t match = 0;
        while (match < typed.size() && match < s.goal_text.size() && typed[match] == s.goal_text[match]) ++match;
        for (std::size_t i = match; i < typed.size(); ++i) steps.emplace_back(Type{"backspace"});
        for (std::size_t i = match; i < s.goal_text.size(); ++i) steps.emplace_back(Type{key_name(s.goal_text[i])});
        steps.emplace_back(ClickIn{s.widgets[1].rect});
        return steps;
    }
};

class DragBox final : public Task {
public:
    std::string_view id() const override { return "drag-box"; }
    std::size_t horizon_hint() const override { return 2; }

    // widgets: [0] drop target, [1] draggable box (drawn on top).
    TaskState generate(std::uint64_t seed, const TaskGeometry& geo) const override {
        SplitMix64 rng(seed);
        TaskState s;
        Widget target;
        target.kind = WidgetKind::drop_target;
        target.rect = place(rng, geo, {}, 30, 30, 6);
        target.color = kTargetFill;
        Widget box;
        box.kind = WidgetKind::draggable_box;
        box.rect = place(rng, geo, {target.rect}, 14, 14, 6);
        box.color = kBoxColor;
        s.widgets = {target, box};
        s.targets = {0};
        s.instruction = "Drag the box into the target.";
        return s;
    }

    void on_event(TaskState& s, const TaskEvent& e) const override {
        const auto* d = std::get_if<PointerDrop>(&e);
        if (!d || !d->from || !d->to) return;
        Widget& box = s.widgets[1];
        if (!box.rect.contains(*d->from)) return;
        // The grabbed point follows the pointer, so it always stays in the frame.
        const Rect moved = box.rect.translated(d->to->x - d->from->x, d->to->y - d->from->y);
        box.rect = moved;
        finish(s, s.widgets[0].rect.contains(moved.center()) ? 1.0 : -1.0);
    }

    std::vector<OracleStep> oracle(const TaskState& s, const PointerContext& pointer) const override {
        require_targets(s, 1);
        if (s.widgets.size() != 2) throw NoOracle("malformed drag-box state");
        const Rect box = s.widgets[1].rect;
        const Rect target = s.widgets[0].rect;
        std::vector<OracleStep> steps;
        if (pointer.mouse_down) {
            if (pointer.drag_origin && box.contains(*pointer.drag_origin)) {
                steps.emplace_back(DropInto{box, target});
                return steps;
            }
            steps.emplace_back(Release{});
        }
        steps.emplace_back(BeginDragIn{box});
        steps.emplace_back(DropInto{box, target});
        return steps;
    }
};

}  // namespace

std::string_view widget_kind_name(WidgetKind k) {
    switch (k) {
        case WidgetKind::button: return "button";
        case WidgetKind::checkbox: return "checkbox";
        case WidgetKind::text_field: return "text_field";
        case WidgetKind::draggable_box: return "draggable_box";
        case WidgetKind::drop_target: return "drop_target";
        case WidgetKind::colored_square: return "colored_square";
        case WidgetKind::grid_cell: return "grid_cell";
    }
    return "";
}

double Task::terminal_reward(const TaskState& state) const {
    if (!state.terminal) throw NonTerminal(std::string(id()) + ": episode has not ended");
    return state.raw;
}

void Task::render(const TaskState& s, Framebuffer& fb) const {
    for (std::size_t i = 0; i < s.widgets.size(); ++i) {
        const Widget& w = s.widgets[i];
        const Rect& r = w.rect;
        switch (w.kind) {
            case WidgetKind::button: {
                fb.fill_rect(r, w.color);
                fb.stroke_rect(r, colors::black);
                const int tx = r.x + (r.w - font::text_width(w.label) + 1) / 2;
                const int ty = r.y + (r.h - font::kGlyphHeight) / 2;
                font::draw_text(fb, tx, ty, w.label, colors::black, r.x + r.w - 1);
                break;
            }
            case WidgetKind::checkbox: {
                const Rect box{r.x, r.y + 1, 10, 10};
                fb.fill_rect(box, colors::white);
                fb.stroke_rect(box, colors::black);
                if (w.checked) fb.fill_rect({box.x + 2, box.y + 2, 6, 6}, colors::black);
                font::draw_text(fb, r.x + 14, r.y + 3, w.label, colors::black, r.x + r.w);
                break;
            }
            case WidgetKind::text_field: {
                fb.fill_rect(r, colors::white);
                fb.stroke_rect(r, s.focus == i ? kFocusBlue : colors::field_border);
                font::draw_text(fb, r.x + 3, r.y + (r.h - font::kGlyphHeight) / 2, w.content, colors::black,
                                r.x + r.w - 2);
                break;
            }
            case WidgetKind::draggable_box:
            case WidgetKind::colored_square:
                fb.fill_rect(r, w.color);
                break;
            case WidgetKind::drop_target:
                fb.fill_rect(r, w.color);
                fb.stroke_rect(r, kTargetBorder);
                break;
            case WidgetKind::grid_cell:
                fb.stroke_rect(r, colors::black);
                break;
        }
    }
}

void TaskRegistry::add(std::unique_ptr<Task> task) { tasks_.push_back(std::move(task)); }

const Task& TaskRegistry::get(std::string_view id) const {
    for (const auto& t : tasks_) {
        if (t->id() == id) return *t;
    }
    throw UnknownTask("unknown task '" + std::string(id) + "'");
}

bool TaskRegistry::contains(std::string_view id) const {
    return std::any_of(tasks_.begin(), tasks_.end(), [&](const auto& t) { return t->id() == id; });
}

std::vector<std::string> TaskRegistry::ids() const {
    std::vector<std::string> out;
    for (const auto& t : tasks_) out.emplace_back(t->id());
    return out;
}

const TaskRegistry& builtin_tasks() {
    static const TaskRegistry registry = [] {
        TaskRegistry r;
        r.add(std::make_unique<ClickTest>());
        r.add(std::make_unique<ClickTest2>());
        r.add(std::make_unique<ClickButton>());
        r.add(std::make_unique<ClickCheckboxes>());
        r.add(std::make_unique<ClickColor>());
        r.add(std::make_unique<GridCoordinate>());
        r.add(std::make_unique<EnterText>());
        r.add(std::make_unique<DragBox>());
        return r;
    }();
    return registry;
}

bool is_binary_task(std::string_view id) { return id != "enter-text"; }

}  // namespace pixgym
