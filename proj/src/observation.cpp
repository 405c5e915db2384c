#include "pixgym/observation.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "pixgym/errors.hpp"
#include "pixgym/font.hpp"

namespace pixgym {

Digest digest(const Framebuffer& frame) {
    constexpr std::uint64_t kOffset = 0xCBF29CE484222325ULL;
    constexpr std::uint64_t kPrime = 0x100000001B3ULL;
    std::uint64_t h = kOffset;
    for (std::uint8_t b : frame.bytes()) {
        h ^= b;
        h *= kPrime;
    }
    return h;
}

std::string digest_hex(Digest d) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d));
    return buf;
}

Digest parse_digest_hex(std::string_view hex) {
    if (hex.size() != 16) throw FormatError("digest must be 16 hex digits: '" + std::string(hex) + "'");
    Digest d = 0;
    const auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), d, 16);
    if (ec != std::errc{} || ptr != hex.data() + hex.size()) {
        throw FormatError("bad digest '" + std::string(hex) + "'");
    }
    return d;
}

Sprite Sprite::crosshair() {
    Sprite s;
    s.width = 7;
    s.height = 7;
    s.hotspot = {3, 3};
    s.pixels.assign(49, std::nullopt);
    auto at = [&s](int x, int y) -> std::optional<Rgb>& { return s.pixels[y * 7 + x]; };
    // Black plus with arms of length 2, outlined in white.
    for (int i = 1; i <= 5; ++i) {
        at(3, i) = colors::black;
        at(i, 3) = colors::black;
    }
    for (int i = 1; i <= 5; ++i) {
        for (int d : {-1, 1}) {
            if (!at(3 + d, i)) at(3 + d, i) = colors::white;
            if (!at(i, 3 + d)) at(i, 3 + d) = colors::white;
        }
    }
    at(3, 0) = colors::white;
    at(3, 6) = colors::white;
    at(0, 3) = colors::white;
    at(6, 3) = colors::white;
    return s;
}

BannerLayout banner_layout(int frame_width, const OverlayConfig& cfg) {
    BannerLayout layout;
    const int available = std::max(0, (cfg.banner_height_px - 1) / font::kLineHeight);
    int instruction_lines = std::min(2, available);
    if (cfg.history_len > 0 && available >= 1) {
        instruction_lines = std::min(instruction_lines, available - 1);
        layout.history_row = 2 + instruction_lines * font::kLineHeight;
    }
    for (int i = 0; i < instruction_lines; ++i) layout.instruction_rows.push_back(2 + i * font::kLineHeight);

    // Instruction text stops short of the mouse-down marker; history runs to the edge.
    layout.instruction_clip_right = std::min(frame_width - 1, cfg.mousedown_marker.x - 1);
    layout.history_clip_right = frame_width - 1;
    const int usable = layout.instruction_clip_right - layout.text_left + 1;
    layout.instruction_chars_per_line = usable > 0 ? static_cast<std::size_t>(usable / font::kAdvance) : 0;
    return layout;
}

std::string history_text(const std::vector<std::string>& recent_actions, const OverlayConfig& cfg) {
    std::string out;
    const std::size_t n = std::min(cfg.history_len, recent_actions.size());
    for (std::size_t i = recent_actions.size() - n; i < recent_actions.size(); ++i) {
        if (!out.empty()) out += cfg.history_separator;
        out += recent_actions[i];
    }
    return out;
}

Observation compose(const Framebuffer& task_frame, std::string_view instruction, Point cursor_px,
                    bool mouse_down, const std::vector<std::string>& recent_actions,
                    const OverlayConfig& cfg, std::size_t step_index) {
    if (task_frame.empty()) throw RangeError("task frame is empty");
    if (cfg.banner_height_px < 0) throw RangeError("negative banner height");
    const int width = task_frame.width();
    const int height = task_frame.height() + cfg.banner_height_px;
    if (cursor_px.x < 0 || cursor_px.y < 0 || cursor_px.x >= width || cursor_px.y >= height) {
        throw RangeError("cursor outside frame");
    }

    Framebuffer out(width, height, colors::banner_yellow);
    out.blit(task_frame, 0, cfg.banner_height_px);

    const auto layout = banner_layout(width, cfg);
    const auto lines = font::wrap(instruction, layout.instruction_chars_per_line, layout.instruction_rows.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        font::draw_text(out, layout.text_left, layout.instruction_rows[i], lines[i], colors::black,
                        layout.instruction_clip_right + 1);
    }
    if (layout.history_row) {
        font::draw_text(out, layout.text_left, *layout.history_row, history_text(recent_actions, cfg),
                        colors::black, layout.history_clip_right + 1);
    }

    if (mouse_down) out.fill_rect(cfg.mousedown_marker, colors::marker_red);

    const Sprite& s = cfg.cursor;
    for (int y = 0; y < s.height; ++y) {
        for (int x = 0; x < s.width; ++x) {
            if (const auto& px = s.pixels[static_cast<std::size_t>(y) * s.width + x]) {
                out.put(cursor_px.x - s.hotspot.x + x, cursor_px.y - s.hotspot.y + y, *px);
            }
        }
    }

    Observation obs;
    obs.digest = digest(out);
    obs.frame = std::move(out);
    obs.step_index = step_index;
    return obs;
}

}  // namespace pixgym
