#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pixgym/framebuffer.hpp"

namespace pixgym {

using Digest = std::uint64_t;

/// 64-bit FNV-1a over the frame bytes.
Digest digest(const Framebuffer& frame);

/// Zero-padded 16-hex-digit form used in demo files and tables.
std::string digest_hex(Digest d);
Digest parse_digest_hex(std::string_view hex);

/// Small RGB glyph with transparent pixels and a hotspot.
struct Sprite {
    int width = 0;
    int height = 0;
    Point hotspot;
    std::vector<std::optional<Rgb>> pixels;  // row-major, nullopt = transparent

    /// 5x5 black crosshair with a 1-px white outline (7x7 overall), hotspot at the centre.
    static Sprite crosshair();
};

struct OverlayConfig {
    int banner_height_px = 28;
    Sprite cursor = Sprite::crosshair();
    Rect mousedown_marker{153, 1, 6, 6};
    std::size_t history_len = 5;
    std::string history_separator = "<s>";
};

struct Observation {
    Framebuffer frame;
    std::size_t step_index = 0;
    Digest digest = 0;
};

/// Where the text lines sit inside the banner for a given config.
struct BannerLayout {
    std::vector<int> instruction_rows;  // top y of each instruction line
    std::optional<int> history_row;
    int text_left = 2;
    int instruction_clip_right = 0;
    int history_clip_right = 0;
    std::size_t instruction_chars_per_line = 0;
};

BannerLayout banner_layout(int frame_width, const OverlayConfig& cfg);

/// Joined history text exactly as rendered ("a<s>b"), last `history_len` entries.
std::string history_text(const std::vector<std::string>& recent_actions, const OverlayConfig& cfg);

/// Builds the agent-facing screenshot: instruction banner stacked above the
/// task frame, then the cursor sprite, the mouse-down marker, and the
/// action-history line.
Observation compose(const Framebuffer& task_frame, std::string_view instruction, Point cursor_px,
                    bool mouse_down, const std::vector<std::string>& recent_actions,
                    const OverlayConfig& cfg, std::size_t step_index = 0);

}  // namespace pixgym
