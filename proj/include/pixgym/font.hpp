#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pixgym/framebuffer.hpp"

namespace pixgym::font {

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
inline constexpr int kAdvance = kGlyphWidth + 1;
inline constexpr int kLineHeight = kGlyphHeight + 2;

/// Column-major 5x7 glyph (bit 0 of each column is the top row).
/// Characters outside printable ASCII render as '?'.
std::array<std::uint8_t, kGlyphWidth> glyph(char c);

/// Pixel width of `text` at one advance per character.
inline int text_width(std::string_view text) { return static_cast<int>(text.size()) * kAdvance; }

/// Draws `text` with its top-left at (x, y). Characters that would cross
/// `clip_right` (exclusive) are dropped. Returns the number drawn.
std::size_t draw_text(Framebuffer& fb, int x, int y, std::string_view text, Rgb color,
                      int clip_right);

/// Greedy word wrap into at most `max_lines` lines of `max_chars` characters.
/// Overlong words are hard-split; overflow beyond the last line is clipped.
std::vector<std::string> wrap(std::string_view text, std::size_t max_chars, std::size_t max_lines);

}  // namespace pixgym::font
