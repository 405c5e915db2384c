#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pixgym {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

namespace colors {
inline constexpr Rgb black{0, 0, 0};
inline constexpr Rgb white{255, 255, 255};
inline constexpr Rgb banner_yellow{255, 221, 0};
inline constexpr Rgb marker_red{220, 0, 0};
inline constexpr Rgb button_gray{221, 221, 221};
inline constexpr Rgb field_border{120, 120, 120};
}  // namespace colors

struct Point {
    int x = 0;
    int y = 0;
    friend bool operator==(const Point&, const Point&) = default;
};

// Half-open pixel rectangle [x, x+w) x [y, y+h).
struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool contains(Point p) const { return p.x >= x && p.x < x + w && p.y >= y && p.y < y + h; }
    bool intersects(const Rect& o) const {
        return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
    }
    Point center() const { return {x + w / 2, y + h / 2}; }
    Rect translated(int dx, int dy) const { return {x + dx, y + dy, w, h}; }
    friend bool operator==(const Rect&, const Rect&) = default;
};

/// Row-major RGB8 image.
class Framebuffer {
public:
    Framebuffer() = default;
    Framebuffer(int width, int height, Rgb fill = colors::white);
    Framebuffer(int width, int height, std::vector<std::uint8_t> bytes);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return bytes_.empty(); }

    std::span<const std::uint8_t> bytes() const { return bytes_; }
    std::span<std::uint8_t> bytes() { return bytes_; }

    Rgb at(int x, int y) const;
    void set(int x, int y, Rgb c);
    // Writes are clipped to the frame.
    void put(int x, int y, Rgb c) {
        if (x >= 0 && y >= 0 && x < width_ && y < height_) set(x, y, c);
    }

    void fill_rect(const Rect& r, Rgb c);
    void stroke_rect(const Rect& r, Rgb c);

    /// Copies `src` with its top-left corner at (x, y), clipped.
    void blit(const Framebuffer& src, int x, int y);

    friend bool operator==(const Framebuffer&, const Framebuffer&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bytes_;
};

}  // namespace pixgym
