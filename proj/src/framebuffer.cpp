#include "pixgym/framebuffer.hpp"

#include <algorithm>

#include "pixgym/errors.hpp"

namespace pixgym {

Framebuffer::Framebuffer(int width, int height, Rgb fill) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw RangeError("framebuffer dimensions must be positive");
    bytes_.resize(static_cast<std::size_t>(width) * height * 3);
    for (std::size_t i = 0; i < bytes_.size(); i += 3) {
        bytes_[i] = fill.r;
        bytes_[i + 1] = fill.g;
        bytes_[i + 2] = fill.b;
    }
}

Framebuffer::Framebuffer(int width, int height, std::vector<std::uint8_t> bytes)
    : width_(width), height_(height), bytes_(std::move(bytes)) {
    if (width <= 0 || height <= 0) throw RangeError("framebuffer dimensions must be positive");
    if (bytes_.size() != static_cast<std::size_t>(width) * height * 3) {
        throw RangeError("framebuffer byte length does not match dimensions");
    }
}

Rgb Framebuffer::at(int x, int y) const {
    const auto i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    return {bytes_[i], bytes_[i + 1], bytes_[i + 2]};
}

void Framebuffer::set(int x, int y, Rgb c) {
    const auto i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    bytes_[i] = c.r;
    bytes_[i + 1] = c.g;
    bytes_[i + 2] = c.b;
}

void Framebuffer::fill_rect(const Rect& r, Rgb c) {
    const int x0 = std::max(r.x, 0);
    const int y0 = std::max(r.y, 0);
    const int x1 = std::min(r.x + r.w, width_);
    const int y1 = std::min(r.y + r.h, height_);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) set(x, y, c);
    }
}

void Framebuffer::stroke_rect(const Rect& r, Rgb c) {
    for (int x = r.x; x < r.x + r.w; ++x) {
        put(x, r.y, c);
        put(x, r.y + r.h - 1, c);
    }
    for (int y = r.y; y < r.y + r.h; ++y) {
        put(r.x, y, c);
        put(r.x + r.w - 1, y, c);
    }
}

void Framebuffer::blit(const Framebuffer& src, int x, int y) {
    for (int sy = 0; sy < src.height(); ++sy) {
        const int dy = y + sy;
        if (dy < 0 || dy >= height_) continue;
        for (int sx = 0; sx < src.width(); ++sx) put(x + sx, dy, src.at(sx, sy));
    }
}

}  // namespace pixgym
