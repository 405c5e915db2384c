#include <gtest/gtest.h>

#include <unordered_set>

#include "pixgym/errors.hpp"
#include "pixgym/font.hpp"
#include "pixgym/observation.hpp"
#include "pixgym/png_codec.hpp"
#include "pixgym/rng.hpp"

using namespace pixgym;

namespace {

Framebuffer task_frame() {
    Framebuffer fb(160, 182, colors::white);
    fb.fill_rect({10, 10, 40, 20}, colors::button_gray);
    return fb;
}

Observation compose_default(bool down, const std::vector<std::string>& recent = {}, Point cursor = {80, 105}) {
    return compose(task_frame(), "Click the button.", cursor, down, recent, OverlayConfig{});
}

// Reference FNV-1a 64, written out independently of the library.
std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (auto b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

TEST(Framebuffer, RejectsBadDimensions) {
    EXPECT_THROW(Framebuffer(0, 10), std::exception);
    EXPECT_THROW(Framebuffer(2, 2, std::vector<std::uint8_t>(5)), std::exception);
}

TEST(Framebuffer, FillAndStrokeStayInside) {
    Framebuffer fb(20, 20, colors::white);
    fb.stroke_rect({2, 2, 5, 4}, colors::black);
    EXPECT_EQ(fb.at(2, 2), colors::black);
    EXPECT_EQ(fb.at(6, 5), colors::black);
    EXPECT_EQ(fb.at(3, 3), colors::white);
    EXPECT_EQ(fb.at(7, 2), colors::white);
    fb.fill_rect({15, 15, 10, 10}, colors::black);  // clipped, no throw
    EXPECT_EQ(fb.at(19, 19), colors::black);
}

TEST(Digest, MatchesReferenceFnv) {
    const auto fb = task_frame();
    EXPECT_EQ(digest(fb), fnv1a(fb.bytes()));
}

TEST(Digest, HexRoundTrip) {
    EXPECT_EQ(digest_hex(0x1f), "000000000000001f");
    EXPECT_EQ(parse_digest_hex("00000000deadbeef"), 0xdeadbeefULL);
    EXPECT_THROW(parse_digest_hex("xyz"), Error);
}

TEST(Digest, NoCollisionsOnSinglePixelPerturbations) {
    const auto base = compose_default(false).frame;
    std::unordered_set<Digest> seen{digest(base)};
    SplitMix64 rng(3);
    int made = 0;
    std::unordered_set<std::uint64_t> positions;
    while (made < 1000) {
        const int x = rng.range(0, base.width() - 1);
        const int y = rng.range(0, base.height() - 1);
        if (!positions.insert(static_cast<std::uint64_t>(y) * 1000 + x).second) continue;
        Framebuffer f = base;
        const Rgb old = f.at(x, y);
        f.set(x, y, Rgb{static_cast<std::uint8_t>(old.r ^ 1), old.g, old.b});
        ASSERT_TRUE(seen.insert(digest(f)).second) << "collision at " << x << "," << y;
        ++made;
    }
}

TEST(Compose, DimensionsAndBanner) {
    const auto obs = compose_default(false);
    EXPECT_EQ(obs.frame.width(), 160);
    EXPECT_EQ(obs.frame.height(), 210);
    EXPECT_EQ(obs.frame.at(0, 0), colors::banner_yellow);
    EXPECT_EQ(obs.frame.at(159, 27), colors::banner_yellow);
    EXPECT_EQ(obs.frame.at(0, 28), colors::white);
    EXPECT_EQ(obs.digest, digest(obs.frame));
}

TEST(Compose, IsPure) {
    const auto a = compose_default(true, {"click 1 2"});
    const auto b = compose_default(true, {"click 1 2"});
    EXPECT_EQ(a.frame, b.frame);
    EXPECT_EQ(a.digest, b.digest);
}

TEST(Compose, MouseDownMarkerOnlyWhenDown) {
    const auto up = compose_default(false);
    const auto down = compose_default(true);
    const Rect m = OverlayConfig{}.mousedown_marker;
    for (int y = 0; y < 210; ++y) {
        for (int x = 0; x < 160; ++x) {
            const bool in_marker = m.contains({x, y});
            if (in_marker) {
                EXPECT_EQ(down.frame.at(x, y), colors::marker_red);
                EXPECT_EQ(up.frame.at(x, y), colors::banner_yellow);
            } else {
                ASSERT_EQ(down.frame.at(x, y), up.frame.at(x, y)) << x << "," << y;
            }
        }
    }
}

TEST(Compose, TaskRegionUntouchedOutsideCursor) {
    const Point cursor{100, 150};
    const auto obs = compose_default(false, {}, cursor);
    const auto frame = task_frame();
    const Sprite s = Sprite::crosshair();
    for (int y = 0; y < 182; ++y) {
        for (int x = 0; x < 160; ++x) {
            const int oy = y + 28;
            const bool under_sprite = x >= cursor.x - s.hotspot.x && x < cursor.x - s.hotspot.x + s.width &&
                                      oy >= cursor.y - s.hotspot.y && oy < cursor.y - s.hotspot.y + s.height;
            if (!under_sprite) ASSERT_EQ(obs.frame.at(x, oy), frame.at(x, y)) << x << "," << y;
        }
    }
    EXPECT_EQ(obs.frame.at(cursor.x, cursor.y), colors::black);
}

TEST(Compose, CursorOutsideFrameThrows) {
    EXPECT_THROW(compose_default(false, {}, {160, 5}), RangeError);
}

TEST(Compose, HistoryStripRendersJoinedText) {
    const OverlayConfig cfg;
    const auto with = compose_default(false, {"click 1 2", "key a"});
    EXPECT_EQ(history_text({"click 1 2", "key a"}, cfg), "click 1 2<s>key a");

    // Reference strip: the same text drawn on a bare banner at the history row.
    const auto layout = banner_layout(160, cfg);
    ASSERT_TRUE(layout.history_row.has_value());
    Framebuffer ref(160, cfg.banner_height_px, colors::banner_yellow);
    font::draw_text(ref, layout.text_left, *layout.history_row, "click 1 2<s>key a", colors::black,
                    layout.history_clip_right);
    for (int y = *layout.history_row; y < *layout.history_row + font::kGlyphHeight; ++y) {
        for (int x = 0; x < layout.history_clip_right; ++x) {
            ASSERT_EQ(with.frame.at(x, y), ref.at(x, y)) << x << "," << y;
        }
    }
}

TEST(Compose, HistoryKeepsOnlyLastEntries) {
    OverlayConfig cfg;
    cfg.history_len = 2;
    EXPECT_EQ(history_text({"a", "b", "c"}, cfg), "b<s>c");
    cfg.history_len = 0;
    EXPECT_EQ(history_text({"a"}, cfg), "");
    EXPECT_FALSE(banner_layout(160, cfg).history_row.has_value());
}

TEST(Font, WrapAndClip) {
    EXPECT_EQ(font::wrap("aa bb cc", 5, 2), (std::vector<std::string>{"aa bb", "cc"}));
    EXPECT_EQ(font::wrap("abcdefgh", 3, 2), (std::vector<std::string>{"abc", "def"}));
    Framebuffer fb(30, 10, colors::white);
    EXPECT_EQ(font::draw_text(fb, 0, 0, "abcdefgh", colors::black, 30), 5u);
}

TEST(Png, LosslessRoundTripKeepsDigest) {
    const auto obs = compose_default(true, {"click 3 4"});
    const auto png = encode_png(obs.frame);
    ASSERT_GT(png.size(), 8u);
    const auto back = decode_png(png);
    EXPECT_EQ(back, obs.frame);
    EXPECT_EQ(digest(back), obs.digest);
}

TEST(Png, RejectsGarbage) {
    const std::vector<std::uint8_t> junk = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    EXPECT_THROW(decode_png(junk), std::exception);
}

TEST(Base64, KnownVectors) {
    const std::string s = "foobar";
    const std::vector<std::uint8_t> bytes(s.begin(), s.end());
    EXPECT_EQ(base64_encode(std::span(bytes).first(0)), "");
    EXPECT_EQ(base64_encode(std::span(bytes).first(1)), "Zg==");
    EXPECT_EQ(base64_encode(std::span(bytes).first(2)), "Zm8=");
    EXPECT_EQ(base64_encode(bytes), "Zm9vYmFy");
    EXPECT_EQ(base64_decode("Zm9vYg=="), std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 4));
}

}  // namespace
