#pragma once

// Hand-rolled generators for property tests, driven by the library PRNG so
// failures reproduce from the printed seed.

#include <string>

#include "pixgym/action.hpp"
#include "pixgym/rng.hpp"

namespace pixgym::test_support {

inline std::string random_key_token(SplitMix64& rng) {
    static const char* const kNamed[] = {"enter", "tab", "backspace", "space"};
    if (rng.below(4) == 0) return kNamed[rng.below(4)];
    return std::string(1, static_cast<char>(rng.range(0x21, 0x7E)));
}

inline Action random_action(SplitMix64& rng, const BinConfig& cfg) {
    const int x = rng.range(0, cfg.x_bins - 1);
    const int y = rng.range(0, cfg.y_bins - 1);
    switch (rng.below(5)) {
        case 0: return Click{x, y};
        case 1: return BeginDrag{x, y};
        case 2: return EndDrag{x, y};
        case 3: return Scroll{rng.range(-cfg.scroll_bin_max, cfg.scroll_bin_max)};
        default: {
            Key k;
            if (rng.below(3) == 0) k.modifier = static_cast<Modifier>(rng.below(3));
            const auto n = 1 + rng.below(3);
            for (std::uint64_t i = 0; i < n; ++i) k.keys.push_back(random_key_token(rng));
            return k;
        }
    }
}

}  // namespace pixgym::test_support
