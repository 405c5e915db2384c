#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pixgym {

/// Discretisation of the observation into coordinate bins.
///
/// Defaults mirror the MiniWob-style setting: 32x32 bins over a 160x210
/// screenshot, vertical scroll amounts in [-3, 3].
struct BinConfig {
    int x_bins = 32;
    int y_bins = 32;
    int scroll_bin_max = 3;
    int width_px = 160;
    int height_px = 210;

    /// Throws RangeError when the bin grid is degenerate for the frame.
    void validate() const;

    friend bool operator==(const BinConfig&, const BinConfig&) = default;
};

enum class Modifier { shift, ctrl, alt };

struct Click {
    int x_bin = 0;
    int y_bin = 0;
    friend auto operator<=>(const Click&, const Click&) = default;
};

struct BeginDrag {
    int x_bin = 0;
    int y_bin = 0;
    friend auto operator<=>(const BeginDrag&, const BeginDrag&) = default;
};

struct EndDrag {
    int x_bin = 0;
    int y_bin = 0;
    friend auto operator<=>(const EndDrag&, const EndDrag&) = default;
};

struct Key {
    std::optional<Modifier> modifier;
    std::vector<std::string> keys;
    friend auto operator<=>(const Key&, const Key&) = default;
};

struct Scroll {
    int z_bin = 0;
    friend auto operator<=>(const Scroll&, const Scroll&) = default;
};

using Action = std::variant<Click, BeginDrag, EndDrag, Key, Scroll>;

/// Parses one action from its whitespace-separated token form, e.g.
/// "click 23 12", "key shift a", "scroll -2".
Action parse_action(std::string_view text, const BinConfig& cfg);

/// Canonical single-line text of an action. Inverse of parse_action.
std::string serialize_action(const Action& action);

/// Throws GrammarError / RangeError if the action breaks an invariant.
void validate_action(const Action& action, const BinConfig& cfg);

/// Pixel -> bin index along one axis (floor, clamped).
int px_to_bin(int px, int axis_len_px, int n_bins);

/// Bin index -> pixel at the bin centre.
int bin_to_px(int bin, int axis_len_px, int n_bins);

/// Named (multi-character) key tokens. Single printable characters other
/// than space name themselves.
bool is_named_key(std::string_view token);
bool is_valid_key_token(std::string_view token);

std::string_view modifier_name(Modifier m);
std::optional<Modifier> parse_modifier(std::string_view token);

/// Point-addressed variants carry a bin pair; Key/Scroll return nullopt.
std::optional<std::pair<int, int>> action_bins(const Action& action);

/// Convenience: a click on the bin containing pixel (px, py).
Click click_at_px(int px, int py, const BinConfig& cfg);

}  // namespace pixgym
