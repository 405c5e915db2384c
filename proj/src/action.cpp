#include "pixgym/action.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <sstream>

#include "pixgym/errors.hpp"

namespace pixgym {

namespace {

constexpr std::array<std::string_view, 4> kNamedKeys = {"enter", "tab", "backspace", "space"};

std::vector<std::string_view> tokenize(std::string_view text) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        const std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) tokens.push_back(text.substr(start, i - start));
    }
    return tokens;
}

int parse_int(std::string_view token) {
    int value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    // from_chars rejects a leading '+', which keeps the encoding canonical.
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw GrammarError("expected integer, got '" + std::string(token) + "'");
    }
    return value;
}

void check_bins(int x, int y, const BinConfig& cfg) {
    if (x < 0 || x >= cfg.x_bins || y < 0 || y >= cfg.y_bins) {
        throw RangeError("bin (" + std::to_string(x) + ", " + std::to_string(y) +
                         ") outside " + std::to_string(cfg.x_bins) + "x" +
                         std::to_string(cfg.y_bins) + " grid");
    }
}

template <class Point>
Point parse_point(const std::vector<std::string_view>& tokens, const BinConfig& cfg) {
    if (tokens.size() != 3) {
        throw GrammarError("'" + std::string(tokens[0]) + "' takes exactly two coordinates");
    }
    Point p{parse_int(tokens[1]), parse_int(tokens[2])};
    check_bins(p.x_bin, p.y_bin, cfg);
    return p;
}

}  // namespace

void BinConfig::validate() const {
    if (x_bins < 1 || y_bins < 1) throw RangeError("bin counts must be >= 1");
    if (width_px < x_bins || height_px < y_bins) {
        throw RangeError("frame must have at least one pixel per bin");
    }
    if (scroll_bin_max < 0) throw RangeError("scroll_bin_max must be >= 0");
}

bool is_named_key(std::string_view token) {
    for (auto name : kNamedKeys) {
        if (name == token) return true;
    }
    return false;
}

bool is_valid_key_token(std::string_view token) {
    if (token.size() == 1) {
        const char c = token[0];
        return c > ' ' && c <= '~';
    }
    return is_named_key(token);
}

std::string_view modifier_name(Modifier m) {
    switch (m) {
        case Modifier::shift: return "shift";
        case Modifier::ctrl: return "ctrl";
        case Modifier::alt: return "alt";
    }
    return "";
}

std::optional<Modifier> parse_modifier(std::string_view token) {
    if (token == "shift") return Modifier::shift;
    if (token == "ctrl") return Modifier::ctrl;
    if (token == "alt") return Modifier::alt;
    return std::nullopt;
}

Action parse_action(std::string_view text, const BinConfig& cfg) {
    const auto tokens = tokenize(text);
    if (tokens.empty()) throw GrammarError("empty action");
    const std::string_view verb = tokens[0];

    if (verb == "click") return parse_point<Click>(tokens, cfg);
    if (verb == "begin_drag") return parse_point<BeginDrag>(tokens, cfg);
    if (verb == "end_drag") return parse_point<EndDrag>(tokens, cfg);

    if (verb == "scroll") {
        if (tokens.size() != 2) throw GrammarError("'scroll' takes exactly one amount");
        Scroll s{parse_int(tokens[1])};
        if (s.z_bin < -cfg.scroll_bin_max || s.z_bin > cfg.scroll_bin_max) {
            throw RangeError("scroll amount " + std::to_string(s.z_bin) + " exceeds +/-" +
                             std::to_string(cfg.scroll_bin_max));
        }
        return s;
    }

    if (verb == "key") {
        Key key;
        std::size_t i = 1;
        if (tokens.size() > 2) {
            if (auto m = parse_modifier(tokens[1])) {
                key.modifier = m;
                i = 2;
            }
        }
        for (; i < tokens.size(); ++i) {
            if (!is_valid_key_token(tokens[i])) {
                throw GrammarError("unknown key '" + std::string(tokens[i]) + "'");
            }
            key.keys.emplace_back(tokens[i]);
        }
        if (key.keys.empty()) throw GrammarError("'key' needs at least one key name");
        return key;
    }

    throw GrammarError("unknown verb '" + std::string(verb) + "'");
}

std::string serialize_action(const Action& action) {
    std::ostringstream out;
    std::visit(
        [&out](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, Click>) {
                out << "click " << a.x_bin << ' ' << a.y_bin;
            } else if constexpr (std::is_same_v<T, BeginDrag>) {
                out << "begin_drag " << a.x_bin << ' ' << a.y_bin;
            } else if constexpr (std::is_same_v<T, EndDrag>) {
                out << "end_drag " << a.x_bin << ' ' << a.y_bin;
            } else if constexpr (std::is_same_v<T, Scroll>) {
                out << "scroll " << a.z_bin;
            } else {
                out << "key";
                if (a.modifier) out << ' ' << modifier_name(*a.modifier);
                for (const auto& k : a.keys) out << ' ' << k;
            }
        },
        action);
    return out.str();
}

void validate_action(const Action& action, const BinConfig& cfg) {
    if (auto bins = action_bins(action)) {
        check_bins(bins->first, bins->second, cfg);
        return;
    }
    if (const auto* s = std::get_if<Scroll>(&action)) {
        if (s->z_bin < -cfg.scroll_bin_max || s->z_bin > cfg.scroll_bin_max) {
            throw RangeError("scroll amount out of range");
        }
        return;
    }
    const auto& key = std::get<Key>(action);
    if (key.keys.empty()) throw GrammarError("'key' needs at least one key name");
    for (const auto& k : key.keys) {
        if (!is_valid_key_token(k)) throw GrammarError("unknown key '" + k + "'");
    }
}

int px_to_bin(int px, int axis_len_px, int n_bins) {
    if (px < 0 || px >= axis_len_px) {
        throw RangeError("pixel " + std::to_string(px) + " outside axis of length " +
                         std::to_string(axis_len_px));
    }
    const long long bin = static_cast<long long>(px) * n_bins / axis_len_px;
    return static_cast<int>(std::clamp<long long>(bin, 0, n_bins - 1));
}

int bin_to_px(int bin, int axis_len_px, int n_bins) {
    if (bin < 0 || bin >= n_bins) {
        throw RangeError("bin " + std::to_string(bin) + " outside [0, " + std::to_string(n_bins) +
                         ")");
    }
    // floor((bin + 0.5) * len / n), raised to the bin's first pixel when bins
    // are narrower than two pixels so the centre always maps back to `bin`.
    const long long len = axis_len_px;
    const long long centre = (static_cast<long long>(2 * bin + 1) * len) / (2LL * n_bins);
    const long long first = (static_cast<long long>(bin) * len + n_bins - 1) / n_bins;
    return static_cast<int>(std::max(centre, first));
}

std::optional<std::pair<int, int>> action_bins(const Action& action) {
    if (const auto* c = std::get_if<Click>(&action)) return std::pair{c->x_bin, c->y_bin};
    if (const auto* b = std::get_if<BeginDrag>(&action)) return std::pair{b->x_bin, b->y_bin};
    if (const auto* e = std::get_if<EndDrag>(&action)) return std::pair{e->x_bin, e->y_bin};
    return std::nullopt;
}

Click click_at_px(int px, int py, const BinConfig& cfg) {
    return Click{px_to_bin(px, cfg.width_px, cfg.x_bins), px_to_bin(py, cfg.height_px, cfg.y_bins)};
}

}  // namespace pixgym
