#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pixgym/framebuffer.hpp"

namespace pixgym {

/// Lossless RGB8 PNG encoding (libpng).
std::vector<std::uint8_t> encode_png(const Framebuffer& frame);
Framebuffer decode_png(std::span<const std::uint8_t> png);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace pixgym
