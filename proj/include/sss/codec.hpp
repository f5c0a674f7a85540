#pragma once

#include <sss/image.hpp>

#include <string>
#include <string_view>

namespace sss
{
    /// 8-bit RGB PNG. Values are quantized with round(v * 255).
    std::string encode_png(const Image& image);
    /// Accepts any PNG libpng can read; converts to RGB.
    Image decode_png(std::string_view bytes);

    std::string base64_encode(std::string_view bytes);
    /// Throws sss::Error on malformed input.
    std::string base64_decode(std::string_view text);

    /// Region bitmaps on the wire: 1 bit per pixel, row-major, most significant bit first,
    /// the whole bit stream zero-padded to a byte boundary.
    std::string encode_region_bitmap(const Region& region);
    Region      decode_region_bitmap(std::string_view bytes, int width, int height);
} // namespace sss
