#include <sss/codec.hpp>

#include <openssl/evp.h>
#include <png.h>

#include <cmath>
#include <cstring>
#include <vector>

namespace sss
{
    std::string encode_png(const Image& image)
    {
        image.validate();
        std::vector<png_byte> pixels(image.data.size());
        for (std::size_t i = 0; i < pixels.size(); ++i)
        {
            pixels[i] = static_cast<png_byte>(std::lround(image.data[i] * 255.0));
        }

        png_image png{};
        png.version = PNG_IMAGE_VERSION;
        png.width   = static_cast<png_uint_32>(image.width);
        png.height  = static_cast<png_uint_32>(image.height);
        png.format  = PNG_FORMAT_RGB;

        png_alloc_size_t size = 0;
        if (!png_image_write_to_memory(&png, nullptr, &size, 0, pixels.data(), 0, nullptr))
        {
            throw Error(std::string("png encode failed: ") + png.message);
        }
        std::string out(size, '\0');
        if (!png_image_write_to_memory(&png, out.data(), &size, 0, pixels.data(), 0, nullptr))
        {
            throw Error(std::string("png encode failed: ") + png.message);
        }
        out.resize(size);
        return out;
    }

    Image decode_png(std::string_view bytes)
    {
        png_image png{};
        png.version = PNG_IMAGE_VERSION;
        if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size()))
        {
            throw Error(std::string("png decode failed: ") + png.message);
        }
        png.format = PNG_FORMAT_RGB;
        std::vector<png_byte> pixels(PNG_IMAGE_SIZE(png));
        if (!png_image_finish_read(&png, nullptr, pixels.data(), 0, nullptr))
        {
            png_image_free(&png);
            throw Error(std::string("png decode failed: ") + png.message);
        }
        Image img(static_cast<int>(png.width), static_cast<int>(png.height));
        for (std::size_t i = 0; i < img.data.size(); ++i)
        {
            img.data[i] = pixels[i] / 255.0;
        }
        return img;
    }

    std::string base64_encode(std::string_view bytes)
    {
        std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
        const int   n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                        reinterpret_cast<const unsigned char*>(bytes.data()), static_cast<int>(bytes.size()));
        out.resize(static_cast<std::size_t>(n));
        return out;
    }

    std::string base64_decode(std::string_view text)
    {
        if (text.size() % 4 != 0)
        {
            throw Error("base64: length is not a multiple of 4");
        }
        std::string out(3 * (text.size() / 4), '\0');
        const int   n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                        reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
        if (n < 0)
        {
            throw Error("base64: malformed input");
        }
        // EVP_DecodeBlock keeps the bytes that stand for '=' padding.
        std::size_t padding = 0;
        for (auto it = text.rbegin(); it != text.rend() && *it == '=' && padding < 2; ++it)
        {
            ++padding;
        }
        out.resize(static_cast<std::size_t>(n) - padding);
        return out;
    }

    std::string encode_region_bitmap(const Region& region)
    {
        const std::size_t pixels = region.inside.size();
        std::string       out((pixels + 7) / 8, '\0');
        for (std::size_t i = 0; i < pixels; ++i)
        {
            if (region.inside[i] != 0)
            {
                out[i / 8] = static_cast<char>(static_cast<unsigned char>(out[i / 8]) | (0x80u >> (i % 8)));
            }
        }
        return out;
    }

    Region decode_region_bitmap(std::string_view bytes, int width, int height)
    {
        Region            region(width, height);
        const std::size_t pixels = region.inside.size();
        if (bytes.size() != (pixels + 7) / 8)
        {
            throw DimensionError("region bitmap size does not match the image resolution");
        }
        for (std::size_t i = 0; i < pixels; ++i)
        {
            region.inside[i] = (static_cast<unsigned char>(bytes[i / 8]) >> (7 - i % 8)) & 1u;
        }
        return region;
    }
} // namespace sss
