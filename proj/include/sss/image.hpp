#pragma once

#include <sss/common.hpp>

#include <cstdint>
#include <vector>

namespace sss
{
    /// RGB image, row-major, channel-interleaved, values in [0, 1].
    struct Image
    {
        int                 width  = 0;
        int                 height = 0;
        std::vector<double> data;

        static constexpr int channels = 3;

        Image() = default;
        Image(int w, int h, double fill = 0.0);

        std::size_t index(int x, int y, int c) const
        {
            return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) *
                       channels +
                   static_cast<std::size_t>(c);
        }
        double  at(int x, int y, int c) const { return data[index(x, y, c)]; }
        double& at(int x, int y, int c) { return data[index(x, y, c)]; }

        double mean() const;
        /// Throws sss::Error if the size or value range is wrong.
        void validate() const;

        bool operator==(const Image&) const = default;
    };

    /// Pixel membership bitmap at image resolution.
    struct Region
    {
        int                       width  = 0;
        int                       height = 0;
        std::vector<std::uint8_t> inside; // one byte per pixel, 0 or 1

        Region() = default;
        Region(int w, int h, bool value = false);

        static Region full(int w, int h) { return Region(w, h, true); }
        static Region rectangle(int w, int h, int x0, int y0, int x1, int y1);

        bool contains(int x, int y) const
        {
            return inside[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] !=
                   0;
        }
        void set(int x, int y, bool v = true)
        {
            inside[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] = v;
        }
        bool empty() const;

        struct Bounds
        {
            int x0, y0, x1, y1; // inclusive-exclusive
        };
        Bounds bounding_box() const;
    };
} // namespace sss
