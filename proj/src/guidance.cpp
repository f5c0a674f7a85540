#include <sss/guidance.hpp>

#include <algorithm>
#include <cmath>

namespace sss
{
    Image::Image(int w, int h, double fill)
        : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * channels, fill)
    {
        if (w <= 0 || h <= 0)
        {
            throw Error("image dimensions must be positive");
        }
    }

    double Image::mean() const
    {
        double sum = 0.0;
        for (double v : data)
        {
            sum += v;
        }
        return data.empty() ? 0.0 : sum / static_cast<double>(data.size());
    }

    void Image::validate() const
    {
        if (width <= 0 || height <= 0 ||
            data.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels)
        {
            throw DimensionError("image data does not match its dimensions");
        }
        for (double v : data)
        {
            if (!(v >= 0.0 && v <= 1.0))
            {
                throw Error("image values must lie in [0, 1]");
            }
        }
    }

    Region::Region(int w, int h, bool value)
        : width(w), height(h), inside(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), value ? 1 : 0)
    {
        if (w <= 0 || h <= 0)
        {
            throw Error("region dimensions must be positive");
        }
    }

    Region Region::rectangle(int w, int h, int x0, int y0, int x1, int y1)
    {
        Region r(w, h);
        for (int y = std::max(0, y0); y < std::min(h, y1); ++y)
        {
            for (int x = std::max(0, x0); x < std::min(w, x1); ++x)
            {
                r.set(x, y);
            }
        }
        return r;
    }

    bool Region::empty() const
    {
        return std::none_of(inside.begin(), inside.end(), [](std::uint8_t v) { return v != 0; });
    }

    Region::Bounds Region::bounding_box() const
    {
        Bounds b{width, height, 0, 0};
        for (int y = 0; y < height; ++y)
        {
            for (int x = 0; x < width; ++x)
            {
                if (contains(x, y))
                {
                    b.x0 = std::min(b.x0, x);
                    b.y0 = std::min(b.y0, y);
                    b.x1 = std::max(b.x1, x + 1);
                    b.y1 = std::max(b.y1, y + 1);
                }
            }
        }
        if (b.x1 <= b.x0)
        {
            return {0, 0, 0, 0};
        }
        return b;
    }

    GuidanceState new_guidance(const Image& blended)
    {
        blended.validate();
        return GuidanceState{blended, std::vector<double>(blended.data.size(), kMaskDefault)};
    }

    GuidanceState apply_edit(const GuidanceState& state, const EditOp& op)
    {
        const Image& g = state.guidance;
        if (op.region.width != g.width || op.region.height != g.height ||
            op.region.inside.size() != static_cast<std::size_t>(g.width) * static_cast<std::size_t>(g.height))
        {
            throw DimensionError("edit region does not match the guidance resolution");
        }

        Region::Bounds box{};
        switch (op.kind)
        {
        case EditKind::paint:
            if (!op.color || std::any_of(op.color->begin(), op.color->end(), [](double v) { return !(v >= 0 && v <= 1); }))
            {
                throw Error("paint edit needs a color in [0, 1]^3");
            }
            break;
        case EditKind::paste:
            if (!op.patch)
            {
                throw Error("paste edit needs a patch");
            }
            op.patch->validate();
            box = op.region.bounding_box();
            if (op.patch->width != box.x1 - box.x0 || op.patch->height != box.y1 - box.y0)
            {
                throw DimensionError("paste patch does not match the region bounding box");
            }
            break;
        case EditKind::erase:
        case EditKind::keep:
            break;
        }

        GuidanceState next = state;
        for (int y = 0; y < g.height; ++y)
        {
            for (int x = 0; x < g.width; ++x)
            {
                if (!op.region.contains(x, y))
                {
                    continue;
                }
                for (int c = 0; c < Image::channels; ++c)
                {
                    const std::size_t i = g.index(x, y, c);
                    switch (op.kind)
                    {
                    case EditKind::paint:
                        next.guidance.data[i] = (*op.color)[static_cast<std::size_t>(c)];
                        next.mask[i]          = kMaskEdited;
                        break;
                    case EditKind::paste:
                        next.guidance.data[i] = op.patch->at(x - box.x0, y - box.y0, c);
                        next.mask[i]          = kMaskEdited;
                        break;
                    case EditKind::keep:
                        next.mask[i] = kMaskEdited;
                        break;
                    case EditKind::erase:
                        next.mask[i] = kMaskErased;
                        break;
                    }
                }
            }
        }
        return next;
    }

    double content_term(const GuidanceState& state, const Image& image)
    {
        if (image.width != state.guidance.width || image.height != state.guidance.height ||
            image.data.size() != state.guidance.data.size() || state.mask.size() != image.data.size())
        {
            throw DimensionError("content_term: image shape differs from guidance");
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < image.data.size(); ++i)
        {
            const double diff = state.guidance.data[i] - image.data[i];
            sum += diff * diff * state.mask[i];
        }
        return sum;
    }
} // namespace sss
