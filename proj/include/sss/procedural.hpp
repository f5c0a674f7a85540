#pragma once

#include <sss/image.hpp>

namespace sss
{
    /// Black-box image generator G(z). Rendering must be deterministic.
    class Generator
    {
    public:
        virtual ~Generator() = default;

        virtual int   dimension() const = 0;
        virtual int   width() const     = 0;
        virtual int   height() const    = 0;
        virtual Image render(const LatentVector& z) const = 0;
    };

    /// Layered soft radial blobs over a two-color gradient background. The latent vector is read
    /// in chunks of 8; the first chunk sets the background, each further chunk one blob (center
    /// x, center y, radius, softness, R, G, B, opacity). A trailing partial chunk is zero-padded.
    /// Every parameter passes through a logistic squash, so the image is smooth in z.
    Image render_procedural(const LatentVector& z, int width, int height);

    class ProceduralGenerator final : public Generator
    {
    public:
        ProceduralGenerator(int dimension, int width, int height);

        int   dimension() const override { return dimension_; }
        int   width() const override { return width_; }
        int   height() const override { return height_; }
        Image render(const LatentVector& z) const override;

    private:
        int dimension_;
        int width_;
        int height_;
    };
} // namespace sss
