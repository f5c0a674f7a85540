#include <sss/procedural.hpp>

#include <cmath>
#include <numbers>

namespace sss
{
    namespace
    {
        constexpr int kChunk = 8;

        double squash(double v) { return 1.0 / (1.0 + std::exp(-v)); }

        struct Blob
        {
            double cx, cy, radius, softness, rgb[3], opacity;
        };
    } // namespace

    Image render_procedural(const LatentVector& z, int width, int height)
    {
        if (z.size() < kChunk)
        {
            throw Error("procedural generator needs a latent dimension of at least 8");
        }
        if (width < 8 || height < 8)
        {
            throw Error("procedural generator needs a resolution of at least 8x8");
        }
        if (!z.allFinite())
        {
            throw Error("procedural generator: non-finite latent vector");
        }

        const auto   chunks = static_cast<int>((z.size() + kChunk - 1) / kChunk);
        LatentVector p      = LatentVector::Zero(chunks * kChunk);
        p.head(z.size())    = z;

        double top[3], bottom[3];
        for (int c = 0; c < 3; ++c)
        {
            top[c]    = squash(p(c));
            bottom[c] = squash(p(3 + c));
        }
        const double angle     = std::numbers::pi * std::tanh(p(6));
        const double sharpness = 2.0 + 8.0 * squash(p(7));

        std::vector<Blob> blobs;
        for (int k = 1; k < chunks; ++k)
        {
            const auto q = p.segment(k * kChunk, kChunk);
            blobs.push_back({squash(q(0)), squash(q(1)), 0.05 + 0.35 * squash(q(2)), 0.02 + 0.15 * squash(q(3)),
                             {squash(q(4)), squash(q(5)), squash(q(6))}, squash(q(7))});
        }

        const Eigen::Index n = static_cast<Eigen::Index>(width) * height;
        Eigen::ArrayXd     u(n);
        Eigen::ArrayXd     v(n);
        for (int y = 0; y < height; ++y)
        {
            for (int x = 0; x < width; ++x)
            {
                u(y * width + x) = (x + 0.5) / width;
                v(y * width + x) = (y + 0.5) / height;
            }
        }

        const Eigen::ArrayXd s = (v - 0.5) * std::cos(angle) + (u - 0.5) * std::sin(angle);
        const Eigen::ArrayXd t = 1.0 / (1.0 + (-sharpness * s).exp());
        Eigen::ArrayXd       rgb[3];
        for (int c = 0; c < 3; ++c)
        {
            rgb[c] = top[c] * (1.0 - t) + bottom[c] * t;
        }
        for (const auto& b : blobs)
        {
            const Eigen::ArrayXd dist  = ((u - b.cx).square() + (v - b.cy).square()).sqrt();
            const Eigen::ArrayXd alpha = b.opacity / (1.0 + ((dist - b.radius) / b.softness).exp());
            for (int c = 0; c < 3; ++c)
            {
                rgb[c] = rgb[c] * (1.0 - alpha) + b.rgb[c] * alpha;
            }
        }

        Image img(width, height);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            for (int c = 0; c < 3; ++c)
            {
                img.data[static_cast<std::size_t>(i) * 3 + static_cast<std::size_t>(c)] = rgb[c](i);
            }
        }
        return img;
    }

    ProceduralGenerator::ProceduralGenerator(int dimension, int width, int height)
        : dimension_(dimension), width_(width), height_(height)
    {
        if (dimension < kChunk || width < 8 || height < 8)
        {
            throw Error("procedural generator needs d >= 8 and at least 8x8 pixels");
        }
    }

    Image ProceduralGenerator::render(const LatentVector& z) const
    {
        require_same_dimension(z, LatentVector(dimension_), "ProceduralGenerator::render");
        return render_procedural(z, width_, height_);
    }
} // namespace sss
