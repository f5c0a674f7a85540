#pragma once

#include <sss/image.hpp>

#include <array>
#include <optional>
#include <vector>

namespace sss
{
    enum class EditKind
    {
        paint,
        erase,
        keep,
        paste
    };

    using Rgb = std::array<double, 3>;

    struct EditOp
    {
        EditKind             kind = EditKind::keep;
        Region               region;
        std::optional<Rgb>   color; // paint
        std::optional<Image> patch; // paste, sized to region.bounding_box()
    };

    /// Mask weights. Every mask entry is one of these three values.
    inline constexpr double kMaskErased  = 0.0;
    inline constexpr double kMaskDefault = 0.2;
    inline constexpr double kMaskEdited  = 1.0;

    /// Guidance image I* and per-pixel-per-channel mask M.
    struct GuidanceState
    {
        Image               guidance;
        std::vector<double> mask;
    };

    /// Guidance starts as the blended image itself with the default mask everywhere.
    GuidanceState new_guidance(const Image& blended);

    /// Returns a new state with `op` applied; pixels outside `op.region` are untouched and
    /// later edits overwrite earlier ones.
    GuidanceState apply_edit(const GuidanceState& state, const EditOp& op);

    /// sum over pixels and channels of (I* - I)^2 * M
    double content_term(const GuidanceState& state, const Image& image);
} // namespace sss
