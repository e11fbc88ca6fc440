// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>

#include "i2a/perception/pipeline.hpp"

namespace i2a::perception {

inline constexpr std::array<Rgb, 8> kOverlayPalette = {Rgb{230, 25, 75},  Rgb{60, 180, 75},  Rgb{255, 225, 25},
                                                       Rgb{0, 130, 200},  Rgb{245, 130, 48}, Rgb{145, 30, 180},
                                                       Rgb{70, 240, 240}, Rgb{240, 50, 230}};

/// Blends each mask's palette colour over the image at 50%, then outlines mask borders.
inline Image mask_overlay(const Image& img, const MaskSet& ms)
{
    Image out = img;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const Rgb c = kOverlayPalette[i % kOverlayPalette.size()];
        const auto& m = ms.masks[i];
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x) {
                if (!m.at(x, y))
                    continue;
                const bool edge = !m.test(x - 1, y) || !m.test(x + 1, y) || !m.test(x, y - 1) || !m.test(x, y + 1);
                Rgb& p = out.at(x, y);
                p = edge ? c
                         : Rgb{std::uint8_t((p.r + c.r) / 2), std::uint8_t((p.g + c.g) / 2),
                               std::uint8_t((p.b + c.b) / 2)};
            }
    }
    return out;
}

/// Two overlays side by side with a 4 px dark gutter.
inline Image side_by_side(const Image& left, const Image& right)
{
    constexpr int gutter = 4;
    Image out(left.width() + gutter + right.width(), std::max(left.height(), right.height()), Rgb{32, 32, 32});
    for (int y = 0; y < left.height(); ++y)
        for (int x = 0; x < left.width(); ++x)
            out.at(x, y) = left.at(x, y);
    for (int y = 0; y < right.height(); ++y)
        for (int x = 0; x < right.width(); ++x)
            out.at(left.width() + gutter + x, y) = right.at(x, y);
    return out;
}

/// Raw masks on the raw image (left) against processed masks on the processed image (right).
inline Image before_after_panel(const Image& raw, const MaskSet& raw_masks, const Image& processed,
                                const MaskSet& processed_masks)
{
    return side_by_side(mask_overlay(raw, raw_masks), mask_overlay(processed, processed_masks));
}

} // namespace i2a::perception
