// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <vector>

#include "i2a/core/error.hpp"
#include "i2a/core/image.hpp"

namespace i2a::perception {

namespace detail {

inline void check_kernel(int k)
{
    if (k < 1 || k % 2 == 0)
        throw Error("structuring element size must be odd and >= 1");
}

/// One separable pass of a square min/max filter over `win`; pixels outside
/// the window are left unset. `outside` is the value assumed beyond the image border.
inline BinaryMask line_filter(const BinaryMask& in, const BoundingBox& win, int radius, bool horizontal, bool is_max,
                              bool outside)
{
    BinaryMask out(in.width(), in.height());
    for (int y = win.y0; y <= win.y1; ++y)
        for (int x = win.x0; x <= win.x1; ++x) {
            bool acc = !is_max;
            for (int d = -radius; d <= radius; ++d) {
                const int xx = horizontal ? x + d : x;
                const int yy = horizontal ? y : y + d;
                const bool v = in.contains(xx, yy) ? in.at(xx, yy) : outside;
                if (is_max ? v : !v) {
                    acc = is_max;
                    break;
                }
            }
            out.set(x, y, acc);
        }
    return out;
}

inline BoundingBox grow(const BoundingBox& b, int r, int w, int h)
{
    return {std::max(0, b.x0 - r), std::max(0, b.y0 - r), std::min(w - 1, b.x1 + r), std::min(h - 1, b.y1 + r)};
}

} // namespace detail

/// Square-kernel dilation; pixels beyond the border count as unset.
inline BinaryMask dilate(const BinaryMask& m, int kernel)
{
    detail::check_kernel(kernel);
    const int r = kernel / 2;
    const BoundingBox box = m.bbox();
    if (r == 0 || box.empty())
        return m;
    const BoundingBox win = detail::grow(box, r, m.width(), m.height());
    return detail::line_filter(detail::line_filter(m, win, r, true, true, false), win, r, false, true, false);
}

/// Square-kernel erosion; pixels beyond the border count as set.
inline BinaryMask erode(const BinaryMask& m, int kernel)
{
    detail::check_kernel(kernel);
    const int r = kernel / 2;
    const BoundingBox box = m.bbox();
    if (r == 0 || box.empty())
        return m;
    return detail::line_filter(detail::line_filter(m, box, r, true, false, true), box, r, false, false, true);
}

/// Dilation followed by erosion (fills holes and gaps narrower than the kernel).
inline BinaryMask close(const BinaryMask& m, int kernel) { return erode(dilate(m, kernel), kernel); }

inline BinaryMask open(const BinaryMask& m, int kernel) { return dilate(erode(m, kernel), kernel); }

/// 8-connected components in raster order of their first pixel.
inline std::vector<BinaryMask> connected_components(const BinaryMask& m)
{
    const int w = m.width(), h = m.height();
    std::vector<int> label(std::size_t(w) * h, -1);
    std::vector<BinaryMask> out;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!m.at(x, y) || label[std::size_t(y) * w + x] >= 0)
                continue;
            const int id = int(out.size());
            out.emplace_back(w, h);
            BinaryMask& comp = out.back();
            stack.assign(1, {x, y});
            label[std::size_t(y) * w + x] = id;
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                comp.set(cx, cy);
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx, ny = cy + dy;
                        if (!m.test(nx, ny))
                            continue;
                        int& l = label[std::size_t(ny) * w + nx];
                        if (l < 0) {
                            l = id;
                            stack.emplace_back(nx, ny);
                        }
                    }
            }
        }
    return out;
}

inline void check_same_size(const BinaryMask& a, const BinaryMask& b)
{
    if (a.width() != b.width() || a.height() != b.height())
        throw DimensionMismatch("mask dimensions differ");
}

inline std::size_t intersection_count(const BinaryMask& a, const BinaryMask& b)
{
    check_same_size(a, b);
    std::size_t n = 0;
    const auto& x = a.bits();
    const auto& y = b.bits();
    for (std::size_t i = 0; i < x.size(); ++i)
        n += x[i] & y[i];
    return n;
}

/// |a and b| / |a or b|, 0 when both are empty.
inline double mask_iou(const BinaryMask& a, const BinaryMask& b)
{
    const std::size_t inter = intersection_count(a, b);
    const std::size_t uni = a.count() + b.count() - inter;
    return uni == 0 ? 0.0 : double(inter) / double(uni);
}

} // namespace i2a::perception
