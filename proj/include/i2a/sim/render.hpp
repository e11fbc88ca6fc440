// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "i2a/core/geometry.hpp"
#include "i2a/core/image.hpp"
#include "i2a/sim/world.hpp"

namespace i2a::sim {

struct RenderOptions {
    bool shadows = true;
    CameraTransform camera = default_camera();
    int size = kImageSize;
};

namespace detail {

inline int floor_mod(int a, int m)
{
    const int r = a % m;
    return r < 0 ? r + m : r;
}

inline int floor_div(int a, int m) { return (a - floor_mod(a, m)) / m; }

/// Whether the pattern paints the secondary color at pixel offset (du, dv)
/// from the object's center pixel. Patterns live in image space.
inline bool pattern_secondary(TextureKind kind, int du, int dv)
{
    switch (kind) {
    case TextureKind::solid:
        return false;
    case TextureKind::stripe:
        return floor_mod(du, 6) < 2;
    case TextureKind::polka_dot: {
        const int lx = floor_mod(du, 6), ly = floor_mod(dv, 6);
        return std::abs(lx - 3) + std::abs(ly - 3) <= 1;
    }
    case TextureKind::checkerboard: {
        const int cx = floor_div(du, 5), cy = floor_div(dv, 5);
        return ((cx + cy) & 1) != 0 && floor_mod(du, 5) < 4 && floor_mod(dv, 5) < 4;
    }
    case TextureKind::paisley: {
        const int lx = floor_mod(du, 12), ly = floor_mod(dv, 12);
        const int h2 = (lx - 5) * (lx - 5) + (ly - 5) * (ly - 5);
        const int t2 = (lx - 8) * (lx - 8) + (ly - 8) * (ly - 8);
        return h2 * 10 <= 100 || t2 * 10 <= 25;
    }
    }
    return false;
}

} // namespace detail

inline Rgb texture_color(const TextureSpec& tex, int du, int dv)
{
    if (tex.secondary && detail::pattern_secondary(tex.kind, du, dv))
        return palette(*tex.secondary);
    return palette(tex.primary);
}

/// Pixel of the object's center, used as the texture anchor.
inline PixelPoint center_pixel(const Pose& pose, const CameraTransform& cam)
{
    const Vec2 p = cam.inverse(pose.position());
    return {int(std::lround(p.x)), int(std::lround(p.y))};
}

/// Visits every pixel whose center (integer coordinates) falls inside the polygon.
template <typename F>
void rasterize(const Polygon& poly, const CameraTransform& cam, int size, F&& visit)
{
    const AxisBox mb = polygon_bounds(poly);
    const Vec2 corners[4] = {cam.inverse({mb.x_min, mb.y_min}), cam.inverse({mb.x_max, mb.y_min}),
                             cam.inverse({mb.x_min, mb.y_max}), cam.inverse({mb.x_max, mb.y_max})};
    double u0 = corners[0].x, u1 = corners[0].x, v0 = corners[0].y, v1 = corners[0].y;
    for (const auto& c : corners) {
        u0 = std::min(u0, c.x);
        u1 = std::max(u1, c.x);
        v0 = std::min(v0, c.y);
        v1 = std::max(v1, c.y);
    }
    const int c0 = std::max(0, int(std::floor(u0))), c1 = std::min(size - 1, int(std::ceil(u1)));
    const int r0 = std::max(0, int(std::floor(v0))), r1 = std::min(size - 1, int(std::ceil(v1)));
    for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c)
            if (point_in_polygon(poly, cam.apply({double(c), double(r)})))
                visit(c, r);
}

/// Object indices in draw order (layer ascending, stable on index).
inline std::vector<std::size_t> draw_order(const WorldState& world)
{
    std::vector<std::size_t> order(world.objects.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return world.objects[a].layer < world.objects[b].layer;
    });
    return order;
}

/// Top-down orthographic render. Each object casts a darkened copy of its
/// footprint offset by (+4, +4) px onto the table.
inline Image render_observation(const WorldState& world, const RenderOptions& opt = {})
{
    Image img(opt.size, opt.size, world.table_color);
    if (opt.shadows) {
        const Rgb shade = shadow_color(world.table_color);
        for (const auto& o : world.objects)
            rasterize(world_footprint(o), opt.camera, opt.size + kShadowOffsetPx, [&](int c, int r) {
                const int sc = c + kShadowOffsetPx, sr = r + kShadowOffsetPx;
                if (img.contains(sc, sr))
                    img.at(sc, sr) = shade;
            });
    }
    for (std::size_t idx : draw_order(world)) {
        const auto& o = world.objects[idx];
        const PixelPoint anchor = center_pixel(o.pose, opt.camera);
        rasterize(world_footprint(o), opt.camera, opt.size,
                  [&](int c, int r) { img.at(c, r) = texture_color(o.texture, c - anchor.x, r - anchor.y); });
    }
    return img;
}

/// Per-pixel index of the visible object, -1 for table.
inline std::vector<int> render_labels(const WorldState& world, const RenderOptions& opt = {})
{
    std::vector<int> labels(std::size_t(opt.size) * opt.size, -1);
    for (std::size_t idx : draw_order(world))
        rasterize(world_footprint(world.objects[idx]), opt.camera, opt.size,
                  [&](int c, int r) { labels[std::size_t(r) * opt.size + c] = int(idx); });
    return labels;
}

/// Visible-pixel mask of one object.
inline BinaryMask render_object_mask(const WorldState& world, int id, const RenderOptions& opt = {})
{
    const auto labels = render_labels(world, opt);
    const int target = int(world.index_of(id));
    BinaryMask m(opt.size, opt.size);
    for (int r = 0; r < opt.size; ++r)
        for (int c = 0; c < opt.size; ++c)
            if (labels[std::size_t(r) * opt.size + c] == target)
                m.set(c, r);
    return m;
}

} // namespace i2a::sim
