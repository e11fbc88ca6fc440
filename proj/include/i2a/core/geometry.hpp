// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "i2a/core/error.hpp"

namespace i2a {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

using Polygon = std::vector<Vec2>;

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Maps an angle into [0, 360).
inline double wrap_degrees_360(double deg)
{
    double d = std::fmod(deg, 360.0);
    if (d < 0.0)
        d += 360.0;
    return d;
}

/// Maps an angle into (-180, 180].
inline double wrap_degrees_180(double deg)
{
    double d = wrap_degrees_360(deg);
    if (d > 180.0)
        d -= 360.0;
    return d;
}

inline Vec2 rotate(Vec2 p, double yaw_degrees)
{
    const double a = deg_to_rad(yaw_degrees);
    const double c = std::cos(a), s = std::sin(a);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

inline double polygon_signed_area(const Polygon& poly)
{
    double a = 0.0;
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

inline double polygon_area(const Polygon& poly) { return std::fabs(polygon_signed_area(poly)); }

inline Vec2 polygon_centroid(const Polygon& poly)
{
    double a = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        const double cr = p.x * q.y - q.x * p.y;
        a += cr;
        cx += (p.x + q.x) * cr;
        cy += (p.y + q.y) * cr;
    }
    a *= 0.5;
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

/// Even-odd rule point-in-polygon test.
inline bool point_in_polygon(const Polygon& poly, Vec2 p)
{
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < x)
                inside = !inside;
        }
    }
    return inside;
}

struct AxisBox {
    double x_min = 0, y_min = 0, x_max = 0, y_max = 0;
};

inline AxisBox polygon_bounds(const Polygon& poly)
{
    AxisBox b{poly.front().x, poly.front().y, poly.front().x, poly.front().y};
    for (const auto& p : poly) {
        b.x_min = std::min(b.x_min, p.x);
        b.y_min = std::min(b.y_min, p.y);
        b.x_max = std::max(b.x_max, p.x);
        b.y_max = std::max(b.y_max, p.y);
    }
    return b;
}

/// Monotone-chain convex hull, counter-clockwise without repeated endpoint.
inline Polygon convex_hull(std::vector<Vec2> pts)
{
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3)
        return pts;
    auto cross = [](Vec2 o, Vec2 a, Vec2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); };
    Polygon hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0)
            --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

/// Axis-aligned robot workspace in meters.
struct WorkspaceBounds {
    double x_min = 0.25;
    double x_max = 0.75;
    double y_min = -0.5;
    double y_max = 0.5;

    bool valid() const { return x_min < x_max && y_min < y_max; }
    bool contains(Vec2 p, double eps = 1e-9) const
    {
        return p.x >= x_min - eps && p.x <= x_max + eps && p.y >= y_min - eps && p.y <= y_max + eps;
    }
    Vec2 clamp(Vec2 p) const { return {std::clamp(p.x, x_min, x_max), std::clamp(p.y, y_min, y_max)}; }

    friend bool operator==(const WorkspaceBounds&, const WorkspaceBounds&) = default;
};

/// Affine pixel-to-robot map q = A p + b (A in meters/pixel, b in meters).
struct CameraTransform {
    double a11 = 0.5 / 256.0;
    double a12 = 0.0;
    double a21 = 0.0;
    double a22 = 1.0 / 256.0;
    double b1 = 0.25;
    double b2 = -0.5;

    double det() const { return a11 * a22 - a12 * a21; }
    bool invertible() const { return std::fabs(det()) > 1e-15; }

    Vec2 apply(Vec2 px) const { return {a11 * px.x + a12 * px.y + b1, a21 * px.x + a22 * px.y + b2}; }

    /// Linear part only, for offsets.
    Vec2 apply_linear(Vec2 d) const { return {a11 * d.x + a12 * d.y, a21 * d.x + a22 * d.y}; }

    Vec2 inverse(Vec2 m) const
    {
        const double d = det();
        if (std::fabs(d) <= 1e-15)
            throw Error("camera transform is singular");
        const double dx = m.x - b1, dy = m.y - b2;
        return {(a22 * dx - a12 * dy) / d, (-a21 * dx + a11 * dy) / d};
    }

    friend bool operator==(const CameraTransform&, const CameraTransform&) = default;
};

/// Image [0,256]^2 onto x in [0.25,0.75], y in [-0.5,0.5]; column drives x.
inline CameraTransform default_camera() { return CameraTransform{}; }
inline WorkspaceBounds default_bounds() { return WorkspaceBounds{}; }

inline constexpr int kImageSize = 256;

} // namespace i2a
