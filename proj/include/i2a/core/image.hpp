// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "i2a/core/error.hpp"

namespace i2a {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Euclidean RGB distance in 0..255 units.
inline double color_distance(Rgb a, Rgb b)
{
    const double dr = double(a.r) - b.r;
    const double dg = double(a.g) - b.g;
    const double db = double(a.b) - b.b;
    return std::sqrt(dr * dr + dg * dg + db * db);
}

inline double luminance(Rgb c)
{
    return 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
}

/// Hue in degrees [0, 360); achromatic colors report 0.
inline double hue_degrees(Rgb c)
{
    const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double d = mx - mn;
    if (d <= 0.0)
        return 0.0;
    double h;
    if (mx == r)
        h = 60.0 * std::fmod((g - b) / d, 6.0);
    else if (mx == g)
        h = 60.0 * ((b - r) / d + 2.0);
    else
        h = 60.0 * ((r - g) / d + 4.0);
    if (h < 0.0)
        h += 360.0;
    return h;
}

inline double hue_difference(double a, double b)
{
    const double d = std::fabs(a - b);
    return std::min(d, 360.0 - d);
}

/// Integer pixel coordinate; x is the column, y the row.
struct PixelPoint {
    int x = 0;
    int y = 0;

    friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

/// Inclusive pixel bounding box.
struct BoundingBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = -1;
    int y1 = -1;

    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
    bool empty() const { return x1 < x0 || y1 < y0; }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

class Image {
public:
    Image() = default;
    Image(int width, int height, Rgb fill = {})
        : width_(width), height_(height), pixels_(std::size_t(width) * height, fill)
    {
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return pixels_.empty(); }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    Rgb& at(int x, int y) { return pixels_[std::size_t(y) * width_ + x]; }
    const Rgb& at(int x, int y) const { return pixels_[std::size_t(y) * width_ + x]; }

    const std::vector<Rgb>& pixels() const { return pixels_; }
    std::vector<Rgb>& pixels() { return pixels_; }

    friend bool operator==(const Image&, const Image&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<Rgb> pixels_;
};

class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height) : width_(width), height_(height), bits_(std::size_t(width) * height, 0) {}

    int width() const { return width_; }
    int height() const { return height_; }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    bool at(int x, int y) const { return bits_[std::size_t(y) * width_ + x] != 0; }
    void set(int x, int y, bool v = true) { bits_[std::size_t(y) * width_ + x] = v ? 1 : 0; }
    /// Out-of-range reads are false.
    bool test(int x, int y) const { return contains(x, y) && at(x, y); }

    const std::vector<std::uint8_t>& bits() const { return bits_; }
    std::vector<std::uint8_t>& bits() { return bits_; }

    std::size_t count() const
    {
        return std::size_t(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
    }
    bool empty() const { return count() == 0; }

    BoundingBox bbox() const
    {
        BoundingBox box{width_, height_, -1, -1};
        for (int y = 0; y < height_; ++y)
            for (int x = 0; x < width_; ++x)
                if (at(x, y)) {
                    box.x0 = std::min(box.x0, x);
                    box.y0 = std::min(box.y0, y);
                    box.x1 = std::max(box.x1, x);
                    box.y1 = std::max(box.y1, y);
                }
        if (box.x1 < 0)
            return BoundingBox{};
        return box;
    }

    /// Mean of set pixel coordinates, or nullopt for an empty mask.
    std::optional<std::pair<double, double>> centroid() const
    {
        double sx = 0, sy = 0;
        std::size_t n = 0;
        for (int y = 0; y < height_; ++y)
            for (int x = 0; x < width_; ++x)
                if (at(x, y)) {
                    sx += x;
                    sy += y;
                    ++n;
                }
        if (n == 0)
            return std::nullopt;
        return std::make_pair(sx / double(n), sy / double(n));
    }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

} // namespace i2a
