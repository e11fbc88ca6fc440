// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "i2a/core/error.hpp"
#include "i2a/core/geometry.hpp"
#include "i2a/core/image.hpp"

namespace i2a::sim {

enum class Shape { block, round, pan, bowl, container, frame, letter_L, letter_T, star, flower };
enum class TextureKind { solid, polka_dot, stripe, checkerboard, paisley };
enum class Color { red, green, blue, yellow, purple, orange, pink, cyan, brown, white, black, olive };

inline constexpr std::array kAllShapes = {Shape::block,    Shape::round,    Shape::pan,  Shape::bowl,
                                          Shape::container, Shape::frame,   Shape::letter_L,
                                          Shape::letter_T, Shape::star,     Shape::flower};
inline constexpr std::array kAllTextures = {TextureKind::solid, TextureKind::polka_dot, TextureKind::stripe,
                                            TextureKind::checkerboard, TextureKind::paisley};
inline constexpr std::array kAllColors = {Color::red,    Color::green, Color::blue,  Color::yellow,
                                          Color::purple, Color::orange, Color::pink, Color::cyan,
                                          Color::brown,  Color::white, Color::black, Color::olive};

inline constexpr std::size_t kShapeCount = kAllShapes.size();
inline constexpr std::size_t kTextureCount = kAllTextures.size();
inline constexpr std::size_t kColorCount = kAllColors.size();

inline std::string_view to_string(Shape s)
{
    static constexpr std::array<std::string_view, kShapeCount> names = {
        "block", "round", "pan", "bowl", "container", "frame", "letter_L", "letter_T", "star", "flower"};
    return names[std::size_t(s)];
}

inline std::string_view to_string(TextureKind t)
{
    static constexpr std::array<std::string_view, kTextureCount> names = {"solid", "polka_dot", "stripe",
                                                                          "checkerboard", "paisley"};
    return names[std::size_t(t)];
}

inline std::string_view to_string(Color c)
{
    static constexpr std::array<std::string_view, kColorCount> names = {
        "red", "green", "blue", "yellow", "purple", "orange", "pink", "cyan", "brown", "white", "black", "olive"};
    return names[std::size_t(c)];
}

template <typename Enum, std::size_t N>
std::optional<Enum> enum_from_string(std::string_view name, const std::array<Enum, N>& all)
{
    for (Enum e : all)
        if (to_string(e) == name)
            return e;
    return std::nullopt;
}

inline Shape shape_from_string(std::string_view s)
{
    if (auto v = enum_from_string(s, kAllShapes))
        return *v;
    throw Error("unknown shape '" + std::string(s) + "'");
}
inline TextureKind texture_from_string(std::string_view s)
{
    if (auto v = enum_from_string(s, kAllTextures))
        return *v;
    throw Error("unknown texture '" + std::string(s) + "'");
}
inline Color color_from_string(std::string_view s)
{
    if (auto v = enum_from_string(s, kAllColors))
        return *v;
    throw Error("unknown color '" + std::string(s) + "'");
}

/// Words used in natural-language descriptions.
inline std::string_view shape_noun(Shape s)
{
    static constexpr std::array<std::string_view, kShapeCount> nouns = {
        "block", "round", "pan", "bowl", "container", "frame", "letter L", "letter T", "star", "flower"};
    return nouns[std::size_t(s)];
}

inline std::string_view texture_phrase(TextureKind t)
{
    static constexpr std::array<std::string_view, kTextureCount> words = {"", "polka dot", "stripe",
                                                                          "checkerboard", "paisley"};
    return words[std::size_t(t)];
}

inline Rgb palette(Color c)
{
    static constexpr std::array<Rgb, kColorCount> rgb = {{
        {220, 40, 40},   // red
        {40, 170, 60},   // green
        {40, 80, 220},   // blue
        {240, 220, 40},  // yellow
        {140, 60, 190},  // purple
        {245, 140, 30},  // orange
        {245, 150, 200}, // pink
        {40, 210, 220},  // cyan
        {130, 80, 40},   // brown
        {245, 245, 245}, // white
        {20, 20, 20},    // black
        {128, 128, 0},   // olive
    }};
    return rgb[std::size_t(c)];
}

inline constexpr Rgb kTableColor{150, 165, 170};
inline constexpr double kShadowLuminanceFactor = 0.55;
inline constexpr int kShadowOffsetPx = 4;

inline Rgb shadow_color(Rgb table = kTableColor)
{
    auto scale = [](std::uint8_t v) { return std::uint8_t(std::lround(v * kShadowLuminanceFactor)); };
    return {scale(table.r), scale(table.g), scale(table.b)};
}

/// Containers receive other objects; everything else can be dragged.
inline bool is_container(Shape s)
{
    return s == Shape::pan || s == Shape::bowl || s == Shape::container || s == Shape::frame;
}

namespace detail {

inline Polygon regular_curve(int n, auto radius_at)
{
    Polygon p;
    p.reserve(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * i / n;
        const double r = radius_at(t);
        p.push_back({r * std::cos(t), r * std::sin(t)});
    }
    return p;
}

inline Polygon centered(Polygon p)
{
    if (polygon_signed_area(p) < 0)
        std::reverse(p.begin(), p.end());
    const Vec2 c = polygon_centroid(p);
    for (auto& v : p)
        v = v - c;
    return p;
}

inline Polygon make_footprint(Shape s)
{
    switch (s) {
    case Shape::block:
        return centered({{0, 0}, {0.06, 0}, {0.06, 0.10}, {0, 0.10}});
    case Shape::round:
        return centered(regular_curve(48, [](double) { return 0.045; }));
    case Shape::pan: {
        const double r = 0.065, hw = 0.012, reach = 0.125;
        const double t0 = std::asin(hw / r);
        Polygon p;
        const int n = 48;
        for (int i = 0; i <= n; ++i) {
            const double t = t0 + (2.0 * std::numbers::pi - 2.0 * t0) * i / n;
            p.push_back({r * std::cos(t), r * std::sin(t)});
        }
        p.push_back({reach, -hw});
        p.push_back({reach, hw});
        return centered(p);
    }
    case Shape::bowl:
        return centered(regular_curve(64, [](double) { return 0.08; }));
    case Shape::container:
        return centered({{0, 0}, {0.12, 0}, {0.12, 0.18}, {0, 0.18}});
    case Shape::frame:
        return centered({{0, 0}, {0.08, 0}, {0.08, 0.26}, {0, 0.26}});
    case Shape::letter_L:
        return centered({{0, 0}, {0.04, 0}, {0.04, 0.07}, {0.075, 0.07}, {0.075, 0.11}, {0, 0.11}});
    case Shape::letter_T:
        return centered(
            {{0, 0}, {0.09, 0}, {0.09, 0.03}, {0.06, 0.03}, {0.06, 0.12}, {0.03, 0.12}, {0.03, 0.03}, {0, 0.03}});
    case Shape::star: {
        Polygon p;
        for (int i = 0; i < 10; ++i) {
            const double t = std::numbers::pi * i / 5.0 - std::numbers::pi / 2.0;
            const double r = (i % 2 == 0) ? 0.065 : 0.028;
            p.push_back({r * std::cos(t), r * std::sin(t)});
        }
        return centered(p);
    }
    case Shape::flower:
        return centered(regular_curve(96, [](double t) { return 0.05 + 0.015 * std::cos(6.0 * t); }));
    }
    throw Error("unhandled shape");
}

} // namespace detail

/// Footprint polygon in the object's local frame (meters), centered on its area centroid.
inline const Polygon& footprint(Shape s)
{
    static const std::array<Polygon, kShapeCount> table = [] {
        std::array<Polygon, kShapeCount> t;
        for (Shape sh : kAllShapes)
            t[std::size_t(sh)] = detail::make_footprint(sh);
        return t;
    }();
    return table[std::size_t(s)];
}

} // namespace i2a::sim
