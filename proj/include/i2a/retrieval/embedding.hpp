// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "i2a/core/error.hpp"
#include "i2a/core/geometry.hpp"
#include "i2a/core/image.hpp"
#include "i2a/perception/morphology.hpp"
#include "i2a/perception/pipeline.hpp"
#include "i2a/sim/render.hpp"
#include "i2a/sim/vocabulary.hpp"

namespace i2a::retrieval {

using perception::ObjectCrop;
using sim::Color;
using sim::Shape;
using sim::TextureKind;

inline constexpr std::size_t kPrimaryOffset = 0;
inline constexpr std::size_t kSecondaryOffset = sim::kColorCount;
inline constexpr std::size_t kTextureOffset = 2 * sim::kColorCount;
inline constexpr std::size_t kShapeOffset = kTextureOffset + sim::kTextureCount;
inline constexpr std::size_t kEmbeddingDim = kShapeOffset + sim::kShapeCount;
static_assert(kEmbeddingDim == 39);

enum class Provenance { text, image, remote };

struct AttributeEmbedding {
    std::vector<double> vector;
    Provenance provenance = Provenance::text;

    friend bool operator==(const AttributeEmbedding&, const AttributeEmbedding&) = default;
};

inline AttributeEmbedding normalized(std::vector<double> v, Provenance p)
{
    const double n = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (n > 0.0)
        for (auto& x : v)
            x /= n;
    return {std::move(v), p};
}

inline double cosine(const AttributeEmbedding& a, const AttributeEmbedding& b)
{
    if (a.vector.size() != b.vector.size())
        throw DimensionMismatch("embedding dimensions differ");
    return std::inner_product(a.vector.begin(), a.vector.end(), b.vector.begin(), 0.0);
}

/// Attributes recovered from a text query or an image.
struct Attributes {
    std::optional<Color> primary;
    std::optional<Color> secondary;
    TextureKind texture = TextureKind::solid;
    std::optional<Shape> shape; ///< absent: any shape
};

inline AttributeEmbedding encode(const Attributes& a, Provenance p)
{
    std::vector<double> v(kEmbeddingDim, 0.0);
    if (a.primary)
        v[kPrimaryOffset + std::size_t(*a.primary)] = 1.0;
    if (a.secondary)
        v[kSecondaryOffset + std::size_t(*a.secondary)] = 1.0;
    v[kTextureOffset + std::size_t(a.texture)] = 1.0;
    if (a.shape)
        v[kShapeOffset + std::size_t(*a.shape)] = 1.0;
    else
        for (std::size_t i = 0; i < sim::kShapeCount; ++i)
            v[kShapeOffset + i] = 0.1;
    return normalized(std::move(v), p);
}

namespace text {

inline std::vector<std::string> tokenize(std::string_view q)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : q) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur.push_back(char(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

inline std::optional<TextureKind> texture_word(std::string_view w)
{
    if (w == "polka" || w == "dot" || w == "dots" || w == "dotted")
        return TextureKind::polka_dot;
    if (w == "stripe" || w == "stripes" || w == "striped")
        return TextureKind::stripe;
    if (w == "checkerboard" || w == "checker" || w == "checkers" || w == "checkered")
        return TextureKind::checkerboard;
    if (w == "paisley")
        return TextureKind::paisley;
    if (w == "solid" || w == "plain")
        return TextureKind::solid;
    return std::nullopt;
}

inline std::optional<Shape> shape_word(std::string_view w)
{
    static constexpr std::array<std::pair<std::string_view, Shape>, 11> words = {{
        {"block", Shape::block},
        {"round", Shape::round},
        {"pan", Shape::pan},
        {"bowl", Shape::bowl},
        {"container", Shape::container},
        {"frame", Shape::frame},
        {"star", Shape::star},
        {"flower", Shape::flower},
        {"blocks", Shape::block},
        {"bowls", Shape::bowl},
        {"pans", Shape::pan},
    }};
    for (const auto& [word, s] : words)
        if (w == word)
            return s;
    return std::nullopt;
}

} // namespace text

/// Parses color, texture and shape words; unknown words are ignored.
inline Attributes parse_query(std::string_view query)
{
    const auto tokens = text::tokenize(query);
    Attributes a;
    bool hit = false;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto& t = tokens[i];
        if (auto c = sim::enum_from_string(t, sim::kAllColors)) {
            if (!a.primary)
                a.primary = c;
            else if (!a.secondary)
                a.secondary = c;
            hit = true;
        } else if (auto k = text::texture_word(t)) {
            a.texture = *k;
            hit = true;
        } else if (t == "letter" && i + 1 < tokens.size() && (tokens[i + 1] == "l" || tokens[i + 1] == "t")) {
            a.shape = tokens[i + 1] == "l" ? Shape::letter_L : Shape::letter_T;
            ++i;
            hit = true;
        } else if (auto s = text::shape_word(t)) {
            a.shape = s;
            hit = true;
        } else if (t == "object" || t == "objects" || t == "thing") {
            hit = true;
        }
    }
    if (!hit)
        throw UnparsableQuery("no color, texture or shape word in query '" + std::string(query) + "'");
    return a;
}

inline AttributeEmbedding embed_text(std::string_view query)
{
    if (query.empty())
        throw UnparsableQuery("empty query");
    return encode(parse_query(query), Provenance::text);
}

namespace shape_features {

inline constexpr std::size_t kCount = 5;
using Vector = std::array<double, kCount>;

/// Rotation-invariant descriptors, computed in metric space.
inline std::optional<Vector> compute(const BinaryMask& m, const CameraTransform& cam)
{
    std::vector<Vec2> pts;
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x)
            if (m.at(x, y))
                pts.push_back(cam.apply_linear({double(x), double(y)}));
    if (pts.size() < 10)
        return std::nullopt;
    const double px_area = std::fabs(cam.det());
    const double area = double(pts.size()) * px_area;

    Vec2 c{};
    for (const auto& p : pts)
        c = c + p;
    c = c * (1.0 / double(pts.size()));
    double sxx = 0, syy = 0, sxy = 0, rmax = 0;
    for (const auto& p : pts) {
        const Vec2 d = p - c;
        sxx += d.x * d.x;
        syy += d.y * d.y;
        sxy += d.x * d.y;
        rmax = std::max(rmax, d.norm());
    }
    sxx /= double(pts.size());
    syy /= double(pts.size());
    sxy /= double(pts.size());
    const double tr = sxx + syy, det = sxx * syy - sxy * sxy;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double l1 = tr / 2.0 + disc, l2 = std::max(0.0, tr / 2.0 - disc);
    const double elong = l1 > 0 ? std::sqrt(l2 / l1) : 1.0;

    std::vector<Vec2> corners;
    corners.reserve(4 * pts.size());
    const Vec2 hx = cam.apply_linear({0.5, 0.0}), hy = cam.apply_linear({0.0, 0.5});
    double boundary_sum = 0;
    std::size_t boundary_n = 0;
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            if (!m.at(x, y))
                continue;
            const bool edge = !m.test(x - 1, y) || !m.test(x + 1, y) || !m.test(x, y - 1) || !m.test(x, y + 1);
            if (!edge)
                continue;
            const Vec2 p = cam.apply_linear({double(x), double(y)});
            corners.push_back(p + hx + hy);
            corners.push_back(p + hx - hy);
            corners.push_back(p - hx + hy);
            corners.push_back(p - hx - hy);
            boundary_sum += (p - c).norm();
            ++boundary_n;
        }
    const double hull_area = polygon_area(convex_hull(corners));
    const double solidity = hull_area > 0 ? std::min(1.0, area / hull_area) : 1.0;
    const double rmax_ratio = rmax / std::sqrt(area);
    const double boundary_ratio = rmax > 0 ? (boundary_sum / double(boundary_n)) / rmax : 1.0;
    return Vector{std::log(area), elong, solidity, rmax_ratio, boundary_ratio};
}

inline constexpr Vector kWeights = {1.5, 2.0, 5.0, 3.0, 3.0};

inline double distance(const Vector& a, const Vector& b)
{
    double s = 0;
    for (std::size_t i = 0; i < kCount; ++i) {
        const double d = kWeights[i] * (a[i] - b[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

struct Prototype {
    Shape shape;
    Vector features;
};

/// Reference descriptors rendered from every footprint at a few orientations.
inline const std::vector<Prototype>& prototypes()
{
    static const std::vector<Prototype> table = [] {
        std::vector<Prototype> out;
        for (Shape s : sim::kAllShapes)
            for (double yaw : {0.0, 45.0, 90.0}) {
                sim::WorldState w;
                sim::WorldObject o;
                o.id = 1;
                o.shape = s;
                o.pose = {0.5, 0.0, yaw};
                w.objects.push_back(o);
                const auto mask = sim::render_object_mask(w, 1);
                if (auto f = compute(mask, default_camera()))
                    out.push_back({s, *f});
            }
        return out;
    }();
    return table;
}

inline Shape classify(const Vector& f)
{
    const auto& protos = prototypes();
    double best = std::numeric_limits<double>::infinity();
    Shape shape = Shape::block;
    for (const auto& p : protos) {
        const double d = distance(f, p.features);
        if (d < best) {
            best = d;
            shape = p.shape;
        }
    }
    return shape;
}

} // namespace shape_features

namespace texture_features {

/// Classifies the pattern of secondary-color pixels inside the object region.
/// Stripes run vertically in image space; the other patterns are told apart by
/// their largest piece.
inline TextureKind classify(const BinaryMask& secondary, const BinaryMask& object)
{
    std::size_t down = 0, down_same = 0;
    for (int y = 0; y + 1 < secondary.height(); ++y)
        for (int x = 0; x < secondary.width(); ++x)
            if (secondary.at(x, y) && object.at(x, y + 1)) {
                ++down;
                down_same += secondary.at(x, y + 1);
            }
    const auto comps = perception::connected_components(secondary);
    if (comps.empty())
        return TextureKind::solid;
    if (down > 0 && double(down_same) >= 0.98 * double(down))
        return TextureKind::stripe;
    std::size_t largest = 0;
    for (const auto& c : comps)
        largest = std::max(largest, c.count());
    if (largest <= 5)
        return TextureKind::polka_dot;
    if (largest <= 16)
        return TextureKind::checkerboard;
    return TextureKind::paisley;
}

} // namespace texture_features

inline constexpr double kPaletteTolerance = 40.0;
inline constexpr std::size_t kMinForeground = 10;

/// Attributes of the object in a crop. Pixels that match no palette color
/// (table, shadow) are ignored.
inline Attributes analyze_image(const Image& img, const BinaryMask* region = nullptr,
                                const CameraTransform& cam = default_camera())
{
    const int w = img.width(), h = img.height();
    std::vector<int> label(std::size_t(w) * h, -1);
    std::array<std::size_t, sim::kColorCount> counts{};
    std::size_t total = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (region && !region->at(x, y))
                continue;
            const Rgb px = img.at(x, y);
            double best = kPaletteTolerance;
            int best_c = -1;
            for (Color c : sim::kAllColors) {
                const double d = color_distance(px, sim::palette(c));
                if (d <= best) {
                    best = d;
                    best_c = int(c);
                }
            }
            if (best_c >= 0) {
                label[std::size_t(y) * w + x] = best_c;
                ++counts[std::size_t(best_c)];
                ++total;
            }
        }
    if (total < kMinForeground)
        throw EmptyCrop("crop has fewer than " + std::to_string(kMinForeground) + " object pixels");

    std::array<std::size_t, sim::kColorCount> order_idx{};
    std::iota(order_idx.begin(), order_idx.end(), std::size_t{0});
    std::stable_sort(order_idx.begin(), order_idx.end(),
                     [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });

    Attributes a;
    a.primary = Color(order_idx[0]);
    const std::size_t second = order_idx[1];
    if (counts[second] * 20 >= total) {
        a.secondary = Color(second);
    }
    BinaryMask object(w, h);
    for (std::size_t i = 0; i < label.size(); ++i)
        object.bits()[i] = label[i] >= 0 ? 1 : 0;
    if (a.secondary) {
        BinaryMask sec(w, h);
        for (std::size_t i = 0; i < label.size(); ++i)
            sec.bits()[i] = label[i] == int(*a.secondary) ? 1 : 0;
        a.texture = texture_features::classify(sec, object);
        if (a.texture == TextureKind::solid)
            a.secondary.reset();
    }
    if (auto f = shape_features::compute(object, cam))
        a.shape = shape_features::classify(*f);
    return a;
}

inline AttributeEmbedding embed_image(const Image& img) { return encode(analyze_image(img), Provenance::image); }

inline AttributeEmbedding embed_image(const ObjectCrop& crop)
{
    if (crop.image.empty())
        throw EmptyCrop("empty crop");
    return encode(analyze_image(crop.image, &crop.mask), Provenance::image);
}

} // namespace i2a::retrieval
