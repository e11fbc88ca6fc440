// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "i2a/core/error.hpp"
#include "i2a/core/image.hpp"
#include "i2a/core/random.hpp"
#include "i2a/perception/morphology.hpp"

namespace i2a::perception {

struct NoiseSpec {
    double split_prob = 0.0;
    double hole_prob = 0.0;
    double duplicate_prob = 0.0;
    double shadow_blob_prob = 0.0;
    std::uint64_t seed = 0;

    bool enabled() const { return split_prob > 0 || hole_prob > 0 || duplicate_prob > 0 || shadow_blob_prob > 0; }

    /// Setting used for the processing ablation.
    static NoiseSpec calibrated(std::uint64_t seed = 0) { return {0.2, 0.3, 0.2, 0.1, seed}; }
};

struct PerceptionConfig {
    double shadow_luminance_ratio = 0.7;
    double shadow_hue_tolerance = 15.0;
    int closing_kernel = 3;
    int refine_kernel = 3;
    std::size_t a_min = 50;
    std::size_t a_max = 256 * 256 / 4;
    double nms_threshold = 0.5;
    double foreground_threshold = 40.0;
    NoiseSpec noise;

    void validate() const
    {
        auto odd = [](int k) { return k >= 1 && k % 2 == 1; };
        auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
        if (!odd(closing_kernel) || !odd(refine_kernel))
            throw Error("kernel sizes must be odd and >= 1");
        if (a_min == 0 || a_min >= a_max)
            throw Error("area limits must satisfy 0 < a_min < a_max");
        if (!(nms_threshold > 0.0 && nms_threshold <= 1.0))
            throw Error("nms threshold must lie in (0, 1]");
        if (!prob(noise.split_prob) || !prob(noise.hole_prob) || !prob(noise.duplicate_prob) ||
            !prob(noise.shadow_blob_prob))
            throw Error("noise probabilities must lie in [0, 1]");
        if (!(shadow_luminance_ratio > 0.0 && shadow_luminance_ratio <= 1.0))
            throw Error("shadow luminance ratio must lie in (0, 1]");
    }
};

struct MaskSet {
    std::vector<BinaryMask> masks;
    std::vector<double> scores;

    std::size_t size() const { return masks.size(); }
    bool empty() const { return masks.empty(); }
    void push(BinaryMask m)
    {
        scores.push_back(double(m.count()) / double(std::max<std::size_t>(1, m.bits().size())));
        masks.push_back(std::move(m));
    }

    friend bool operator==(const MaskSet&, const MaskSet&) = default;
};

struct ObjectCrop {
    Image image;     ///< bbox-sized patch, background outside the mask
    BinaryMask mask; ///< mask restricted to the bbox, same size as image
    BoundingBox bbox;
    int source_index = -1;

    friend bool operator==(const ObjectCrop&, const ObjectCrop&) = default;
};

/// Most frequent color; ties go to the smallest packed RGB value.
inline Rgb estimate_background(const Image& img)
{
    std::map<std::uint32_t, std::size_t> hist;
    for (const auto& p : img.pixels())
        ++hist[(std::uint32_t(p.r) << 16) | (std::uint32_t(p.g) << 8) | p.b];
    std::uint32_t best = 0;
    std::size_t best_n = 0;
    for (const auto& [key, n] : hist)
        if (n > best_n) {
            best = key;
            best_n = n;
        }
    return {std::uint8_t(best >> 16), std::uint8_t(best >> 8), std::uint8_t(best)};
}

inline bool is_shadow(Rgb px, Rgb table, const PerceptionConfig& cfg)
{
    if (px == table)
        return false;
    return hue_difference(hue_degrees(px), hue_degrees(table)) <= cfg.shadow_hue_tolerance &&
           luminance(px) < cfg.shadow_luminance_ratio * luminance(table);
}

inline BinaryMask foreground_mask(const Image& img, Rgb table, double threshold)
{
    BinaryMask m(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (color_distance(img.at(x, y), table) > threshold)
                m.set(x, y);
    return m;
}

/// Gray-threshold shadow filter followed by a closing of the foreground.
inline Image preprocess_image(const Image& img, const PerceptionConfig& cfg = {})
{
    const Rgb table = estimate_background(img);
    Image out = img;
    bool any = false;
    for (auto& p : out.pixels())
        if (is_shadow(p, table, cfg)) {
            p = table;
            any = true;
        }
    if (!any)
        return out;
    const BinaryMask fg = foreground_mask(out, table, cfg.foreground_threshold);
    const BinaryMask closed = close(fg, cfg.closing_kernel);
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x)
            if (closed.at(x, y) && !fg.at(x, y))
                out.at(x, y) = img.at(x, y);
    return out;
}

namespace noise {

/// Cuts a two-pixel gap along a random chord through the mask.
inline void split(BinaryMask& m, Rng& rng)
{
    const auto c = m.centroid();
    if (!c)
        return;
    const BoundingBox b = m.bbox();
    const double theta = rng.uniform(0.0, 3.14159265358979323846);
    const double nx = std::cos(theta), ny = std::sin(theta);
    const double extent = 0.25 * std::min(b.width(), b.height());
    const double offset = rng.uniform(-extent, extent);
    for (int y = b.y0; y <= b.y1; ++y)
        for (int x = b.x0; x <= b.x1; ++x) {
            const double d = (x - c->first) * nx + (y - c->second) * ny - offset;
            if (d >= -1.0 && d < 1.0)
                m.set(x, y, false);
        }
}

/// Punches one to three 1x1 or 2x2 holes at interior pixels.
inline void holes(BinaryMask& m, Rng& rng)
{
    const BoundingBox b = m.bbox();
    std::vector<std::pair<int, int>> interior;
    for (int y = b.y0; y <= b.y1; ++y)
        for (int x = b.x0; x <= b.x1; ++x) {
            bool ok = true;
            for (int dy = -1; dy <= 2 && ok; ++dy)
                for (int dx = -1; dx <= 2 && ok; ++dx)
                    ok = m.test(x + dx, y + dy);
            if (ok)
                interior.emplace_back(x, y);
        }
    if (interior.empty())
        return;
    const int n = rng.uniform_int(1, 3);
    for (int i = 0; i < n; ++i) {
        const auto [x, y] = rng.pick(interior);
        const int s = rng.uniform_int(1, 2);
        for (int dy = 0; dy < s; ++dy)
            for (int dx = 0; dx < s; ++dx)
                m.set(x + dx, y + dy, false);
    }
}

/// Copy shifted by 1-2 px along each axis.
inline BinaryMask duplicate(const BinaryMask& m, Rng& rng)
{
    auto shift = [&] {
        const int s = rng.uniform_int(1, 2);
        return rng.bernoulli(0.5) ? s : -s;
    };
    const int dx = shift(), dy = shift();
    BinaryMask out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x)
            if (m.at(x, y) && out.contains(x + dx, y + dy))
                out.set(x + dx, y + dy);
    return out;
}

/// Small mask over bare table just beyond the bottom-right of the object,
/// mimicking a shadow segment proposed as an object.
inline std::optional<BinaryMask> shadow_blob(const BinaryMask& object, const BinaryMask& foreground, Rng& rng)
{
    const BoundingBox b = object.bbox();
    const int w = rng.uniform_int(5, 6), h = rng.uniform_int(5, 6);
    const int x0 = b.x1 + 6, y0 = std::max(0, b.y1 - h);
    BinaryMask blob(object.width(), object.height());
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x) {
            if (!blob.contains(x, y) || foreground.at(x, y))
                return std::nullopt;
            blob.set(x, y);
        }
    return blob;
}

} // namespace noise

/// Stand-in for a promptable segmenter: color-distance components of the
/// non-table pixels, optionally filtered by point prompts, with injected noise.
inline MaskSet propose_masks(const Image& img, const std::optional<std::vector<PixelPoint>>& points,
                             const PerceptionConfig& cfg = {})
{
    const Rgb table = estimate_background(img);
    const BinaryMask fg = foreground_mask(img, table, cfg.foreground_threshold);
    auto comps = connected_components(fg);
    if (comps.empty())
        throw EmptyScene("no foreground components in observation");

    MaskSet out;
    if (points) {
        for (const auto& p : *points)
            if (!img.contains(p.x, p.y))
                throw Error("point prompt outside image");
        for (auto& c : comps) {
            const bool hit = std::any_of(points->begin(), points->end(), [&](const PixelPoint& p) { return c.at(p.x, p.y); });
            if (hit)
                out.push(std::move(c));
        }
        return out;
    }

    if (!cfg.noise.enabled()) {
        for (auto& c : comps)
            out.push(std::move(c));
        return out;
    }

    Rng rng(derive_seed({cfg.noise.seed, 0x5A4D0ULL}));
    std::vector<BinaryMask> extra;
    for (auto& c : comps) {
        const bool do_split = rng.bernoulli(cfg.noise.split_prob);
        const bool do_holes = rng.bernoulli(cfg.noise.hole_prob);
        const bool do_dup = rng.bernoulli(cfg.noise.duplicate_prob);
        const bool do_blob = rng.bernoulli(cfg.noise.shadow_blob_prob);
        Rng local(rng.next());
        if (do_dup)
            extra.push_back(noise::duplicate(c, local));
        if (do_blob)
            if (auto blob = noise::shadow_blob(c, fg, local))
                extra.push_back(std::move(*blob));
        if (do_split)
            noise::split(c, local);
        if (do_holes)
            noise::holes(c, local);
        if (!c.empty())
            out.push(std::move(c));
    }
    for (auto& e : extra)
        out.push(std::move(e));
    return out;
}

/// Greedy NMS by descending score (stable on index); returns kept indices.
inline std::vector<std::size_t> nms(const MaskSet& ms, double threshold)
{
    std::vector<std::size_t> order(ms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ms.scores[a] > ms.scores[b]; });
    std::vector<std::size_t> kept;
    for (std::size_t i : order) {
        const bool ok = std::all_of(kept.begin(), kept.end(),
                                    [&](std::size_t k) { return mask_iou(ms.masks[i], ms.masks[k]) <= threshold; });
        if (ok)
            kept.push_back(i);
    }
    return kept;
}

inline MaskSet size_filter(const MaskSet& ms, std::size_t a_min, std::size_t a_max)
{
    MaskSet out;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const std::size_t a = ms.masks[i].count();
        if (a >= a_min && a <= a_max) {
            out.masks.push_back(ms.masks[i]);
            out.scores.push_back(ms.scores[i]);
        }
    }
    return out;
}

/// Size filter, dilate-erode refinement, then NMS.
inline MaskSet postprocess_masks(const MaskSet& ms, const PerceptionConfig& cfg = {})
{
    MaskSet filtered = size_filter(ms, cfg.a_min, cfg.a_max);
    for (auto& m : filtered.masks)
        m = close(m, cfg.refine_kernel);
    MaskSet out;
    for (std::size_t i : nms(filtered, cfg.nms_threshold)) {
        out.masks.push_back(filtered.masks[i]);
        out.scores.push_back(filtered.scores[i]);
    }
    return out;
}

/// Bbox patch of `img` with pixels outside the mask set to `background`.
inline ObjectCrop crop_mask(const Image& img, const BinaryMask& mask, Rgb background, int source_index)
{
    ObjectCrop crop;
    crop.source_index = source_index;
    crop.bbox = mask.bbox();
    if (crop.bbox.empty())
        return crop;
    crop.image = Image(crop.bbox.width(), crop.bbox.height(), background);
    crop.mask = BinaryMask(crop.bbox.width(), crop.bbox.height());
    for (int y = crop.bbox.y0; y <= crop.bbox.y1; ++y)
        for (int x = crop.bbox.x0; x <= crop.bbox.x1; ++x)
            if (mask.at(x, y)) {
                crop.image.at(x - crop.bbox.x0, y - crop.bbox.y0) = img.at(x, y);
                crop.mask.set(x - crop.bbox.x0, y - crop.bbox.y0);
            }
    return crop;
}

struct CropResult {
    std::vector<ObjectCrop> crops;
    MaskSet masks;
};

inline CropResult crop_objects(const Image& img, const MaskSet& ms)
{
    const Rgb background = estimate_background(img);
    CropResult r;
    r.crops.reserve(ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i)
        r.crops.push_back(crop_mask(img, ms.masks[i], background, int(i)));
    r.masks = ms;
    return r;
}

/// Whole-image crop, used when an instruction asset is a bare image.
inline ObjectCrop crop_whole(const Image& img)
{
    BinaryMask all(img.width(), img.height());
    std::fill(all.bits().begin(), all.bits().end(), std::uint8_t{1});
    return crop_mask(img, all, estimate_background(img), 0);
}

} // namespace i2a::perception
