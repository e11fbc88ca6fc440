// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "i2a/perception/morphology.hpp"
#include "i2a/perception/debug.hpp"
#include "i2a/perception/pipeline.hpp"
#include "i2a/sim/render.hpp"
#include "i2a/sim/task.hpp"

using namespace i2a;
using namespace i2a::perception;

namespace {

BinaryMask rect(int x0, int y0, int x1, int y1, int size = 256)
{
    BinaryMask m(size, size);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            m.set(x, y);
    return m;
}

BinaryMask random_blob(Rng& rng, int size = 64)
{
    BinaryMask m(size, size);
    const int n = rng.uniform_int(1, 4);
    for (int k = 0; k < n; ++k) {
        const double cx = rng.uniform(0, size), cy = rng.uniform(0, size), r = rng.uniform(2, 14);
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x)
                if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r)
                    m.set(x, y);
    }
    for (int i = 0; i < size * size / 20; ++i)
        m.set(rng.uniform_int(0, size - 1), rng.uniform_int(0, size - 1), rng.bernoulli(0.5));
    return m;
}

// Direct definitions: dilation = any set pixel in the window (outside unset),
// erosion = all window pixels set (outside set).
BinaryMask naive_dilate(const BinaryMask& m, int k)
{
    const int r = k / 2;
    BinaryMask out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            bool v = false;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx)
                    v = v || m.test(x + dx, y + dy);
            out.set(x, y, v);
        }
    return out;
}

BinaryMask naive_erode(const BinaryMask& m, int k)
{
    const int r = k / 2;
    BinaryMask out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            bool v = true;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx)
                    if (m.contains(x + dx, y + dy))
                        v = v && m.at(x + dx, y + dy);
            out.set(x, y, v);
        }
    return out;
}

sim::WorldObject solid(int id, sim::Shape s, sim::Color c, double x, double y)
{
    sim::WorldObject o;
    o.id = id;
    o.shape = s;
    o.texture = {sim::TextureKind::solid, c, std::nullopt};
    o.pose = {x, y, 0.0};
    o.layer = 1;
    return o;
}

sim::WorldState three_objects()
{
    sim::WorldState w;
    w.objects = {solid(1, sim::Shape::block, sim::Color::red, 0.35, -0.3),
                 solid(2, sim::Shape::round, sim::Color::blue, 0.6, 0.0),
                 solid(3, sim::Shape::star, sim::Color::yellow, 0.4, 0.3)};
    return w;
}

} // namespace

TEST(Morphology, MatchesDirectDefinitions)
{
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        const auto m = random_blob(rng, 40);
        for (int k : {1, 3, 5}) {
            EXPECT_EQ(dilate(m, k), naive_dilate(m, k));
            EXPECT_EQ(erode(m, k), naive_erode(m, k));
        }
    }
}

TEST(Morphology, RejectsEvenKernel)
{
    BinaryMask m(8, 8);
    EXPECT_THROW(dilate(m, 2), Error);
    EXPECT_THROW(erode(m, 0), Error);
}

TEST(Morphology, RefinementIsIdempotent)
{
    Rng rng(2);
    for (int i = 0; i < 500; ++i) {
        const auto m = random_blob(rng);
        const auto once = close(m, 3);
        ASSERT_EQ(close(once, 3), once) << "blob " << i;
    }
}

TEST(Morphology, ComponentsAreEightConnected)
{
    BinaryMask m(10, 10);
    m.set(1, 1);
    m.set(2, 2); // diagonal neighbor
    m.set(7, 7);
    const auto comps = connected_components(m);
    ASSERT_EQ(comps.size(), 2u);
    EXPECT_EQ(comps[0].count(), 2u);
    EXPECT_EQ(comps[1].count(), 1u);
}

TEST(MaskIou, BasicCases)
{
    const auto a = rect(10, 10, 29, 29);
    EXPECT_DOUBLE_EQ(mask_iou(a, a), 1.0);
    EXPECT_DOUBLE_EQ(mask_iou(a, rect(100, 100, 110, 110)), 0.0);
    // Equal squares overlapping by half: overlap wh/2, union 3wh/2.
    EXPECT_EQ(mask_iou(a, rect(20, 10, 39, 29)), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(mask_iou(BinaryMask(4, 4), BinaryMask(4, 4)), 0.0);
    EXPECT_THROW(mask_iou(BinaryMask(4, 4), BinaryMask(5, 4)), DimensionMismatch);
}

TEST(Preprocess, NoShadowsMeansNoChange)
{
    const Image table(256, 256, sim::kTableColor);
    EXPECT_EQ(preprocess_image(table), table);
    const auto plain = sim::render_observation(three_objects(), {.shadows = false});
    EXPECT_EQ(preprocess_image(plain), plain);
}

TEST(Preprocess, RemovesShadowBand)
{
    sim::WorldState w;
    w.objects.push_back(solid(1, sim::Shape::block, sim::Color::green, 0.5, 0.0));
    const auto plain = sim::render_observation(w, {.shadows = false});
    const auto shaded = sim::render_observation(w);
    const auto cleaned = preprocess_image(shaded);
    const PerceptionConfig cfg;
    const auto n_plain = foreground_mask(plain, sim::kTableColor, 40).count();
    const auto n_clean = foreground_mask(cleaned, sim::kTableColor, 40).count();
    const auto tol = std::size_t(cfg.closing_kernel * cfg.closing_kernel);
    EXPECT_LE(n_clean, n_plain + tol);
    EXPECT_GE(n_clean + tol, n_plain);
    EXPECT_GT(foreground_mask(shaded, sim::kTableColor, 40).count(), n_plain + 100);
}

TEST(Preprocess, OnlyShadowPixelsChange)
{
    const PerceptionConfig cfg;
    for (auto t : sim::kAllMetaTasks)
        for (std::uint64_t s = 0; s < 5; ++s) {
            const auto img = sim::render_observation(sim::generate_task(t, sim::Level::L1, s).initial_world);
            const auto out = preprocess_image(img, cfg);
            for (int y = 0; y < 256; ++y)
                for (int x = 0; x < 256; ++x)
                    if (!(out.at(x, y) == img.at(x, y)))
                        ASSERT_TRUE(is_shadow(img.at(x, y), sim::kTableColor, cfg));
        }
}

TEST(Preprocess, PaletteColorsAreNeverShadows)
{
    const PerceptionConfig cfg;
    for (auto c : sim::kAllColors)
        EXPECT_FALSE(is_shadow(sim::palette(c), sim::kTableColor, cfg)) << sim::to_string(c);
    EXPECT_TRUE(is_shadow(sim::shadow_color(), sim::kTableColor, cfg));
}

TEST(Propose, NoiseOffMatchesGroundTruth)
{
    const auto w = three_objects();
    const auto ms = propose_masks(sim::render_observation(w, {.shadows = false}), std::nullopt);
    ASSERT_EQ(ms.size(), 3u);
    for (const auto& o : w.objects) {
        const auto gt = sim::render_object_mask(w, o.id).centroid().value();
        int hits = 0;
        for (const auto& m : ms.masks) {
            const auto c = m.centroid().value();
            hits += std::fabs(c.first - gt.first) <= 1.0 && std::fabs(c.second - gt.second) <= 1.0;
        }
        EXPECT_EQ(hits, 1) << o.id;
    }
}

TEST(Propose, BijectsOntoGeneratedScenes)
{
    for (auto t : sim::kAllMetaTasks)
        for (auto l : sim::kAllLevels)
            for (std::uint64_t s = 0; s < 4; ++s) {
                const auto w = sim::generate_task(t, l, s).initial_world;
                const auto ms = postprocess_masks(propose_masks(preprocess_image(sim::render_observation(w)), std::nullopt));
                ASSERT_EQ(ms.size(), w.objects.size());
                std::vector<int> used(ms.size(), 0);
                for (const auto& o : w.objects) {
                    const auto gt = sim::render_object_mask(w, o.id).centroid().value();
                    for (std::size_t i = 0; i < ms.size(); ++i) {
                        const auto c = ms.masks[i].centroid().value();
                        if (std::fabs(c.first - gt.first) <= 1.0 && std::fabs(c.second - gt.second) <= 1.0)
                            ++used[i];
                    }
                }
                for (int u : used)
                    EXPECT_EQ(u, 1);
            }
}

TEST(Propose, DuplicateNoiseOverlaps)
{
    sim::WorldState w;
    w.objects.push_back(solid(1, sim::Shape::round, sim::Color::red, 0.5, 0.0));
    PerceptionConfig cfg;
    cfg.noise = {0, 0, 1.0, 0, 5};
    const auto ms = propose_masks(sim::render_observation(w, {.shadows = false}), std::nullopt, cfg);
    ASSERT_EQ(ms.size(), 2u);
    EXPECT_GT(mask_iou(ms.masks[0], ms.masks[1]), cfg.nms_threshold);
    EXPECT_EQ(postprocess_masks(ms, cfg).size(), 1u);
}

TEST(Propose, PointPromptsSelectComponents)
{
    const auto w = three_objects();
    const auto img = sim::render_observation(w, {.shadows = false});
    const auto c = sim::render_object_mask(w, 2).centroid().value();
    const PixelPoint p{int(std::lround(c.first)), int(std::lround(c.second))};
    PerceptionConfig cfg;
    cfg.noise = NoiseSpec::calibrated(3);
    const auto ms = propose_masks(img, std::vector<PixelPoint>{p}, cfg);
    ASSERT_EQ(ms.size(), 1u);
    EXPECT_TRUE(ms.masks[0].at(p.x, p.y));
    EXPECT_EQ(ms.masks[0], sim::render_object_mask(w, 2));
    EXPECT_TRUE(propose_masks(img, std::vector<PixelPoint>{{2, 2}}).empty());
    EXPECT_THROW(propose_masks(img, std::vector<PixelPoint>{{300, 2}}), Error);
}

TEST(Propose, BlankImageIsEmptyScene)
{
    EXPECT_THROW(propose_masks(Image(256, 256, sim::kTableColor), std::nullopt), EmptyScene);
}

TEST(Propose, NoiseIsSeeded)
{
    const auto img = sim::render_observation(three_objects());
    PerceptionConfig cfg;
    cfg.noise = NoiseSpec::calibrated(11);
    EXPECT_EQ(propose_masks(img, std::nullopt, cfg), propose_masks(img, std::nullopt, cfg));
}

TEST(Propose, PostProcessingRecoversNoisyProposals)
{
    PerceptionConfig cfg;
    int recovered = 0, total = 0;
    for (auto t : sim::kAllMetaTasks)
        for (std::uint64_t s = 0; s < 10; ++s) {
            const auto w = sim::generate_task(t, sim::Level::L1, s).initial_world;
            const auto img = preprocess_image(sim::render_observation(w));
            const auto clean = postprocess_masks(propose_masks(img, std::nullopt, cfg), cfg);
            cfg.noise = NoiseSpec::calibrated(s * 31 + std::uint64_t(t));
            const auto noisy = propose_masks(img, std::nullopt, cfg);
            cfg.noise = {};
            const auto fixed = postprocess_masks(noisy, cfg);
            ++total;
            if (fixed.size() != clean.size())
                continue;
            bool same = true;
            for (const auto& m : clean.masks) {
                const auto a = m.centroid().value();
                bool found = false;
                for (const auto& f : fixed.masks) {
                    const auto b = f.centroid().value();
                    // A surviving duplicate may be shifted by up to 2 px.
                    found = found || (std::fabs(a.first - b.first) <= 2.0 && std::fabs(a.second - b.second) <= 2.0);
                }
                same = same && found;
            }
            recovered += same;
        }
    EXPECT_EQ(recovered, total);
}

TEST(Postprocess, Examples)
{
    PerceptionConfig cfg;
    MaskSet twins;
    twins.push(rect(10, 10, 29, 29));
    twins.push(rect(10, 10, 29, 29));
    EXPECT_EQ(postprocess_masks(twins, cfg).size(), 1u);

    MaskSet tiny;
    tiny.push(rect(0, 0, 4, 1));
    EXPECT_TRUE(postprocess_masks(tiny, cfg).empty());

    auto holey = rect(50, 50, 69, 69);
    holey.set(55, 55, false);
    holey.set(60, 52, false);
    holey.set(64, 66, false);
    MaskSet h;
    h.push(holey);
    const auto out = postprocess_masks(h, cfg);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out.masks[0], rect(50, 50, 69, 69));
}

TEST(Postprocess, NmsBoundHoldsOnFuzzedSets)
{
    Rng rng(4);
    for (int trial = 0; trial < 1000; ++trial) {
        MaskSet ms;
        const int n = rng.uniform_int(1, 8);
        for (int i = 0; i < n; ++i) {
            const int x0 = rng.uniform_int(0, 40), y0 = rng.uniform_int(0, 40);
            ms.masks.push_back(rect(x0, y0, x0 + rng.uniform_int(0, 20), y0 + rng.uniform_int(0, 20), 64));
            ms.scores.push_back(rng.uniform());
        }
        const auto kept = nms(ms, 0.5);
        ASSERT_FALSE(kept.empty());
        for (std::size_t a = 0; a < kept.size(); ++a)
            for (std::size_t b = a + 1; b < kept.size(); ++b)
                ASSERT_LE(mask_iou(ms.masks[kept[a]], ms.masks[kept[b]]), 0.5);
    }
}

TEST(Crop, Examples)
{
    const auto img = sim::render_observation(three_objects());
    MaskSet full;
    full.push(rect(0, 0, 255, 255));
    const auto r = crop_objects(img, full);
    ASSERT_EQ(r.crops.size(), 1u);
    EXPECT_EQ(r.crops[0].image, img);
    EXPECT_EQ(r.masks, full);

    MaskSet three;
    for (int i = 0; i < 3; ++i)
        three.push(rect(10 * i, 0, 10 * i + 5, 5));
    const auto r3 = crop_objects(img, three);
    for (int i = 0; i < 3; ++i)
        EXPECT_EQ(r3.crops[std::size_t(i)].source_index, i);

    BinaryMask disc(256, 256);
    for (int y = 0; y < 256; ++y)
        for (int x = 0; x < 256; ++x)
            if ((x - 50) * (x - 50) + (y - 50) * (y - 50) <= 100)
                disc.set(x, y);
    MaskSet d;
    d.push(disc);
    const auto b = crop_objects(img, d).crops[0].bbox;
    EXPECT_NEAR(b.x0, 40, 1);
    EXPECT_NEAR(b.y0, 40, 1);
    EXPECT_NEAR(b.x1, 60, 1);
    EXPECT_NEAR(b.y1, 60, 1);
}

TEST(Config, Validation)
{
    PerceptionConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.refine_kernel = 4;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = {};
    cfg.a_min = cfg.a_max;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = {};
    cfg.noise.hole_prob = 1.5;
    EXPECT_THROW(cfg.validate(), Error);
}

TEST(DebugPanel, OverlayBlendsInteriorAndOutlinesEdges)
{
    const Image img(10, 10, Rgb{100, 100, 100});
    EXPECT_EQ(mask_overlay(img, {}), img);
    BinaryMask m(10, 10);
    for (int y = 2; y <= 6; ++y)
        for (int x = 2; x <= 6; ++x)
            m.set(x, y);
    MaskSet ms;
    ms.push(m);
    const Image out = mask_overlay(img, ms);
    const Rgb c = kOverlayPalette[0];
    EXPECT_EQ(out.at(2, 4), c);
    EXPECT_EQ(out.at(4, 4), (Rgb{std::uint8_t((100 + c.r) / 2), std::uint8_t((100 + c.g) / 2), std::uint8_t((100 + c.b) / 2)}));
    EXPECT_EQ(out.at(0, 0), img.at(0, 0));
    const Image panel = before_after_panel(img, {}, img, ms);
    EXPECT_EQ(panel.width(), 24);
    EXPECT_EQ(panel.at(11, 5), (Rgb{32, 32, 32}));
    EXPECT_EQ(panel.at(14 + 4, 4), out.at(4, 4));
}
