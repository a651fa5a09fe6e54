#include "sortforge/coloradapt/coloradapt.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

using namespace sortforge::coloradapt;
using sortforge::extraction::AlphaMatte;
using sortforge::imgcore::BoundingBox;
using sortforge::imgcore::RasterImage;
using sortforge::imgcore::full_box;

namespace {

RasterImage random_image(std::mt19937& rng, int w, int h, int lo = 0, int hi = 255) {
    std::uniform_int_distribution<int> byte(lo, hi);
    RasterImage img(w, h, 3);
    for (auto& b : img.data()) b = static_cast<std::uint8_t>(byte(rng));
    return img;
}

RasterImage solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    RasterImage img(w, h, 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            img.at(x, y, 0) = r;
            img.at(x, y, 1) = g;
            img.at(x, y, 2) = b;
        }
    return img;
}

// Fresh scan per value: the smallest target level whose CDF reaches the
// source CDF. Independent of the library's single forward sweep.
std::uint8_t lut_oracle(const ChannelHistogram& src, const ChannelHistogram& target, int v) {
    for (int u = 0; u < 256; ++u)
        if (target.cdf[u] >= src.cdf[v]) return static_cast<std::uint8_t>(u);
    return 255;
}

// Plain midpoint-CDF equalization over the whole image, one global
// histogram, no tiling and no clipping.
RasterImage equalize_oracle(const RasterImage& img) {
    const RgbHistogram hist = histogram(img);
    RasterImage out = img;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            for (int c = 0; c < 3; ++c) {
                const int v = img.at(x, y, c);
                const double below = v > 0 ? hist[c].cdf[v - 1] : 0.0;
                const double mid = 255.0 * (below + hist[c].cdf[v]) / 2.0;
                out.at(x, y, c) = static_cast<std::uint8_t>(
                    std::clamp<long>(std::lround(mid), 0, 255));
            }
    return out;
}

} // namespace

TEST_CASE("histogram counts per channel and region") {
    RasterImage img(3, 2, 3);
    // Channel 0 values: 5, 5, 9, 9, 9, 200.
    const std::uint8_t r[] = {5, 5, 9, 9, 9, 200};
    for (int i = 0; i < 6; ++i) {
        img.at(i % 3, i / 3, 0) = r[i];
        img.at(i % 3, i / 3, 1) = 7;
        img.at(i % 3, i / 3, 2) = static_cast<std::uint8_t>(i);
    }
    const RgbHistogram hist = histogram(img);
    CHECK(hist[0].bins[5] == 2);
    CHECK(hist[0].bins[9] == 3);
    CHECK(hist[0].bins[200] == 1);
    CHECK(hist[0].total == 6);
    CHECK(hist[1].bins[7] == 6);
    CHECK(hist[2].bins[3] == 1);
    CHECK(hist[0].cdf[255] == doctest::Approx(1.0));
    CHECK(hist[0].cdf[5] == doctest::Approx(2.0 / 6.0));

    const RgbHistogram sub = histogram(img, {0, 0, 2, 1});
    CHECK(sub[0].total == 2);
    CHECK(sub[0].bins[5] == 2);

    CHECK_THROWS_AS(histogram(img, {0, 0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(histogram(img, {0, 0, 4, 2}), std::invalid_argument);
}

TEST_CASE("match_histogram agrees with the per-value scan oracle") {
    std::mt19937 rng(211);
    std::uniform_int_distribution<int> lo(0, 100);
    for (int trial = 0; trial < 50; ++trial) {
        const RasterImage src = random_image(rng, 14, 11, lo(rng), 255 - lo(rng));
        const RasterImage ref = random_image(rng, 9, 9, lo(rng), 255 - lo(rng));
        const BoundingBox region{2, 1, 12, 10};
        const RgbHistogram src_hist = histogram(src, region);
        const RgbHistogram target = histogram(ref);

        const RasterImage out = match_histogram(src, target, region);
        for (int y = 0; y < src.height(); ++y)
            for (int x = 0; x < src.width(); ++x)
                for (int c = 0; c < 3; ++c) {
                    const bool inside = x >= region.x_min && x < region.x_max &&
                                        y >= region.y_min && y < region.y_max;
                    const std::uint8_t expected =
                        inside ? lut_oracle(src_hist[c], target[c], src.at(x, y, c))
                               : src.at(x, y, c);
                    CHECK(out.at(x, y, c) == expected);
                }
    }
}

TEST_CASE("match_histogram against itself is the identity") {
    std::mt19937 rng(223);
    const RasterImage img = random_image(rng, 16, 12);
    const RasterImage out = match_histogram(img, histogram(img), full_box(16, 12));
    CHECK(std::equal(img.data().begin(), img.data().end(), out.data().begin()));
}

TEST_CASE("match_histogram mapping is monotone") {
    // A 256x1 ramp exposes the full LUT; mapped values must never decrease.
    RasterImage ramp(256, 1, 3);
    for (int x = 0; x < 256; ++x)
        for (int c = 0; c < 3; ++c) ramp.at(x, 0, c) = static_cast<std::uint8_t>(x);
    std::mt19937 rng(227);
    for (int trial = 0; trial < 20; ++trial) {
        const RgbHistogram target = histogram(random_image(rng, 10, 10, 30, 220));
        const RasterImage out = match_histogram(ramp, target, full_box(256, 1));
        for (int x = 1; x < 256; ++x)
            for (int c = 0; c < 3; ++c) CHECK(out.at(x, 0, c) >= out.at(x - 1, 0, c));
    }
}

TEST_CASE("match_histogram rejects an empty target") {
    const RasterImage img = solid(4, 4, 10, 20, 30);
    RgbHistogram empty{};
    for (auto& ch : empty) ch.finalize();
    CHECK_THROWS_AS(match_histogram(img, empty, full_box(4, 4)), std::invalid_argument);
}

TEST_CASE("histogram matching contracts the distance to the target") {
    // Mini version of the acceptance property: matching never moves the
    // region's histogram farther from the target, in earth-mover terms.
    std::mt19937 rng(229);
    std::uniform_int_distribution<int> lo(0, 120);
    for (int trial = 0; trial < 10; ++trial) {
        const int a = lo(rng), b = lo(rng);
        const RasterImage src = random_image(rng, 20, 20, a, a + 100);
        const RasterImage ref = random_image(rng, 20, 20, b, b + 100);
        const RgbHistogram target = histogram(ref);
        const RasterImage matched = match_histogram(src, target, full_box(20, 20));
        const RgbHistogram matched_hist = histogram(matched);
        const RgbHistogram src_hist = histogram(src);

        for (int c = 0; c < 3; ++c) {
            double before = 0.0, after = 0.0;
            for (int i = 0; i < 256; ++i) {
                before += std::abs(src_hist[c].cdf[i] - target[c].cdf[i]);
                after += std::abs(matched_hist[c].cdf[i] - target[c].cdf[i]);
            }
            CHECK(after <= before + 1e-9);
        }
    }
}

TEST_CASE("clahe keeps constant regions constant") {
    const RasterImage img = solid(32, 32, 77, 88, 99);
    for (const double clip : {1.0, 2.0, 100.0}) {
        const RasterImage out = clahe(img, {4, 4, clip}, full_box(32, 32));
        CHECK(std::equal(img.data().begin(), img.data().end(), out.data().begin()));
    }
}

TEST_CASE("unclipped single-tile clahe is plain equalization") {
    std::mt19937 rng(233);
    RasterImage img(16, 16, 3);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) {
            img.at(x, y, 0) = static_cast<std::uint8_t>(40 + 5 * x);
            img.at(x, y, 1) = static_cast<std::uint8_t>(200 - 4 * y);
            img.at(x, y, 2) = static_cast<std::uint8_t>(30 + 3 * ((x + y) % 20));
        }
    const RasterImage out = clahe(img, {1, 1, 1e12}, full_box(16, 16));
    const RasterImage expected = equalize_oracle(img);
    CHECK(std::equal(expected.data().begin(), expected.data().end(), out.data().begin()));
}

TEST_CASE("identical tiles interpolate to the single-tile result") {
    std::mt19937 rng(239);
    const RasterImage base = random_image(rng, 12, 10);
    RasterImage tiled(24, 20, 3);
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 24; ++x)
            for (int c = 0; c < 3; ++c) tiled.at(x, y, c) = base.at(x % 12, y % 10, c);

    const RasterImage grid = clahe(tiled, {2, 2, 1e12}, full_box(24, 20));
    const RasterImage single = clahe(tiled, {1, 1, 1e12}, full_box(24, 20));
    CHECK(std::equal(grid.data().begin(), grid.data().end(), single.data().begin()));
}

TEST_CASE("clahe validates region and spec") {
    const RasterImage img = solid(16, 16, 1, 2, 3);
    CHECK_THROWS_AS(clahe(img, {8, 8, 2.0}, BoundingBox{0, 0, 4, 4}),
                    std::invalid_argument);
    CHECK_THROWS_AS(clahe(img, {0, 4, 2.0}, full_box(16, 16)), std::invalid_argument);
    CHECK_THROWS_AS(clahe(img, {4, 4, 0.5}, full_box(16, 16)), std::invalid_argument);
}

TEST_CASE("blend endpoints and rounding") {
    const RasterImage fg = solid(2, 2, 255, 0, 100);
    const RasterImage bg = solid(4, 4, 0, 255, 200);

    AlphaMatte opaque(2, 2);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) opaque.set(x, y, 1.0);
    const RasterImage on = blend(fg, bg, opaque, 1, 1);
    CHECK(on.at(1, 1, 0) == 255);
    CHECK(on.at(1, 1, 1) == 0);
    CHECK(on.at(0, 0, 0) == 0);  // outside the placement

    AlphaMatte clear(2, 2);
    const RasterImage off = blend(fg, bg, clear, 1, 1);
    for (int c = 0; c < 3; ++c) CHECK(off.at(1, 1, c) == bg.at(1, 1, c));

    AlphaMatte half(2, 2);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) half.set(x, y, 0.5);
    const RasterImage mid = blend(fg, bg, half, 0, 0);
    CHECK(mid.at(0, 0, 0) == 128);  // 127.5 rounds away from zero
    CHECK(mid.at(0, 0, 1) == 128);
    CHECK(mid.at(0, 0, 2) == 150);
}

TEST_CASE("blend validates placement") {
    const RasterImage fg = solid(3, 3, 1, 1, 1);
    const RasterImage bg = solid(4, 4, 2, 2, 2);
    AlphaMatte a(3, 3);
    CHECK_THROWS_AS(blend(fg, bg, a, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(blend(fg, bg, a, -1, 0), std::invalid_argument);
    AlphaMatte wrong(2, 3);
    CHECK_THROWS_AS(blend(fg, bg, wrong, 0, 0), std::invalid_argument);
}

namespace {

struct AdaptFixture {
    RasterImage src = solid(24, 24, 40, 200, 60);
    AlphaMatte matte{24, 24};
    RasterImage bg = solid(64, 64, 50, 60, 70);
    RasterImage patch = solid(16, 16, 100, 110, 120);

    AdaptFixture() {
        for (int y = 8; y < 16; ++y)
            for (int x = 8; x < 16; ++x) {
                src.at(x, y, 0) = 200;
                src.at(x, y, 1) = 30;
                src.at(x, y, 2) = 30;
                matte.set(x, y, 1.0);
            }
    }
};

} // namespace

TEST_CASE("adapt composites the object at the background center") {
    const AdaptFixture f;
    const AdaptResult out = adapt(f.src, f.matte, f.bg, f.patch, 1.0, AdaptMode::BS);
    CHECK(out.box == BoundingBox{28, 28, 36, 36});
    CHECK(out.mask.count() == 64);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) {
            const bool inside = x >= 28 && x < 36 && y >= 28 && y < 36;
            if (inside) {
                CHECK(out.composite.at(x, y, 0) == 200);
                CHECK(out.composite.at(x, y, 1) == 30);
                CHECK(out.mask.get(x, y));
                CHECK(out.alpha.at(x, y) == 1.0);
            } else {
                for (int c = 0; c < 3; ++c)
                    CHECK(out.composite.at(x, y, c) == f.bg.at(x, y, c));
                CHECK_FALSE(out.mask.get(x, y));
                CHECK(out.alpha.at(x, y) == 0.0);
            }
        }
}

TEST_CASE("adapt matches the box interior to a constant target") {
    const AdaptFixture f;
    const AdaptResult out = adapt(f.src, f.matte, f.bg, f.patch, 1.0, AdaptMode::BS_HM);
    for (int y = 28; y < 36; ++y)
        for (int x = 28; x < 36; ++x) {
            CHECK(out.composite.at(x, y, 0) == 100);
            CHECK(out.composite.at(x, y, 1) == 110);
            CHECK(out.composite.at(x, y, 2) == 120);
        }
    // Pixels outside the annotation box never change.
    CHECK(out.composite.at(0, 0, 0) == 50);
    CHECK(out.composite.at(27, 28, 0) == 50);
}

TEST_CASE("adapt equalization leaves an already-flat box alone") {
    const AdaptFixture f;
    const AdaptResult hm = adapt(f.src, f.matte, f.bg, f.patch, 1.0, AdaptMode::BS_HM);
    const AdaptResult eq =
        adapt(f.src, f.matte, f.bg, f.patch, 1.0, AdaptMode::BS_HM_EQ, {2, 2, 2.0});
    CHECK(std::equal(hm.composite.data().begin(), hm.composite.data().end(),
                     eq.composite.data().begin()));
}

TEST_CASE("adapt scales the annotation box") {
    const AdaptFixture f;
    const AdaptResult out = adapt(f.src, f.matte, f.bg, f.patch, 1.5, AdaptMode::BS);
    CHECK(out.box == BoundingBox{26, 26, 38, 38});
    CHECK(out.box.width() == 12);
}

TEST_CASE("adapt rejects mismatched or oversized inputs") {
    const AdaptFixture f;
    CHECK_THROWS_AS(adapt(f.src, AlphaMatte(23, 24), f.bg, f.patch, 1.0, AdaptMode::BS),
                    std::invalid_argument);
    CHECK_THROWS_AS(adapt(f.src, f.matte, f.bg, f.patch, 10.0, AdaptMode::BS),
                    std::invalid_argument);
    CHECK_THROWS_AS(adapt(f.src, AlphaMatte(24, 24), f.bg, f.patch, 1.0, AdaptMode::BS),
                    std::invalid_argument);
}
