#include "sortforge/coloradapt/coloradapt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sortforge::coloradapt {

namespace {

// Midpoint-CDF lookup table of a clipped tile histogram. A single-spike
// histogram returns the identity so a flat tile keeps its value.
std::array<std::uint8_t, 256> tile_lut(std::array<std::uint64_t, 256> hist,
                                       std::uint64_t area, double clip_limit) {
    std::array<std::uint8_t, 256> lut{};

    int populated = 0;
    for (int i = 0; i < 256; ++i)
        if (hist[i] > 0) ++populated;
    if (populated <= 1) {
        for (int i = 0; i < 256; ++i) lut[i] = static_cast<std::uint8_t>(i);
        return lut;
    }

    const double raw_cap = clip_limit * static_cast<double>(area) / 256.0;
    const std::uint64_t cap =
        raw_cap >= static_cast<double>(area)
            ? area
            : std::max<std::uint64_t>(1, static_cast<std::uint64_t>(raw_cap));
    std::uint64_t excess = 0;
    for (int i = 0; i < 256; ++i)
        if (hist[i] > cap) {
            excess += hist[i] - cap;
            hist[i] = cap;
        }
    const std::uint64_t share = excess / 256;
    const int remainder = static_cast<int>(excess % 256);
    for (int i = 0; i < 256; ++i)
        hist[i] += share + (i < remainder ? 1 : 0);

    std::uint64_t cum = 0;
    double prev_cdf = 0.0;
    for (int i = 0; i < 256; ++i) {
        cum += hist[i];
        const double cdf = static_cast<double>(cum) / static_cast<double>(area);
        lut[i] = static_cast<std::uint8_t>(
            std::clamp<long>(std::lround(255.0 * (prev_cdf + cdf) / 2.0), 0, 255));
        prev_cdf = cdf;
    }
    return lut;
}

} // namespace

imgcore::RasterImage clahe(const imgcore::RasterImage& img, const ClaheSpec& spec,
                           const imgcore::BoundingBox& region) {
    if (img.channels() < 3)
        throw std::invalid_argument("clahe: expected a color image");
    if (spec.tile_cols < 1 || spec.tile_rows < 1)
        throw std::invalid_argument("clahe: tile grid must be at least 1x1");
    if (spec.clip_limit < 1.0)
        throw std::invalid_argument("clahe: clip limit must be at least 1");
    if (!region.valid() || region.x_min < 0 || region.y_min < 0 ||
        region.x_max > img.width() || region.y_max > img.height())
        throw std::invalid_argument("clahe: region out of bounds");
    if (region.width() < spec.tile_cols || region.height() < spec.tile_rows)
        throw std::invalid_argument("clahe: region smaller than tile grid");

    const int cols = spec.tile_cols;
    const int rows = spec.tile_rows;
    const int rw = region.width();
    const int rh = region.height();

    // Tile boundaries relative to the region, plus tile centers in pixel
    // coordinates for the interpolation weights.
    std::vector<int> bx(cols + 1), by(rows + 1);
    for (int i = 0; i <= cols; ++i) bx[i] = region.x_min + static_cast<int>(static_cast<long long>(i) * rw / cols);
    for (int j = 0; j <= rows; ++j) by[j] = region.y_min + static_cast<int>(static_cast<long long>(j) * rh / rows);
    std::vector<double> cx(cols), cy(rows);
    for (int i = 0; i < cols; ++i) cx[i] = (bx[i] + bx[i + 1]) / 2.0;
    for (int j = 0; j < rows; ++j) cy[j] = (by[j] + by[j + 1]) / 2.0;

    // Per-tile, per-channel lookup tables.
    std::vector<std::array<std::array<std::uint8_t, 256>, 3>> luts(
        static_cast<std::size_t>(cols) * rows);
    for (int tj = 0; tj < rows; ++tj)
        for (int ti = 0; ti < cols; ++ti) {
            const std::uint64_t area =
                static_cast<std::uint64_t>(bx[ti + 1] - bx[ti]) * (by[tj + 1] - by[tj]);
            for (int c = 0; c < 3; ++c) {
                std::array<std::uint64_t, 256> hist{};
                for (int y = by[tj]; y < by[tj + 1]; ++y)
                    for (int x = bx[ti]; x < bx[ti + 1]; ++x)
                        ++hist[img.at(x, y, c)];
                luts[static_cast<std::size_t>(tj) * cols + ti][c] =
                    tile_lut(hist, area, spec.clip_limit);
            }
        }

    imgcore::RasterImage out = img;
    for (int y = region.y_min; y < region.y_max; ++y) {
        const double py = y + 0.5;
        int j0 = 0;
        while (j0 + 1 < rows && cy[j0 + 1] <= py) ++j0;
        const int j1 = std::min(j0 + 1, rows - 1);
        double wy = 0.0;
        if (j1 != j0 && py >= cy[j0]) wy = (py - cy[j0]) / (cy[j1] - cy[j0]);

        for (int x = region.x_min; x < region.x_max; ++x) {
            const double px = x + 0.5;
            int i0 = 0;
            while (i0 + 1 < cols && cx[i0 + 1] <= px) ++i0;
            const int i1 = std::min(i0 + 1, cols - 1);
            double wx = 0.0;
            if (i1 != i0 && px >= cx[i0]) wx = (px - cx[i0]) / (cx[i1] - cx[i0]);

            const auto& lut00 = luts[static_cast<std::size_t>(j0) * cols + i0];
            const auto& lut10 = luts[static_cast<std::size_t>(j0) * cols + i1];
            const auto& lut01 = luts[static_cast<std::size_t>(j1) * cols + i0];
            const auto& lut11 = luts[static_cast<std::size_t>(j1) * cols + i1];
            for (int c = 0; c < 3; ++c) {
                const std::uint8_t v = img.at(x, y, c);
                const double top = (1.0 - wx) * lut00[c][v] + wx * lut10[c][v];
                const double bot = (1.0 - wx) * lut01[c][v] + wx * lut11[c][v];
                const double blended = (1.0 - wy) * top + wy * bot;
                out.at(x, y, c) = static_cast<std::uint8_t>(
                    std::clamp<long>(std::lround(blended), 0, 255));
            }
        }
    }
    return out;
}

} // namespace sortforge::coloradapt
