#include "sortforge/coloradapt/coloradapt.hpp"

#include <stdexcept>

namespace sortforge::coloradapt {

void ChannelHistogram::finalize() {
    total = 0;
    for (const std::uint64_t b : bins) total += b;
    double running = 0.0;
    for (int i = 0; i < 256; ++i) {
        running += static_cast<double>(bins[i]);
        cdf[i] = total > 0 ? running / static_cast<double>(total) : 0.0;
    }
}

RgbHistogram histogram(const imgcore::RasterImage& img, const imgcore::BoundingBox& region) {
    if (img.channels() < 3)
        throw std::invalid_argument("histogram: expected a color image");
    if (!region.valid())
        throw std::invalid_argument("histogram: empty region");
    if (region.x_min < 0 || region.y_min < 0 || region.x_max > img.width() ||
        region.y_max > img.height())
        throw std::invalid_argument("histogram: region out of bounds");

    RgbHistogram hist{};
    for (int y = region.y_min; y < region.y_max; ++y)
        for (int x = region.x_min; x < region.x_max; ++x)
            for (int c = 0; c < 3; ++c)
                ++hist[c].bins[img.at(x, y, c)];
    for (ChannelHistogram& ch : hist) ch.finalize();
    return hist;
}

RgbHistogram histogram(const imgcore::RasterImage& img) {
    return histogram(img, imgcore::full_box(img.width(), img.height()));
}

imgcore::RasterImage match_histogram(const imgcore::RasterImage& src,
                                     const RgbHistogram& target_hist,
                                     const imgcore::BoundingBox& region) {
    for (const ChannelHistogram& ch : target_hist)
        if (ch.total == 0)
            throw std::invalid_argument("match_histogram: target histogram is empty");

    const RgbHistogram src_hist = histogram(src, region);

    // lut[c][v] = min{ u : cdf_t(u) >= cdf_s(v) }; both CDFs are
    // non-decreasing so a single forward sweep suffices per channel.
    std::array<std::array<std::uint8_t, 256>, 3> lut{};
    for (int c = 0; c < 3; ++c) {
        int u = 0;
        for (int v = 0; v < 256; ++v) {
            while (u < 255 && target_hist[c].cdf[u] < src_hist[c].cdf[v]) ++u;
            lut[c][v] = static_cast<std::uint8_t>(u);
        }
    }

    imgcore::RasterImage out = src;
    for (int y = region.y_min; y < region.y_max; ++y)
        for (int x = region.x_min; x < region.x_max; ++x)
            for (int c = 0; c < 3; ++c)
                out.at(x, y, c) = lut[c][src.at(x, y, c)];
    return out;
}

} // namespace sortforge::coloradapt
