#include "sortforge/geometry/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sortforge::geometry {

double scale_factor(const ScaleCalibration& cal, bool invert) {
    if (cal.d_s <= 0.0 || cal.d_t <= 0.0)
        throw std::invalid_argument("scale_factor: distances must be positive");
    return invert ? cal.d_s / cal.d_t : cal.d_t / cal.d_s;
}

std::pair<imgcore::RasterImage, imgcore::BinaryMask>
scale_image(const imgcore::RasterImage& img, const imgcore::BinaryMask& mask, double k) {
    if (k <= 0.0) throw std::invalid_argument("scale_image: k must be positive");
    if (img.width() != mask.width() || img.height() != mask.height())
        throw std::invalid_argument("scale_image: image and mask dimensions differ");

    const imgcore::BoundingBox box = imgcore::tight_bounds(mask);
    if (std::lround(box.width() * k) < 1 || std::lround(box.height() * k) < 1)
        throw std::invalid_argument("scale_image: scaled object region smaller than 1x1");
    if (k == 1.0) return {img, mask};

    // Scale about the object-region center; both box edges are integers so
    // the center is an exact multiple of 0.5.
    const double cx = (box.x_min + box.x_max) / 2.0;
    const double cy = (box.y_min + box.y_max) / 2.0;
    const int w = img.width();
    const int h = img.height();
    const int ch = img.channels();

    imgcore::RasterImage out_img(w, h, ch);
    imgcore::BinaryMask out_mask(w, h);
    for (int y = 0; y < h; ++y) {
        const double sy = cy + (y + 0.5 - cy) / k;
        for (int x = 0; x < w; ++x) {
            const double sx = cx + (x + 0.5 - cx) / k;

            // Nearest-neighbour mask lookup; outside the canvas stays unset.
            const int mx = static_cast<int>(std::floor(sx));
            const int my = static_cast<int>(std::floor(sy));
            if (mx >= 0 && mx < w && my >= 0 && my < h)
                out_mask.set(x, y, mask.get(mx, my));

            // Bilinear image lookup between pixel centers, clamped at edges.
            const double gx = std::clamp(sx - 0.5, 0.0, static_cast<double>(w - 1));
            const double gy = std::clamp(sy - 0.5, 0.0, static_cast<double>(h - 1));
            const int x0 = std::min(static_cast<int>(gx), w - 1);
            const int y0 = std::min(static_cast<int>(gy), h - 1);
            const int x1 = std::min(x0 + 1, w - 1);
            const int y1 = std::min(y0 + 1, h - 1);
            const double fx = gx - x0;
            const double fy = gy - y0;
            for (int c = 0; c < ch; ++c) {
                const double v = (1.0 - fx) * (1.0 - fy) * img.at(x0, y0, c) +
                                 fx * (1.0 - fy) * img.at(x1, y0, c) +
                                 (1.0 - fx) * fy * img.at(x0, y1, c) +
                                 fx * fy * img.at(x1, y1, c);
                out_img.at(x, y, c) = static_cast<std::uint8_t>(
                    std::clamp<long>(std::lround(v), 0, 255));
            }
        }
    }
    return {std::move(out_img), std::move(out_mask)};
}

} // namespace sortforge::geometry
