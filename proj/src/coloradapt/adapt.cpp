#include "sortforge/coloradapt/coloradapt.hpp"

#include "sortforge/geometry/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sortforge::coloradapt {

imgcore::RasterImage blend(const imgcore::RasterImage& fg, const imgcore::RasterImage& bg,
                           const extraction::AlphaMatte& alpha, int offset_x, int offset_y) {
    if (fg.width() != alpha.width() || fg.height() != alpha.height())
        throw std::invalid_argument("blend: foreground and matte dimensions differ");
    if (fg.channels() != bg.channels())
        throw std::invalid_argument("blend: channel counts differ");
    if (offset_x < 0 || offset_y < 0 || offset_x + fg.width() > bg.width() ||
        offset_y + fg.height() > bg.height())
        throw std::invalid_argument("blend: placement out of bounds");

    imgcore::RasterImage out = bg;
    for (int y = 0; y < fg.height(); ++y)
        for (int x = 0; x < fg.width(); ++x) {
            const double a = alpha.at(x, y);
            for (int c = 0; c < fg.channels(); ++c) {
                const double v = a * fg.at(x, y, c) +
                                 (1.0 - a) * bg.at(offset_x + x, offset_y + y, c);
                out.at(offset_x + x, offset_y + y, c) =
                    static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
            }
        }
    return out;
}

namespace {

// Rescales the matte with the same object-centered map scale_image uses,
// sampling bilinearly so soft edges survive the resize.
extraction::AlphaMatte scale_matte(const extraction::AlphaMatte& matte,
                                   const imgcore::BoundingBox& box, double k) {
    const int w = matte.width();
    const int h = matte.height();
    extraction::AlphaMatte out(w, h);
    if (k == 1.0) return matte;

    const double cx = (box.x_min + box.x_max) / 2.0;
    const double cy = (box.y_min + box.y_max) / 2.0;
    for (int y = 0; y < h; ++y) {
        const double sy = cy + (y + 0.5 - cy) / k;
        for (int x = 0; x < w; ++x) {
            const double sx = cx + (x + 0.5 - cx) / k;
            const double gx = std::clamp(sx - 0.5, 0.0, static_cast<double>(w - 1));
            const double gy = std::clamp(sy - 0.5, 0.0, static_cast<double>(h - 1));
            const int x0 = std::min(static_cast<int>(gx), w - 1);
            const int y0 = std::min(static_cast<int>(gy), h - 1);
            const int x1 = std::min(x0 + 1, w - 1);
            const int y1 = std::min(y0 + 1, h - 1);
            const double fx = gx - x0;
            const double fy = gy - y0;
            out.set(x, y, (1.0 - fx) * (1.0 - fy) * matte.at(x0, y0) +
                              fx * (1.0 - fy) * matte.at(x1, y0) +
                              (1.0 - fx) * fy * matte.at(x0, y1) +
                              fx * fy * matte.at(x1, y1));
        }
    }
    return out;
}

} // namespace

AdaptResult adapt(const imgcore::RasterImage& src, const extraction::AlphaMatte& matte,
                  const imgcore::RasterImage& bg, const imgcore::RasterImage& target_obj_patch,
                  double k, AdaptMode mode, const ClaheSpec& clahe_spec) {
    if (src.width() != matte.width() || src.height() != matte.height())
        throw std::invalid_argument("adapt: image and matte dimensions differ");
    if (src.channels() != bg.channels())
        throw std::invalid_argument("adapt: image and background channel counts differ");

    // Binary support of the matte defines the object region driving the
    // scale map and the final annotation box.
    imgcore::BinaryMask support(matte.width(), matte.height());
    for (int y = 0; y < matte.height(); ++y)
        for (int x = 0; x < matte.width(); ++x)
            support.set(x, y, matte.at(x, y) > 0.5);

    const imgcore::BoundingBox pre_box = imgcore::tight_bounds(support);
    if (std::lround(pre_box.width() * k) > bg.width() ||
        std::lround(pre_box.height() * k) > bg.height())
        throw std::invalid_argument("adapt: scaled object larger than background");
    auto [scaled_img, scaled_mask] = geometry::scale_image(src, support, k);
    const extraction::AlphaMatte scaled_alpha = scale_matte(matte, pre_box, k);

    const imgcore::BoundingBox obj = imgcore::tight_bounds(scaled_mask);
    if (obj.width() > bg.width() || obj.height() > bg.height())
        throw std::invalid_argument("adapt: scaled object larger than background");
    const int dst_x = (bg.width() - obj.width()) / 2;
    const int dst_y = (bg.height() - obj.height()) / 2;

    // Crop the object box out of the scaled capture for compositing.
    imgcore::RasterImage patch(obj.width(), obj.height(), src.channels());
    extraction::AlphaMatte patch_alpha(obj.width(), obj.height());
    for (int y = 0; y < obj.height(); ++y)
        for (int x = 0; x < obj.width(); ++x) {
            for (int c = 0; c < src.channels(); ++c)
                patch.at(x, y, c) = scaled_img.at(obj.x_min + x, obj.y_min + y, c);
            patch_alpha.set(x, y, scaled_alpha.at(obj.x_min + x, obj.y_min + y));
        }

    imgcore::RasterImage composite = blend(patch, bg, patch_alpha, dst_x, dst_y);
    const imgcore::BoundingBox box{dst_x, dst_y, dst_x + obj.width(), dst_y + obj.height()};

    if (mode == AdaptMode::BS_HM || mode == AdaptMode::BS_HM_EQ) {
        const RgbHistogram target = histogram(target_obj_patch);
        composite = match_histogram(composite, target, box);
    }
    if (mode == AdaptMode::BS_HM_EQ) composite = clahe(composite, clahe_spec, box);

    // Re-place mask and matte in composite coordinates for the annotation.
    imgcore::BinaryMask placed_mask(bg.width(), bg.height());
    extraction::AlphaMatte placed_alpha(bg.width(), bg.height());
    for (int y = 0; y < obj.height(); ++y)
        for (int x = 0; x < obj.width(); ++x) {
            placed_mask.set(dst_x + x, dst_y + y, scaled_mask.get(obj.x_min + x, obj.y_min + y));
            placed_alpha.set(dst_x + x, dst_y + y, patch_alpha.at(x, y));
        }
    return AdaptResult(std::move(composite), box, std::move(placed_mask),
                       std::move(placed_alpha));
}

} // namespace sortforge::coloradapt
