#include "sortforge/extraction/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sortforge::extraction {

namespace {

struct Hsv {
    double h;  // degrees in [0, 360)
    double s;  // [0, 1]
    double v;  // [0, 1]
};

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = r8 / 255.0;
    const double g = g8 / 255.0;
    const double b = b8 / 255.0;
    const double hi = std::max({r, g, b});
    const double lo = std::min({r, g, b});
    const double delta = hi - lo;

    Hsv out{0.0, 0.0, hi};
    if (hi > 0.0) out.s = delta / hi;
    if (delta > 0.0) {
        if (hi == r)
            out.h = 60.0 * std::fmod((g - b) / delta + 6.0, 6.0);
        else if (hi == g)
            out.h = 60.0 * ((b - r) / delta + 2.0);
        else
            out.h = 60.0 * ((r - g) / delta + 4.0);
    }
    return out;
}

double hue_distance(double a, double b) {
    const double d = std::fabs(std::fmod(a - b + 540.0, 360.0) - 180.0);
    return d;
}

} // namespace

imgcore::BinaryMask chroma_key(const imgcore::RasterImage& img, const ChromaKeySpec& spec) {
    if (img.channels() != 3)
        throw std::invalid_argument("chroma_key: expected a 3-channel image");
    if (spec.hue_tolerance <= 0.0)
        throw std::invalid_argument("chroma_key: hue tolerance must be positive");
    if (spec.min_saturation < 0.0 || spec.min_saturation > 1.0 ||
        spec.min_value < 0.0 || spec.min_value > 1.0)
        throw std::invalid_argument("chroma_key: thresholds must lie in [0,1]");

    imgcore::BinaryMask mask(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const Hsv hsv = rgb_to_hsv(img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2));
            const bool keyed = hue_distance(hsv.h, spec.key_hue) <= spec.hue_tolerance &&
                               hsv.s >= spec.min_saturation && hsv.v >= spec.min_value;
            mask.set(x, y, !keyed);
        }
    return mask;
}

} // namespace sortforge::extraction
