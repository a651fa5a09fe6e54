#include "sortforge/extraction/extraction.hpp"

#include "sortforge/imgcore/morphology.hpp"

#include <stdexcept>

namespace sortforge::extraction {

std::size_t Trimap::count(TriLabel label) const {
    std::size_t n = 0;
    for (const TriLabel l : labels_)
        if (l == label) ++n;
    return n;
}

Trimap make_trimap(const imgcore::BinaryMask& approx_mask, int band_radius) {
    if (band_radius < 1)
        throw std::invalid_argument("make_trimap: band radius must be at least 1");
    if (approx_mask.empty())
        throw std::invalid_argument("make_trimap: mask is empty");

    const imgcore::BinaryMask core = imgcore::erode(approx_mask, band_radius);
    if (core.empty())
        throw std::runtime_error("object too thin for band radius");
    const imgcore::BinaryMask halo = imgcore::dilate(approx_mask, band_radius);

    Trimap tri(approx_mask.width(), approx_mask.height());
    for (int y = 0; y < tri.height(); ++y)
        for (int x = 0; x < tri.width(); ++x) {
            if (core.get(x, y))
                tri.set(x, y, TriLabel::FOREGROUND);
            else if (halo.get(x, y))
                tri.set(x, y, TriLabel::UNKNOWN);
            // everything else stays BACKGROUND
        }
    return tri;
}

} // namespace sortforge::extraction
