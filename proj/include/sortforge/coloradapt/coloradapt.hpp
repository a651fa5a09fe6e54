#pragma once

#include "sortforge/extraction/extraction.hpp"
#include "sortforge/imgcore/image.hpp"

#include <array>
#include <cstdint>

namespace sortforge::coloradapt {

// 256-bin intensity histogram of one channel with its cumulative
// distribution: cdf[i] = sum_{j<=i} bins[j] / total.
struct ChannelHistogram {
    std::array<std::uint64_t, 256> bins{};
    std::uint64_t total = 0;
    std::array<double, 256> cdf{};

    // Recomputes total and cdf from bins.
    void finalize();
};

using RgbHistogram = std::array<ChannelHistogram, 3>;

// Tiling and clipping parameters for contrast-limited adaptive equalization.
struct ClaheSpec {
    int tile_cols = 8;
    int tile_rows = 8;
    double clip_limit = 2.0;  // multiple of the uniform bin height, >= 1
};

enum class AdaptMode { BS, BS_HM, BS_HM_EQ };

// Exact per-channel counts over the region (all three color channels).
// Throws std::invalid_argument when the region is empty or out of bounds.
RgbHistogram histogram(const imgcore::RasterImage& img, const imgcore::BoundingBox& region);
RgbHistogram histogram(const imgcore::RasterImage& img);

// Remaps each channel value v inside the region to min{u : cdf_t(u) >=
// cdf_s(v)} where cdf_s comes from the region itself; pixels outside the
// region pass through unchanged. The mapping is monotone non-decreasing.
// Throws std::invalid_argument when a target histogram is empty.
imgcore::RasterImage match_histogram(const imgcore::RasterImage& src,
                                     const RgbHistogram& target_hist,
                                     const imgcore::BoundingBox& region);

// Contrast-limited adaptive equalization over the region, per channel:
// per-tile histograms are clipped at clip_limit times the uniform bin
// height, the excess is spread evenly, and the per-tile midpoint-CDF
// lookup tables are blended bilinearly between tile centers. A tile whose
// histogram is a single spike keeps its value unchanged, so constant
// regions stay constant. Throws std::invalid_argument when the region
// cannot hold one pixel per tile.
imgcore::RasterImage clahe(const imgcore::RasterImage& img, const ClaheSpec& spec,
                           const imgcore::BoundingBox& region);

// Alpha-composites fg over bg with fg's top-left at `offset`:
// out = alpha*fg + (1-alpha)*bg, rounded half away from zero. Pixels
// outside the placed rectangle equal bg exactly. Throws
// std::invalid_argument when the placement exceeds bg's bounds.
imgcore::RasterImage blend(const imgcore::RasterImage& fg, const imgcore::RasterImage& bg,
                           const extraction::AlphaMatte& alpha, int offset_x, int offset_y);

// Output of the adaptation pipeline: the composite training image, the
// object's bounding box within it, and the object mask/matte re-placed in
// composite coordinates (the annotation that ships with the image).
struct AdaptResult {
    imgcore::RasterImage composite;
    imgcore::BoundingBox box;
    imgcore::BinaryMask mask;
    extraction::AlphaMatte alpha;

    AdaptResult(imgcore::RasterImage composite_, imgcore::BoundingBox box_,
                imgcore::BinaryMask mask_, extraction::AlphaMatte alpha_)
        : composite(std::move(composite_)), box(box_), mask(std::move(mask_)),
          alpha(std::move(alpha_)) {}
};

// Scale-and-recolor pipeline: rescales the captured object by k, composites
// it onto the center of bg, then (per mode) matches the box interior's
// histogram against the target object patch and finally applies adaptive
// equalization inside the box. Errors from the stages propagate.
AdaptResult adapt(const imgcore::RasterImage& src, const extraction::AlphaMatte& matte,
                  const imgcore::RasterImage& bg, const imgcore::RasterImage& target_obj_patch,
                  double k, AdaptMode mode, const ClaheSpec& clahe_spec = {});

} // namespace sortforge::coloradapt
