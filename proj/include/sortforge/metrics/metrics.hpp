#pragma once

#include "sortforge/coloradapt/coloradapt.hpp"
#include "sortforge/imgcore/image.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sortforge::metrics {

// Pixel-level confusion counts between a predicted and a ground-truth mask.
struct MaskEvalCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
};

// Region-quality scores as percentages in [0, 100]; 0/0 ratios score 0.
struct MaskScores {
    double iou = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
};

// Discrete probability distribution over intensity bins (sums to 1).
struct NormalizedHistogram {
    std::vector<double> p;
};

// Normalizes raw channel counts into a probability distribution. Throws
// std::invalid_argument when the histogram holds no pixels.
NormalizedHistogram normalize(const coloradapt::ChannelHistogram& hist);

// Confusion counts plus IoU/precision/recall/F as percentages:
// IoU = TP/(TP+FP+FN), P = TP/(TP+FP), R = TP/(TP+FN), F = 2PR/(P+R).
// Throws std::invalid_argument on dimension mismatch.
std::pair<MaskEvalCounts, MaskScores> mask_eval(const imgcore::BinaryMask& pred,
                                                const imgcore::BinaryMask& gt);

// 1-D earth-mover's distance in bin units: sum_i |CDF_p(i) - CDF_q(i)|.
// Throws std::invalid_argument on bin-count mismatch or distributions that
// are negative or do not sum to 1 within 1e-9.
double emd(const NormalizedHistogram& p, const NormalizedHistogram& q);

// Bhattacharyya distance -ln(sum_i sqrt(p_i * q_i)); +infinity when the
// supports are disjoint. Same validation as emd.
double bhattacharyya(const NormalizedHistogram& p, const NormalizedHistogram& q);

// One adapted composite crop tagged with its pipeline mode and category.
struct SimilaritySample {
    std::string mode;
    std::string category;
    imgcore::RasterImage crop;
};

struct SimilarityCell {
    double mean_emd = 0.0;
    double mean_bd = 0.0;
    std::size_t count = 0;
};

// Mode-by-category table of mean histogram distances to a reference crop.
struct SimilarityReport {
    std::vector<std::string> modes;       // row order
    std::vector<std::string> categories;  // column order
    std::map<std::string, std::map<std::string, SimilarityCell>> cells;

    std::string text() const;  // aligned UTF-8 table
    std::string json() const;  // machine-readable document
};

// Per-channel EMD/BD between each sample crop and the reference, averaged
// over channels and then over the samples of each (mode, category) cell.
// Throws std::invalid_argument on an empty sample set.
SimilarityReport similarity_report(const std::vector<SimilaritySample>& samples,
                                   const imgcore::RasterImage& reference);

} // namespace sortforge::metrics
