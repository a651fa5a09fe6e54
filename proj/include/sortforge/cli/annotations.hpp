#pragma once

#include "sortforge/imgcore/image.hpp"
#include "sortforge/metrics/metrics.hpp"

#include <string>
#include <vector>

namespace sortforge::cli {

struct LabeledBox {
    imgcore::BoundingBox box;
    std::string label;
};

// Shifts every first-frame box along the belt axis by
// round(frame * v_c * px_per_m / fps) pixels, clips to the frame, and drops
// boxes once they leave it entirely. Returns one list per frame,
// n_frames long. Throws std::invalid_argument on non-positive fps,
// px_per_m, frame dimensions or negative v_c / n_frames.
std::vector<std::vector<LabeledBox>> propagate_boxes(const std::vector<LabeledBox>& first_frame,
                                                     double v_c, double fps, double px_per_m,
                                                     int n_frames, int frame_width,
                                                     int frame_height);

// Mean and population standard deviation of each mask score within one
// category.
struct CategoryStats {
    std::string category;
    std::size_t samples = 0;
    metrics::MaskScores mean;
    metrics::MaskScores stddev;
};

struct AnnotationReport {
    std::vector<CategoryStats> categories;   // sorted by category name
    std::vector<std::string> unmatched_auto; // ids missing a manual partner
    std::vector<std::string> unmatched_manual;

    std::string text() const;
    std::string json() const;
};

// Compares auto-generated masks against hand-labeled ones. Both directories
// hold "<category>__<seq>.png" or "<category>__<seq>_mask.png" mask files
// ("_alpha" matte files are ignored); ids present in only one side are
// listed and excluded. Throws std::runtime_error when a directory cannot be
// read or no id matches at all.
AnnotationReport evaluate_annotations(const std::string& auto_dir,
                                      const std::string& manual_dir);

} // namespace sortforge::cli
