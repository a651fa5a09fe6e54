#include "sortforge/cli/annotations.hpp"

#include "sortforge/imgcore/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sortforge::cli {

std::vector<std::vector<LabeledBox>> propagate_boxes(const std::vector<LabeledBox>& first_frame,
                                                     double v_c, double fps, double px_per_m,
                                                     int n_frames, int frame_width,
                                                     int frame_height) {
    if (v_c < 0.0) throw std::invalid_argument("propagate_boxes: v_c must be non-negative");
    if (fps <= 0.0 || px_per_m <= 0.0)
        throw std::invalid_argument("propagate_boxes: fps and px_per_m must be positive");
    if (n_frames < 0) throw std::invalid_argument("propagate_boxes: n_frames must be >= 0");
    if (frame_width < 1 || frame_height < 1)
        throw std::invalid_argument("propagate_boxes: frame dimensions must be positive");

    std::vector<std::vector<LabeledBox>> frames(static_cast<std::size_t>(n_frames));
    for (int t = 0; t < n_frames; ++t) {
        const int shift = static_cast<int>(std::lround(t * v_c * px_per_m / fps));
        for (const LabeledBox& lb : first_frame) {
            imgcore::BoundingBox box = lb.box;
            box.x_min += shift;
            box.x_max += shift;
            // Clip to the frame; a box with nothing left inside is dropped.
            box.x_min = std::max(box.x_min, 0);
            box.y_min = std::max(box.y_min, 0);
            box.x_max = std::min(box.x_max, frame_width);
            box.y_max = std::min(box.y_max, frame_height);
            if (box.valid()) frames[t].push_back({box, lb.label});
        }
    }
    return frames;
}

namespace {

// Scans a directory for .png mask files; id = file stem with any trailing
// "_mask" stripped so extraction outputs pair with manual labels named the
// same way. Matte files ("_alpha") are not masks and are skipped. When a
// directory holds both "<id>.png" and "<id>_mask.png" the explicit mask
// file wins. Category = the part of the id before "__" (whole id when
// absent).
std::map<std::string, std::filesystem::path> scan_masks(const std::string& dir) {
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("evaluate_annotations: not a directory: " + dir);
    std::map<std::string, std::filesystem::path> files;
    std::map<std::string, bool> explicit_mask;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
        std::string id = entry.path().stem().string();
        if (id.ends_with("_alpha")) continue;
        const bool suffixed = id.ends_with("_mask");
        if (suffixed) id.resize(id.size() - 5);
        if (files.count(id) && explicit_mask[id] && !suffixed) continue;
        files[id] = entry.path();
        explicit_mask[id] = suffixed;
    }
    return files;
}

std::string category_of(const std::string& id) {
    const std::size_t sep = id.find("__");
    return sep == std::string::npos ? id : id.substr(0, sep);
}

struct Accumulator {
    std::vector<metrics::MaskScores> scores;
};

metrics::MaskScores mean_of(const std::vector<metrics::MaskScores>& scores) {
    metrics::MaskScores m;
    for (const metrics::MaskScores& s : scores) {
        m.iou += s.iou;
        m.precision += s.precision;
        m.recall += s.recall;
        m.f_score += s.f_score;
    }
    const double n = static_cast<double>(scores.size());
    m.iou /= n;
    m.precision /= n;
    m.recall /= n;
    m.f_score /= n;
    return m;
}

metrics::MaskScores stddev_of(const std::vector<metrics::MaskScores>& scores,
                              const metrics::MaskScores& mean) {
    metrics::MaskScores v;
    for (const metrics::MaskScores& s : scores) {
        v.iou += (s.iou - mean.iou) * (s.iou - mean.iou);
        v.precision += (s.precision - mean.precision) * (s.precision - mean.precision);
        v.recall += (s.recall - mean.recall) * (s.recall - mean.recall);
        v.f_score += (s.f_score - mean.f_score) * (s.f_score - mean.f_score);
    }
    const double n = static_cast<double>(scores.size());
    v.iou = std::sqrt(v.iou / n);
    v.precision = std::sqrt(v.precision / n);
    v.recall = std::sqrt(v.recall / n);
    v.f_score = std::sqrt(v.f_score / n);
    return v;
}

} // namespace

AnnotationReport evaluate_annotations(const std::string& auto_dir,
                                      const std::string& manual_dir) {
    const auto auto_files = scan_masks(auto_dir);
    const auto manual_files = scan_masks(manual_dir);

    AnnotationReport report;
    std::map<std::string, Accumulator> per_category;
    for (const auto& [id, auto_path] : auto_files) {
        const auto it = manual_files.find(id);
        if (it == manual_files.end()) {
            report.unmatched_auto.push_back(id);
            continue;
        }
        const imgcore::BinaryMask pred = imgcore::read_mask(auto_path.string());
        const imgcore::BinaryMask gt = imgcore::read_mask(it->second.string());
        per_category[category_of(id)].scores.push_back(metrics::mask_eval(pred, gt).second);
    }
    for (const auto& [id, path] : manual_files)
        if (auto_files.find(id) == auto_files.end()) report.unmatched_manual.push_back(id);

    if (per_category.empty())
        throw std::runtime_error("evaluate_annotations: no matching sample ids");

    for (const auto& [category, acc] : per_category) {
        CategoryStats stats;
        stats.category = category;
        stats.samples = acc.scores.size();
        stats.mean = mean_of(acc.scores);
        stats.stddev = stddev_of(acc.scores, stats.mean);
        report.categories.push_back(std::move(stats));
    }
    return report;
}

std::string AnnotationReport::text() const {
    std::ostringstream os;
    os << std::left << std::setw(18) << "category" << std::right << std::setw(4) << "n";
    for (const char* metric : {"IoU", "P", "R", "F"})
        os << std::setw(18) << (std::string(metric) + " mean+-std");
    os << "\n" << std::fixed << std::setprecision(2);
    for (const CategoryStats& c : categories) {
        os << std::left << std::setw(18) << c.category << std::right << std::setw(4)
           << c.samples;
        const double means[] = {c.mean.iou, c.mean.precision, c.mean.recall, c.mean.f_score};
        const double stds[] = {c.stddev.iou, c.stddev.precision, c.stddev.recall,
                               c.stddev.f_score};
        for (int i = 0; i < 4; ++i) {
            std::ostringstream cell;
            cell << std::fixed << std::setprecision(2) << means[i] << " +- " << stds[i];
            os << std::setw(18) << cell.str();
        }
        os << "\n";
    }
    if (!unmatched_auto.empty() || !unmatched_manual.empty()) {
        os << "excluded (no partner):";
        for (const std::string& id : unmatched_auto) os << " " << id << "(auto)";
        for (const std::string& id : unmatched_manual) os << " " << id << "(manual)";
        os << "\n";
    }
    return os.str();
}

std::string AnnotationReport::json() const {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["categories"] = nlohmann::json::array();
    for (const CategoryStats& c : categories) {
        nlohmann::json entry;
        entry["category"] = c.category;
        entry["samples"] = c.samples;
        entry["mean"] = {{"iou", c.mean.iou},
                         {"precision", c.mean.precision},
                         {"recall", c.mean.recall},
                         {"f_score", c.mean.f_score}};
        entry["stddev"] = {{"iou", c.stddev.iou},
                           {"precision", c.stddev.precision},
                           {"recall", c.stddev.recall},
                           {"f_score", c.stddev.f_score}};
        doc["categories"].push_back(entry);
    }
    doc["unmatched_auto"] = unmatched_auto;
    doc["unmatched_manual"] = unmatched_manual;
    return doc.dump(2) + "\n";
}

} // namespace sortforge::cli
