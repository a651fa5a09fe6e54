#include "sortforge/metrics/metrics.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sortforge::metrics {

namespace {

// Canonical table order for the known pipeline rows; anything else follows
// in first-seen order.
int mode_rank(const std::string& mode) {
    if (mode == "Original") return 0;
    if (mode == "BS") return 1;
    if (mode == "BS+HM") return 2;
    if (mode == "BS+HM+EQ") return 3;
    return 4;
}

std::string render_value(double v) {
    if (std::isinf(v)) return "inf";
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << v;
    return os.str();
}

} // namespace

SimilarityReport similarity_report(const std::vector<SimilaritySample>& samples,
                                   const imgcore::RasterImage& reference) {
    if (samples.empty())
        throw std::invalid_argument("similarity_report: empty sample set");

    const coloradapt::RgbHistogram ref_hist = coloradapt::histogram(reference);
    std::array<NormalizedHistogram, 3> ref;
    for (int c = 0; c < 3; ++c) ref[c] = normalize(ref_hist[c]);

    SimilarityReport report;
    std::map<std::string, std::map<std::string, std::pair<double, double>>> sums;
    for (const SimilaritySample& s : samples) {
        const coloradapt::RgbHistogram crop_hist = coloradapt::histogram(s.crop);
        double mean_emd = 0.0;
        double mean_bd = 0.0;
        for (int c = 0; c < 3; ++c) {
            const NormalizedHistogram h = normalize(crop_hist[c]);
            mean_emd += emd(h, ref[c]);
            mean_bd += bhattacharyya(h, ref[c]);
        }
        mean_emd /= 3.0;
        mean_bd /= 3.0;

        if (std::find(report.modes.begin(), report.modes.end(), s.mode) == report.modes.end())
            report.modes.push_back(s.mode);
        if (std::find(report.categories.begin(), report.categories.end(), s.category) ==
            report.categories.end())
            report.categories.push_back(s.category);
        auto& [emd_sum, bd_sum] = sums[s.mode][s.category];
        emd_sum += mean_emd;
        bd_sum += mean_bd;
        ++report.cells[s.mode][s.category].count;
    }

    std::stable_sort(report.modes.begin(), report.modes.end(),
                     [](const std::string& a, const std::string& b) {
                         return mode_rank(a) < mode_rank(b);
                     });
    for (auto& [mode, row] : report.cells)
        for (auto& [category, cell] : row) {
            const auto& [emd_sum, bd_sum] = sums[mode][category];
            cell.mean_emd = emd_sum / static_cast<double>(cell.count);
            cell.mean_bd = bd_sum / static_cast<double>(cell.count);
        }
    return report;
}

std::string SimilarityReport::text() const {
    std::size_t label_w = 4;  // "mode"
    for (const std::string& m : modes) label_w = std::max(label_w, m.size());

    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(label_w) + 2) << "mode";
    for (const std::string& cat : categories)
        os << std::setw(24) << (cat + " (EMD / BD)");
    os << "\n";
    for (const std::string& mode : modes) {
        os << std::left << std::setw(static_cast<int>(label_w) + 2) << mode;
        for (const std::string& cat : categories) {
            const auto row_it = cells.find(mode);
            std::string body = "-";
            if (row_it != cells.end()) {
                const auto cell_it = row_it->second.find(cat);
                if (cell_it != row_it->second.end())
                    body = render_value(cell_it->second.mean_emd) + " / " +
                           render_value(cell_it->second.mean_bd);
            }
            os << std::setw(24) << body;
        }
        os << "\n";
    }
    return os.str();
}

std::string SimilarityReport::json() const {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["modes"] = modes;
    doc["categories"] = categories;
    nlohmann::json table = nlohmann::json::object();
    for (const auto& [mode, row] : cells) {
        nlohmann::json row_doc = nlohmann::json::object();
        for (const auto& [category, cell] : row) {
            nlohmann::json cell_doc;
            // Infinite distances serialize as the string "inf" since JSON
            // has no infinity literal.
            if (std::isinf(cell.mean_emd))
                cell_doc["mean_emd"] = "inf";
            else
                cell_doc["mean_emd"] = cell.mean_emd;
            if (std::isinf(cell.mean_bd))
                cell_doc["mean_bd"] = "inf";
            else
                cell_doc["mean_bd"] = cell.mean_bd;
            cell_doc["count"] = cell.count;
            row_doc[category] = cell_doc;
        }
        table[mode] = row_doc;
    }
    doc["table"] = table;
    return doc.dump(2) + "\n";
}

} // namespace sortforge::metrics
