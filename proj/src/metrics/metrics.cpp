#include "sortforge/metrics/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sortforge::metrics {

namespace {

void validate_distribution(const NormalizedHistogram& h, const char* who) {
    double sum = 0.0;
    for (const double v : h.p) {
        if (v < 0.0)
            throw std::invalid_argument(std::string(who) + ": negative probability");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(who) + ": distribution does not sum to 1");
}

} // namespace

NormalizedHistogram normalize(const coloradapt::ChannelHistogram& hist) {
    if (hist.total == 0)
        throw std::invalid_argument("normalize: histogram holds no pixels");
    NormalizedHistogram out;
    out.p.resize(hist.bins.size());
    for (std::size_t i = 0; i < hist.bins.size(); ++i)
        out.p[i] = static_cast<double>(hist.bins[i]) / static_cast<double>(hist.total);
    return out;
}

std::pair<MaskEvalCounts, MaskScores> mask_eval(const imgcore::BinaryMask& pred,
                                                const imgcore::BinaryMask& gt) {
    if (pred.width() != gt.width() || pred.height() != gt.height())
        throw std::invalid_argument("mask_eval: mask dimensions differ");

    MaskEvalCounts counts;
    for (int y = 0; y < pred.height(); ++y)
        for (int x = 0; x < pred.width(); ++x) {
            const bool p = pred.get(x, y);
            const bool g = gt.get(x, y);
            if (p && g)
                ++counts.tp;
            else if (p)
                ++counts.fp;
            else if (g)
                ++counts.fn;
        }

    const auto ratio = [](std::uint64_t num, std::uint64_t den) {
        return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
    };
    MaskScores scores;
    scores.iou = ratio(counts.tp, counts.tp + counts.fp + counts.fn);
    scores.precision = ratio(counts.tp, counts.tp + counts.fp);
    scores.recall = ratio(counts.tp, counts.tp + counts.fn);
    scores.f_score = (scores.precision + scores.recall) > 0.0
                         ? 2.0 * scores.precision * scores.recall /
                               (scores.precision + scores.recall)
                         : 0.0;
    return {counts, scores};
}

double emd(const NormalizedHistogram& p, const NormalizedHistogram& q) {
    if (p.p.size() != q.p.size())
        throw std::invalid_argument("emd: bin counts differ");
    validate_distribution(p, "emd");
    validate_distribution(q, "emd");
    double cdf_p = 0.0;
    double cdf_q = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < p.p.size(); ++i) {
        cdf_p += p.p[i];
        cdf_q += q.p[i];
        total += std::fabs(cdf_p - cdf_q);
    }
    return total;
}

double bhattacharyya(const NormalizedHistogram& p, const NormalizedHistogram& q) {
    if (p.p.size() != q.p.size())
        throw std::invalid_argument("bhattacharyya: bin counts differ");
    validate_distribution(p, "bhattacharyya");
    validate_distribution(q, "bhattacharyya");
    double coef = 0.0;
    for (std::size_t i = 0; i < p.p.size(); ++i) coef += std::sqrt(p.p[i] * q.p[i]);
    if (coef <= 0.0) return std::numeric_limits<double>::infinity();
    return std::max(0.0, -std::log(coef));
}

} // namespace sortforge::metrics
