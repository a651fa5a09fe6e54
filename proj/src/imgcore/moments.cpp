#include "sortforge/imgcore/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace sortforge::imgcore {

ImageMoments moments(const BinaryMask& mask) {
    std::int64_t n = 0, sx = 0, sy = 0;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.get(x, y)) continue;
            ++n;
            sx += x;
            sy += y;
        }
    }
    if (n == 0) throw std::invalid_argument("empty silhouette");

    ImageMoments m;
    m.area = n;
    m.centroid_x = static_cast<double>(sx) / n;
    m.centroid_y = static_cast<double>(sy) / n;

    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.get(x, y)) continue;
            const double dx = x - m.centroid_x;
            const double dy = y - m.centroid_y;
            m.mu20 += dx * dx;
            m.mu02 += dy * dy;
            m.mu11 += dx * dy;
        }
    }

    // Larger eigenvalue of [[mu20, mu11], [mu11, mu02]].
    const double tr = m.mu20 + m.mu02;
    const double disc = std::sqrt((m.mu20 - m.mu02) * (m.mu20 - m.mu02) + 4.0 * m.mu11 * m.mu11);
    const double lmax = 0.5 * (tr + disc);

    double vx, vy;
    const double eps = 1e-12 * std::max(1.0, tr);
    if (disc <= eps) {
        // Isotropic second moments: direction is arbitrary.
        vx = 1.0;
        vy = 0.0;
        m.isotropic = true;
    } else if (std::abs(m.mu11) <= eps) {
        if (m.mu20 >= m.mu02) {
            vx = 1.0;
            vy = 0.0;
        } else {
            vx = 0.0;
            vy = 1.0;
        }
    } else {
        vx = m.mu11;
        vy = lmax - m.mu20;
        const double norm = std::hypot(vx, vy);
        vx /= norm;
        vy /= norm;
    }

    // Canonical sign: positive x; if x is zero, positive y.
    if (vx < 0.0 || (vx == 0.0 && vy < 0.0)) {
        vx = -vx;
        vy = -vy;
    }
    m.axis_x = vx;
    m.axis_y = vy;
    return m;
}

} // namespace sortforge::imgcore
