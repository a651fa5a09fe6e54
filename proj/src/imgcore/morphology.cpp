#include "sortforge/imgcore/morphology.hpp"

#include <stdexcept>
#include <vector>

namespace sortforge::imgcore {

namespace {

// Separable square-window pass: horizontal then vertical. `outside` is the
// value assumed beyond the border; `hit` is the value that dominates the
// window (1 for dilation-OR, 0 for erosion-AND).
BinaryMask window_pass(const BinaryMask& in, int radius, bool hit, bool outside) {
    const int w = in.width(), h = in.height();
    BinaryMask mid(w, h), out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool v = outside;
            bool found = false;
            for (int dx = -radius; dx <= radius && !found; ++dx) {
                const int xx = x + dx;
                const bool sample = (xx < 0 || xx >= w) ? outside : in.get(xx, y);
                if (sample == hit) {
                    v = hit;
                    found = true;
                }
            }
            if (!found) v = !hit;
            mid.set(x, y, v);
        }
    }
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) {
            bool v = outside;
            bool found = false;
            for (int dy = -radius; dy <= radius && !found; ++dy) {
                const int yy = y + dy;
                const bool sample = (yy < 0 || yy >= h) ? outside : mid.get(x, yy);
                if (sample == hit) {
                    v = hit;
                    found = true;
                }
            }
            if (!found) v = !hit;
            out.set(x, y, v);
        }
    }
    return out;
}

} // namespace

BinaryMask dilate(const BinaryMask& mask, int radius) {
    if (radius < 0) throw std::invalid_argument("dilate: radius must be >= 0");
    if (radius == 0) return mask;
    return window_pass(mask, radius, true, false);
}

BinaryMask erode(const BinaryMask& mask, int radius) {
    if (radius < 0) throw std::invalid_argument("erode: radius must be >= 0");
    if (radius == 0) return mask;
    return window_pass(mask, radius, false, true);
}

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
    if (!a.same_size(b))
        throw std::invalid_argument("mask_and: dimension mismatch");
    BinaryMask out(a.width(), a.height());
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x)
            out.set(x, y, a.get(x, y) && b.get(x, y));
    return out;
}

BinaryMask mask_complement(const BinaryMask& mask) {
    BinaryMask out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            out.set(x, y, !mask.get(x, y));
    return out;
}

BinaryMask largest_component(const BinaryMask& mask) {
    const int w = mask.width(), h = mask.height();
    std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
    auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };

    int best_label = -1;
    std::size_t best_size = 0;
    int next = 0;
    std::vector<std::pair<int, int>> stack;
    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            if (!mask.get(sx, sy) || label[idx(sx, sy)] >= 0) continue;
            const int cur = next++;
            std::size_t size = 0;
            stack.push_back({sx, sy});
            label[idx(sx, sy)] = cur;
            while (!stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                ++size;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = x + dx, ny = y + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        if (!mask.get(nx, ny) || label[idx(nx, ny)] >= 0) continue;
                        label[idx(nx, ny)] = cur;
                        stack.push_back({nx, ny});
                    }
                }
            }
            if (size > best_size) {
                best_size = size;
                best_label = cur;
            }
        }
    }

    BinaryMask out(w, h);
    if (best_label < 0) return out;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.set(x, y, label[idx(x, y)] == best_label);
    return out;
}

} // namespace sortforge::imgcore
