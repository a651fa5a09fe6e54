#include "sortforge/extraction/extraction.hpp"

#include "sortforge/imgcore/morphology.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace sortforge::extraction {

namespace {

// Assembles the local-window matting Laplacian restricted to the UNKNOWN
// pixels. For each fully interior window w_k the pairwise weight is
//   delta_ij - (1 + (I_i - mu_k)^T (Sigma_k + eps/m I)^-1 (I_j - mu_k)) / m
// where mu_k / Sigma_k are the window color mean and covariance. Rows and
// columns of constrained pixels fold into the right-hand side.
void assemble_reduced_system(const imgcore::RasterImage& img, const Trimap& trimap,
                             const std::vector<int>& unknown_index,
                             const MatteParams& params,
                             Eigen::SparseMatrix<double>& lhs, Eigen::VectorXd& rhs) {
    const int w = img.width();
    const int h = img.height();
    const int r = params.window_radius;
    const int side = 2 * r + 1;
    const int m = side * side;
    const double inv_m = 1.0 / m;

    std::vector<Eigen::Triplet<double>> triplets;
    std::vector<int> window_pix(m);
    std::vector<Eigen::Vector3d> window_col(m);

    for (int ky = r; ky < h - r; ++ky)
        for (int kx = r; kx < w - r; ++kx) {
            // Skip windows made up entirely of constrained pixels: their
            // weights touch no unknown and cannot reach lhs or rhs.
            bool any_unknown = false;
            int n = 0;
            Eigen::Vector3d mean = Eigen::Vector3d::Zero();
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) {
                    const int px = kx + dx;
                    const int py = ky + dy;
                    window_pix[n] = py * w + px;
                    window_col[n] = Eigen::Vector3d(img.at(px, py, 0), img.at(px, py, 1),
                                                    img.at(px, py, 2)) /
                                    255.0;
                    mean += window_col[n];
                    if (unknown_index[window_pix[n]] >= 0) any_unknown = true;
                    ++n;
                }
            if (!any_unknown) continue;
            mean *= inv_m;

            Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
            for (int i = 0; i < m; ++i) {
                const Eigen::Vector3d d = window_col[i] - mean;
                cov += d * d.transpose();
            }
            cov *= inv_m;
            const Eigen::Matrix3d reg =
                (cov + (params.epsilon * inv_m) * Eigen::Matrix3d::Identity()).inverse();

            for (int i = 0; i < m; ++i) {
                const int ui = unknown_index[window_pix[i]];
                if (ui < 0) continue;
                const Eigen::Vector3d di = reg * (window_col[i] - mean);
                for (int j = 0; j < m; ++j) {
                    const double value = (i == j ? 1.0 : 0.0) -
                                         inv_m * (1.0 + di.dot(window_col[j] - mean));
                    const int uj = unknown_index[window_pix[j]];
                    if (uj >= 0) {
                        triplets.emplace_back(ui, uj, value);
                    } else {
                        const int pj = window_pix[j];
                        if (trimap.at(pj % w, pj / w) == TriLabel::FOREGROUND)
                            rhs[ui] -= value;  // alpha = 1 on foreground
                    }
                }
            }
        }
    lhs.setFromTriplets(triplets.begin(), triplets.end());
}

} // namespace

AlphaMatte matte(const imgcore::RasterImage& img, const Trimap& trimap,
                 const MatteParams& params) {
    if (img.width() != trimap.width() || img.height() != trimap.height())
        throw std::invalid_argument("matte: image and trimap dimensions differ");
    if (img.channels() != 3)
        throw std::invalid_argument("matte: expected a 3-channel image");
    if (trimap.count(TriLabel::FOREGROUND) == 0 || trimap.count(TriLabel::BACKGROUND) == 0)
        throw std::invalid_argument("matte: trimap needs both constraint classes");

    const int w = img.width();
    const int h = img.height();

    AlphaMatte alpha(w, h);
    std::vector<int> unknown_index(static_cast<std::size_t>(w) * h, -1);
    int unknowns = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            switch (trimap.at(x, y)) {
            case TriLabel::FOREGROUND: alpha.set(x, y, 1.0); break;
            case TriLabel::BACKGROUND: alpha.set(x, y, 0.0); break;
            case TriLabel::UNKNOWN:
                unknown_index[static_cast<std::size_t>(y) * w + x] = unknowns++;
                break;
            }
        }
    if (unknowns == 0) return alpha;

    const int side = 2 * params.window_radius + 1;
    if (w < side || h < side)
        throw std::invalid_argument("matte: image smaller than the matting window");

    Eigen::SparseMatrix<double> lhs(unknowns, unknowns);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);
    assemble_reduced_system(img, trimap, unknown_index, params, lhs, rhs);

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> solver;
    solver.setMaxIterations(params.max_iterations);
    solver.setTolerance(params.tolerance);
    solver.compute(lhs);
    const Eigen::VectorXd solution = solver.solve(rhs);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("matte: solver did not converge, residual " +
                                 std::to_string(solver.error()));

    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int ui = unknown_index[static_cast<std::size_t>(y) * w + x];
            if (ui >= 0) alpha.set(x, y, std::clamp(solution[ui], 0.0, 1.0));
        }
    return alpha;
}

std::tuple<imgcore::BinaryMask, AlphaMatte, imgcore::BoundingBox>
extract_region(const imgcore::RasterImage& img, const imgcore::BinaryMask& chroma_mask,
               const imgcore::BinaryMask& approx_mask, int band_radius,
               const MatteParams& params) {
    const imgcore::BinaryMask combined = imgcore::mask_and(approx_mask, chroma_mask);
    if (combined.empty()) throw std::runtime_error("no object found");

    const imgcore::BinaryMask component = imgcore::largest_component(combined);
    const Trimap trimap = make_trimap(component, band_radius);
    const AlphaMatte alpha = matte(img, trimap, params);

    imgcore::BinaryMask support(alpha.width(), alpha.height());
    for (int y = 0; y < alpha.height(); ++y)
        for (int x = 0; x < alpha.width(); ++x)
            support.set(x, y, alpha.at(x, y) > 0.5);

    const imgcore::BinaryMask final_mask = imgcore::mask_and(chroma_mask, support);
    if (final_mask.empty()) throw std::runtime_error("no object found");
    return {final_mask, alpha, imgcore::tight_bounds(final_mask)};
}

} // namespace sortforge::extraction
