#include "sortforge/sorter/sorter.hpp"

#include <stdexcept>

namespace sortforge::sorter {

ManipulationDecision select_manipulation(const SortingScene& scene, PolicyMode mode) {
    if (scene.s_x < 0.0 || scene.s_y < 0.0 || scene.l_bx < 0.0 || scene.l_by < 0.0 ||
        scene.l_e < 0.0)
        throw std::invalid_argument("select_manipulation: lengths must be non-negative");
    if (scene.v_pd <= 0.0 || scene.v_c <= 0.0)
        throw std::invalid_argument("select_manipulation: speeds must be positive");
    if (scene.t_pd <= 0.0 || scene.t_pp <= 0.0)
        throw std::invalid_argument("select_manipulation: durations must be positive");

    ManipulationDecision decision;
    // Pushing is ruled out when clearing half the silhouette off the belt
    // would outlast the stroke to the bin line.
    const bool push_infeasible = (scene.s_x / 2.0) / scene.v_c > scene.l_by / scene.v_pd;
    if (push_infeasible) {
        const double window = scene.l_e / scene.v_c;
        const bool skip = mode == PolicyMode::LITERAL ? scene.t_pp < window
                                                      : scene.t_pp > window;
        if (skip) {
            decision.action = ActionKind::SKIP;
            decision.reason = "push infeasible, pick window closed";
        } else {
            decision.action = ActionKind::PICK_AND_RELEASE;
            decision.reason = "push infeasible, pick window open";
        }
    } else {
        const double window = scene.l_bx / scene.v_c;
        const bool skip = mode == PolicyMode::LITERAL ? scene.t_pd < window
                                                      : scene.t_pd > window;
        if (skip) {
            decision.action = ActionKind::SKIP;
            decision.reason = "push feasible, push window closed";
        } else {
            decision.action = ActionKind::PUSH_AND_DROP;
            decision.reason = "push feasible, push window open";
        }
    }
    return decision;
}

} // namespace sortforge::sorter
