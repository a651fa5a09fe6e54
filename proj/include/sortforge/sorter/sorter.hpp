#pragma once

#include "sortforge/imgcore/image.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sortforge::sorter {

// Geometric and timing inputs for one manipulation decision. Lengths in
// meters, durations in seconds, speeds in meters/second.
struct SortingScene {
    double s_x = 0.0;   // object silhouette width along the belt
    double s_y = 0.0;   // object silhouette height across the belt
    double l_bx = 0.0;  // distance from silhouette center to bin center, belt axis
    double l_by = 0.0;  // distance from silhouette center to bin center, across
    double l_e = 0.0;   // distance from object to the right image end
    double t_pd = 3.3;  // push-and-drop duration
    double t_pp = 5.2;  // pick-and-release duration
    double v_pd = 0.0;  // push speed
    double v_c = 0.0;   // conveyor speed
};

enum class ActionKind { PICK_AND_RELEASE, PUSH_AND_DROP, SKIP };

// Which inner time-window comparison the policy flips. LITERAL keeps the
// pseudocode comparisons verbatim; PROSE uses the "too late to start"
// reading, skipping when the action takes longer than the window leaves.
enum class PolicyMode { LITERAL, PROSE };

struct ManipulationDecision {
    ActionKind action = ActionKind::SKIP;
    std::string reason;  // which constraint fired, re-evaluable from the scene
};

// Grasp line through the silhouette's virtual CoM, perpendicular to its
// principal axis. axis_fallback marks silhouettes whose second moments are
// isotropic, where the line defaults to vertical.
struct GraspPlan {
    double center_x = 0.0;
    double center_y = 0.0;
    double dir_x = 0.0;
    double dir_y = 0.0;
    bool axis_fallback = false;
};

// Push stroke from the virtual CoM toward the bin front center.
struct PushPlan {
    double start_x = 0.0;
    double start_y = 0.0;
    double dir_x = 0.0;
    double dir_y = 0.0;
};

// Centroid of the set pixels, sub-pixel. Throws on an empty silhouette.
std::pair<double, double> virtual_com(const imgcore::BinaryMask& silhouette);

// Throws on an empty silhouette.
GraspPlan grasp_plan(const imgcore::BinaryMask& silhouette);

// Throws std::runtime_error("zero push vector") when the bin front center
// coincides with the virtual CoM.
PushPlan push_plan(const imgcore::BinaryMask& silhouette, double bin_x, double bin_y);

// Time-constrained action selection. The outer test rules pushing out when
// halving the silhouette would take longer than reaching the bin line:
// (s_x/2)/v_c > l_by/v_pd. The inner tests compare the action duration to
// the travel window and differ between the two policy modes. Throws
// std::invalid_argument when the scene violates its invariants.
ManipulationDecision select_manipulation(const SortingScene& scene, PolicyMode mode);

// One item riding the conveyor.
struct ConveyorItem {
    int id = 0;
    std::string category;
    double spawn_time = 0.0;  // seconds
    double spawn_x = 0.0;     // meters along the belt at spawn
    double s_x = 0.0;         // silhouette extent along the belt, meters
    double s_y = 0.0;         // silhouette extent across the belt, meters
};

// Forcing overrides the policy with a fixed action for every decided item
// (used to compare mixed scheduling against single-primitive scheduling).
enum class ForcePolicy { NONE, PICK_ONLY, PUSH_ONLY };

struct SimulationConfig {
    double tick = 0.05;        // seconds per step
    double belt_length = 2.0;  // meters; items past this point have exited
    double bin_x = 1.2;        // bin center along the belt, meters
    double l_by = 0.15;        // lateral distance to the bin line, meters
    double t_pd = 3.3;
    double t_pp = 5.2;
    double v_pd = 0.1;
    double v_c = 0.05;
    PolicyMode mode = PolicyMode::LITERAL;
    ForcePolicy force = ForcePolicy::NONE;
    // Optional stochastic execution: when enabled, an executed action
    // succeeds with the per-category rate under the seeded generator;
    // failures drop the item unsorted. Disabled, every action succeeds.
    bool stochastic = false;
    std::uint64_t seed = 0;
    std::map<std::string, double> pick_success{{"aluminum_can", 0.8},
                                               {"glass_bottle", 0.7},
                                               {"plastic_bottle", 0.6}};
    std::map<std::string, double> push_success{{"aluminum_can", 0.6},
                                               {"glass_bottle", 0.5},
                                               {"plastic_bottle", 0.5}};
};

struct SimulationReport {
    std::uint64_t spawned = 0;
    std::uint64_t sorted = 0;
    std::uint64_t skipped = 0;   // policy skips plus items that exited unhandled
    std::uint64_t failed = 0;    // stochastic mode only
    std::uint64_t picks = 0;     // executed pick-and-release actions
    std::uint64_t pushes = 0;    // executed push-and-drop actions
    double mean_handling_time = 0.0;  // over executed actions
    double mean_pick_time = 0.0;
    double mean_push_time = 0.0;
    double makespan = 0.0;  // completion time of the last executed action

    std::string text() const;
    std::string json() const;
};

// Deterministic discrete-time run: the robot is exclusive, evaluates the
// frontmost unhandled item whenever idle, and is busy for the action's
// full duration. Items drifting past the belt end undecided count as
// skips. Throws std::invalid_argument on non-positive tick/speeds or an
// item stream not ordered by spawn time.
SimulationReport simulate(const std::vector<ConveyorItem>& stream,
                          const SimulationConfig& config);

} // namespace sortforge::sorter
