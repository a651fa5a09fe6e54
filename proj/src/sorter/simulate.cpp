#include "sortforge/sorter/sorter.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sortforge::sorter {

namespace {

enum class ItemState { PENDING, ON_BELT, HANDLING, SORTED, SKIPPED, FAILED };

struct LiveItem {
    const ConveyorItem* item = nullptr;
    ItemState state = ItemState::PENDING;
    double x = 0.0;
};

// Uniform double in [0,1) drawn from the top 53 bits, so runs do not
// depend on the standard library's distribution implementation.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

SimulationReport simulate(const std::vector<ConveyorItem>& stream,
                          const SimulationConfig& config) {
    if (config.tick <= 0.0)
        throw std::invalid_argument("simulate: tick must be positive");
    if (config.v_c <= 0.0 || config.v_pd <= 0.0)
        throw std::invalid_argument("simulate: speeds must be positive");
    if (config.t_pd <= 0.0 || config.t_pp <= 0.0)
        throw std::invalid_argument("simulate: durations must be positive");
    for (std::size_t i = 1; i < stream.size(); ++i)
        if (stream[i].spawn_time < stream[i - 1].spawn_time)
            throw std::invalid_argument("simulate: items must be ordered by spawn time");

    std::vector<LiveItem> items(stream.size());
    for (std::size_t i = 0; i < stream.size(); ++i) items[i].item = &stream[i];

    std::mt19937_64 rng(config.seed);
    SimulationReport report;
    report.spawned = stream.size();

    double t = 0.0;
    bool robot_busy = false;
    double busy_until = 0.0;
    std::size_t busy_item = 0;
    ActionKind busy_action = ActionKind::SKIP;
    constexpr double kTimeEps = 1e-9;

    const auto all_settled = [&]() {
        if (robot_busy) return false;
        for (const LiveItem& it : items)
            if (it.state == ItemState::PENDING || it.state == ItemState::ON_BELT ||
                it.state == ItemState::HANDLING)
                return false;
        return true;
    };

    while (!all_settled()) {
        // 1. Finish the running action.
        if (robot_busy && t + kTimeEps >= busy_until) {
            LiveItem& it = items[busy_item];
            bool success = true;
            if (config.stochastic) {
                const auto& rates = busy_action == ActionKind::PICK_AND_RELEASE
                                        ? config.pick_success
                                        : config.push_success;
                const auto rate_it = rates.find(it.item->category);
                const double rate = rate_it == rates.end() ? 1.0 : rate_it->second;
                success = uniform01(rng) < rate;
            }
            if (success) {
                it.state = ItemState::SORTED;
                ++report.sorted;
            } else {
                it.state = ItemState::FAILED;
                ++report.failed;
            }
            if (busy_action == ActionKind::PICK_AND_RELEASE)
                ++report.picks;
            else
                ++report.pushes;
            report.makespan = std::max(report.makespan, busy_until);
            robot_busy = false;
        }

        // 2. Spawn items whose time has come.
        for (LiveItem& it : items)
            if (it.state == ItemState::PENDING && it.item->spawn_time <= t + kTimeEps) {
                it.state = ItemState::ON_BELT;
                it.x = it.item->spawn_x;
            }

        // 3. Idle robot evaluates the frontmost item on the belt.
        if (!robot_busy) {
            std::size_t front = items.size();
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (items[i].state != ItemState::ON_BELT) continue;
                if (front == items.size() || items[i].x > items[front].x) front = i;
            }
            if (front < items.size()) {
                LiveItem& it = items[front];
                ActionKind action;
                if (config.force == ForcePolicy::PICK_ONLY) {
                    action = ActionKind::PICK_AND_RELEASE;
                } else if (config.force == ForcePolicy::PUSH_ONLY) {
                    action = ActionKind::PUSH_AND_DROP;
                } else {
                    SortingScene scene;
                    scene.s_x = it.item->s_x;
                    scene.s_y = it.item->s_y;
                    scene.l_bx = std::max(0.0, config.bin_x - it.x);
                    scene.l_by = config.l_by;
                    scene.l_e = std::max(0.0, config.belt_length - it.x);
                    scene.t_pd = config.t_pd;
                    scene.t_pp = config.t_pp;
                    scene.v_pd = config.v_pd;
                    scene.v_c = config.v_c;
                    action = select_manipulation(scene, config.mode).action;
                }
                if (action == ActionKind::SKIP) {
                    it.state = ItemState::SKIPPED;
                    ++report.skipped;
                } else {
                    it.state = ItemState::HANDLING;
                    robot_busy = true;
                    busy_item = front;
                    busy_action = action;
                    busy_until =
                        t + (action == ActionKind::PICK_AND_RELEASE ? config.t_pp
                                                                    : config.t_pd);
                }
            }
        }

        // 4. The belt advances everything still riding it.
        for (LiveItem& it : items)
            if (it.state == ItemState::ON_BELT) {
                it.x += config.v_c * config.tick;
                if (it.x > config.belt_length) {
                    // Drifted past the end without a decision.
                    it.state = ItemState::SKIPPED;
                    ++report.skipped;
                }
            }

        t += config.tick;
    }

    // Every executed action runs for exactly its configured duration, so
    // the per-action means are the constants themselves.
    report.mean_pick_time = report.picks > 0 ? config.t_pp : 0.0;
    report.mean_push_time = report.pushes > 0 ? config.t_pd : 0.0;
    const std::uint64_t actions = report.picks + report.pushes;
    report.mean_handling_time =
        actions > 0 ? (static_cast<double>(report.picks) * config.t_pp +
                       static_cast<double>(report.pushes) * config.t_pd) /
                          static_cast<double>(actions)
                    : 0.0;
    return report;
}

std::string SimulationReport::text() const {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3);
    os << "spawned             " << spawned << "\n"
       << "sorted              " << sorted << "\n"
       << "skipped             " << skipped << "\n"
       << "failed              " << failed << "\n"
       << "picks               " << picks << "\n"
       << "pushes              " << pushes << "\n"
       << "mean handling time  " << mean_handling_time << " s\n"
       << "mean pick time      " << mean_pick_time << " s\n"
       << "mean push time      " << mean_push_time << " s\n"
       << "makespan            " << makespan << " s\n";
    return os.str();
}

std::string SimulationReport::json() const {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["spawned"] = spawned;
    doc["sorted"] = sorted;
    doc["skipped"] = skipped;
    doc["failed"] = failed;
    doc["picks"] = picks;
    doc["pushes"] = pushes;
    doc["mean_handling_time"] = mean_handling_time;
    doc["mean_pick_time"] = mean_pick_time;
    doc["mean_push_time"] = mean_push_time;
    doc["makespan"] = makespan;
    return doc.dump(2) + "\n";
}

} // namespace sortforge::sorter
