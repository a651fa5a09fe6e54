#include "fixturegen.hpp"

#include "sortforge/imgcore/image.hpp"
#include "sortforge/imgcore/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sortforge::fixtures {

namespace {

using imgcore::BinaryMask;
using imgcore::RasterImage;

constexpr int kCanvas = 96;       // capture image side
constexpr double kFocal = 120.0;  // px
constexpr double kSourceDist = 0.4;   // m, camera to source board
constexpr double kTargetDist = 0.48;  // m, camera to target board (k = 1.2)

struct Category {
    const char* name;
    double extent_w;  // m
    double extent_h;  // m
    std::uint8_t base[3];
    std::uint8_t light[3];
    std::uint8_t dark[3];
};

const Category kCategories[] = {
    {"aluminum_can", 0.14, 0.20, {200, 40, 40}, {232, 72, 72}, {168, 26, 26}},
    {"glass_bottle", 0.12, 0.24, {40, 64, 192}, {72, 92, 224}, {26, 44, 168}},
    {"plastic_bottle", 0.16, 0.22, {224, 176, 44}, {246, 204, 76}, {176, 90, 24}},
};

// Flat conveyor-belt tone used for the substitute background.
constexpr std::uint8_t kBeltColor[3] = {52, 58, 86};

void put(RasterImage& img, int x, int y, const std::uint8_t rgb[3]) {
    img.at(x, y, 0) = rgb[0];
    img.at(x, y, 1) = rgb[1];
    img.at(x, y, 2) = rgb[2];
}

// Flat-tone silhouette of one category, centered at (u, v) with the given
// pixel half extents. Few distinct colors keep the capture histograms
// spiky, which is what the equalization stage is there to smooth.
void draw_object(RasterImage& img, BinaryMask& mask, const Category& cat, double u, double v,
                 double hw, double hh) {
    const int x0 = static_cast<int>(std::floor(u - hw));
    const int x1 = static_cast<int>(std::ceil(u + hw));
    const int y0 = static_cast<int>(std::floor(v - hh));
    const int y1 = static_cast<int>(std::ceil(v + hh));
    const std::string name = cat.name;
    for (int y = std::max(0, y0); y <= std::min(img.height() - 1, y1); ++y)
        for (int x = std::max(0, x0); x <= std::min(img.width() - 1, x1); ++x) {
            const double dx = x + 0.5 - u;
            const double dy = y + 0.5 - v;
            bool inside = false;
            if (name == "aluminum_can") {
                inside = std::fabs(dx) <= hw && std::fabs(dy) <= hh &&
                         !(std::fabs(dx) > hw - 3 && std::fabs(dy) > hh - 3);
            } else if (name == "glass_bottle") {
                const bool neck_zone = dy < -hh * 0.4;
                const double width = neck_zone ? hw * 0.4 : hw;
                inside = std::fabs(dx) <= width && std::fabs(dy) <= hh;
            } else {  // plastic_bottle: tapered body with a narrow neck
                const bool neck_zone = dy < -hh * 0.7;
                const double body_w = hw * (0.6 + 0.4 * (dy + hh) / (2.0 * hh));
                const double width = neck_zone ? hw * 0.35 : body_w;
                inside = std::fabs(dx) <= width && std::fabs(dy) <= hh;
            }
            if (!inside) continue;
            mask.set(x, y, true);
            if (dx > -hw * 0.3 && dx < hw * 0.1)
                put(img, x, y, cat.light);
            else if (dy > hh * 0.5)
                put(img, x, y, cat.dark);
            else
                put(img, x, y, cat.base);
        }
}

void write_captures(const std::filesystem::path& root, nlohmann::json& captures) {
    const double tx_by_view[] = {-0.012, -0.004, 0.004, 0.012};
    const double ty_by_view[] = {0.006, -0.006, 0.006, -0.006};

    for (const Category& cat : kCategories)
        for (int view = 0; view < 4; ++view) {
            RasterImage img(kCanvas, kCanvas, 3);
            BinaryMask mask(kCanvas, kCanvas);

            // Green-screen field with mild brightness ripple.
            for (int y = 0; y < kCanvas; ++y)
                for (int x = 0; x < kCanvas; ++x) {
                    const std::uint8_t ripple =
                        static_cast<std::uint8_t>((x * 7 + y * 13) % 11);
                    img.at(x, y, 0) = 40;
                    img.at(x, y, 1) = static_cast<std::uint8_t>(195 + ripple);
                    img.at(x, y, 2) = 60;
                }

            // Fiducial patch near the corner, outside any plausible object
            // box; the approximate mask must exclude it.
            for (int y = 3; y < 15; ++y)
                for (int x = 3; x < 19; ++x) {
                    const bool dark = ((x - 3) / 4 + (y - 3) / 4) % 2 == 0;
                    const std::uint8_t tone = dark ? 10 : 245;
                    img.at(x, y, 0) = img.at(x, y, 1) = img.at(x, y, 2) = tone;
                }

            const double tx = tx_by_view[view];
            const double ty = ty_by_view[view];
            const double u = kCanvas / 2.0 + kFocal * tx / kSourceDist;
            const double v = kCanvas / 2.0 + kFocal * ty / kSourceDist;
            const double near_z = kSourceDist - 0.005;
            const double hull_hw = kFocal * (cat.extent_w / 2.0) / near_z;
            const double hull_hh = kFocal * (cat.extent_h / 2.0) / near_z;
            const double frac = 0.70 + 0.03 * view;
            draw_object(img, mask, cat, u, v, frac * hull_hw, frac * hull_hh);

            char id[64];
            std::snprintf(id, sizeof(id), "%s__%03d", cat.name, view);
            imgcore::write_image((root / "captures" / (std::string(id) + ".png")).string(),
                                 img);
            imgcore::write_mask(
                (root / "manual" / (std::string(id) + "_mask.png")).string(), mask);

            nlohmann::json entry;
            entry["id"] = id;
            entry["image"] = std::string("captures/") + id + ".png";
            entry["category"] = cat.name;
            entry["d_s"] = kSourceDist;
            entry["marker_pose"] = {{"axis_angle", {0.0, 0.0, 0.0}},
                                    {"translation", {tx, ty, kSourceDist}}};
            entry["object_pose"] = {{"axis_angle", {0.0, 0.0, 0.0}},
                                    {"translation", {0.0, 0.0, 0.0}}};
            entry["model_extent"] = {cat.extent_w, cat.extent_h, 0.01};
            captures.push_back(entry);
        }
}

void write_background(const std::filesystem::path& root) {
    // Uniform belt surface: composited object boxes then hold only a
    // handful of distinct levels, which the adaptation stages must spread.
    RasterImage bg(128, 128, 3);
    for (int y = 0; y < 128; ++y)
        for (int x = 0; x < 128; ++x) put(bg, x, y, kBeltColor);
    imgcore::write_image((root / "background.png").string(), bg);
}

void write_target_patch(const std::filesystem::path& root) {
    // Reference texture whose channel histograms cover every level about
    // evenly, except that the exact levels appearing in the captures and
    // the belt tone are almost absent. Bare substitution therefore leaves
    // the crops concentrated on the rare levels; matching has to move the
    // mass onto the populated ones, and the equalized output spreads it
    // further across the full range.
    RasterImage patch(64, 64, 3);  // 64*64 = 16 pixels per level
    for (int c = 0; c < 3; ++c) {
        std::array<bool, 256> dipped{};
        auto dip = [&dipped](int level) {
            for (int v = std::max(0, level - 1); v <= std::min(255, level + 1); ++v)
                dipped[v] = true;
        };
        for (const Category& cat : kCategories) {
            dip(cat.base[c]);
            dip(cat.light[c]);
            dip(cat.dark[c]);
        }
        dip(kBeltColor[c]);

        std::array<int, 256> counts;
        counts.fill(16);
        int freed = 0;
        for (int v = 0; v < 256; ++v)
            if (dipped[v]) {
                freed += counts[v] - 1;
                counts[v] = 1;
            }
        for (int v = 0; freed > 0; v = (v + 1) % 256)
            if (!dipped[v]) {
                ++counts[v];
                --freed;
            }

        int index = 0;
        for (int v = 0; v < 256; ++v)
            for (int n = 0; n < counts[v]; ++n, ++index)
                patch.at(index % 64, index / 64, c) = static_cast<std::uint8_t>(v);
    }
    imgcore::write_image((root / "target_patch.png").string(), patch);
}

void write_manifest(const std::filesystem::path& root, nlohmann::json captures) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["target"] = {{"d_t", kTargetDist},
                     {"background", "background.png"},
                     {"object_patch", "target_patch.png"}};
    doc["intrinsics"] = {{"focal", kFocal},
                         {"cx", kCanvas / 2.0},
                         {"cy", kCanvas / 2.0},
                         {"width", kCanvas},
                         {"height", kCanvas}};
    doc["chroma"] = {{"key_hue", 120.0},
                     {"hue_tolerance", 30.0},
                     {"min_saturation", 0.25},
                     {"min_value", 0.15}};
    // Narrow unknown band: the drawn silhouettes have hard edges, so a
    // tight band keeps the soft blend ring thin. The clip limit is high
    // enough that no tile of a typical object box ever clips, leaving
    // plain per-tile equalization with interpolation.
    doc["extraction"] = {{"band_radius", 3}};
    doc["clahe"] = {{"tile_cols", 4}, {"tile_rows", 4}, {"clip_limit", 256.0}};
    doc["captures"] = std::move(captures);
    std::ofstream out(root / "manifest.json", std::ios::binary);
    out << doc.dump(2) << "\n";
}

void write_sim_fixture(const std::filesystem::path& root) {
    std::filesystem::create_directories(root / "sim");
    std::ofstream items(root / "sim" / "items.jsonl", std::ios::binary);
    for (int i = 0; i < 20; ++i) {
        // Wide items force the pick branch, narrow ones the push branch;
        // 12 picks and 8 pushes, the final item a push.
        const bool push_item = i % 5 == 2 || i % 5 == 4;
        nlohmann::json item;
        item["id"] = i;
        item["category"] = kCategories[i % 3].name;
        item["spawn_time"] = 6.0 * i;
        item["spawn_x"] = 0.0;
        item["s_x"] = push_item ? 0.10 : 0.20;
        item["s_y"] = push_item ? 0.08 : 0.10;
        items << item.dump() << "\n";
    }
    nlohmann::json config;
    config["schema_version"] = 1;
    config["tick"] = 0.05;
    config["belt_length"] = 2.0;
    config["bin_x"] = 1.2;
    config["l_by"] = 0.15;
    config["t_pd"] = 3.3;
    config["t_pp"] = 5.2;
    config["v_pd"] = 0.1;
    config["v_c"] = 0.05;
    config["stochastic"] = false;
    config["stream"] = "items.jsonl";
    std::ofstream out(root / "sim" / "config.json", std::ios::binary);
    out << config.dump(2) << "\n";
}

void write_propagate_fixture(const std::filesystem::path& root) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["boxes"] = {{{"box", {150, 20, 180, 50}}, {"label", "aluminum_can"}},
                    {{"box", {10, 60, 40, 90}}, {"label", "glass_bottle"}}};
    doc["v_c"] = 0.05;
    doc["fps"] = 10.0;
    doc["px_per_m"] = 1000.0;
    doc["n_frames"] = 20;
    doc["frame_width"] = 200;
    doc["frame_height"] = 100;
    std::ofstream out(root / "propagate.json", std::ios::binary);
    out << doc.dump(2) << "\n";
}

} // namespace

void write_fixture_set(const std::string& root_str) {
    const std::filesystem::path root(root_str);
    std::filesystem::create_directories(root / "captures");
    std::filesystem::create_directories(root / "manual");

    nlohmann::json captures = nlohmann::json::array();
    write_captures(root, captures);
    write_background(root);
    write_target_patch(root);
    write_manifest(root, std::move(captures));
    write_sim_fixture(root);
    write_propagate_fixture(root);
}

} // namespace sortforge::fixtures
