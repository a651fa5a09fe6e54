#include "sortforge/cli/pipeline.hpp"

#include "sortforge/extraction/extraction.hpp"
#include "sortforge/geometry/scaling.hpp"
#include "sortforge/imgcore/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sortforge::cli {

namespace {

constexpr const char* kToolVersion = "0.1.0";

double elapsed_seconds(std::chrono::steady_clock::time_point from) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - from).count();
}

// 64-bit FNV-1a over a canonical rendering of everything that shapes the
// output, so identical configurations hash identically across runs.
std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string config_fingerprint(const CaptureManifest& m, coloradapt::AdaptMode mode) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "v1|mode=" << mode_name(mode) << "|d_t=" << m.d_t << "|bg=" << m.background_path
       << "|patch=" << m.target_patch_path << "|chroma=" << m.chroma.key_hue << ','
       << m.chroma.hue_tolerance << ',' << m.chroma.min_saturation << ',' << m.chroma.min_value
       << "|intr=" << m.intrinsics.focal << ',' << m.intrinsics.cx << ',' << m.intrinsics.cy
       << ',' << m.intrinsics.width << ',' << m.intrinsics.height
       << "|band=" << m.band_radius << "|eps=" << m.matte.epsilon << ",win="
       << m.matte.window_radius << "|clahe=" << m.clahe.tile_cols << ',' << m.clahe.tile_rows
       << ',' << m.clahe.clip_limit << "|invert=" << m.scale_invert;
    for (const Capture& c : m.captures) {
        os << "|cap=" << c.id << ',' << c.image_path << ',' << c.category << ',' << c.d_s
           << ",ext=" << c.extent.w << ',' << c.extent.h << ',' << c.extent.d << ",mp=";
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) os << c.marker_pose.rotation(i, j) << ';';
        os << c.marker_pose.translation.transpose() << ",op=";
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) os << c.object_pose.rotation(i, j) << ';';
        os << c.object_pose.translation.transpose();
    }
    std::ostringstream hex;
    hex << "fnv1a:" << std::hex << std::setw(16) << std::setfill('0') << fnv1a(os.str());
    return hex.str();
}

struct CaptureOutcome {
    std::optional<AnnotatedSample> sample;
    std::optional<FailedCapture> failure;
    std::vector<TimedEvent> events;
};

const char* provenance_name(Provenance p) {
    switch (p) {
    case Provenance::AUTO: return "AUTO";
    case Provenance::MANUAL: return "MANUAL";
    case Provenance::PROPAGATED: return "PROPAGATED";
    }
    return "AUTO";
}

} // namespace

const char* mode_name(coloradapt::AdaptMode mode) {
    switch (mode) {
    case coloradapt::AdaptMode::BS: return "BS";
    case coloradapt::AdaptMode::BS_HM: return "BS+HM";
    case coloradapt::AdaptMode::BS_HM_EQ: return "BS+HM+EQ";
    }
    return "BS";
}

coloradapt::AdaptMode parse_mode(const std::string& name) {
    if (name == "BS") return coloradapt::AdaptMode::BS;
    if (name == "BS+HM") return coloradapt::AdaptMode::BS_HM;
    if (name == "BS+HM+EQ") return coloradapt::AdaptMode::BS_HM_EQ;
    throw std::invalid_argument("unknown adaptation mode: " + name +
                                " (expected BS, BS+HM, or BS+HM+EQ)");
}

DatasetIndex run_pipeline(const CaptureManifest& manifest, coloradapt::AdaptMode mode,
                          const std::string& out_dir, int jobs,
                          std::vector<TimedEvent>* timing) {
    std::filesystem::create_directories(out_dir);
    const imgcore::RasterImage background = imgcore::read_image(manifest.background_path);
    const imgcore::RasterImage target_patch = imgcore::read_image(manifest.target_patch_path);

    const std::size_t n = manifest.captures.size();
    std::vector<CaptureOutcome> outcomes(n);
    std::atomic<std::size_t> cursor{0};

    const auto process = [&](std::size_t i) {
        const Capture& cap = manifest.captures[i];
        CaptureOutcome out;
        try {
            auto t0 = std::chrono::steady_clock::now();
            const imgcore::RasterImage img = imgcore::read_image(cap.image_path);
            const geometry::RigidPose object_in_camera =
                geometry::compose(cap.marker_pose, cap.object_pose);
            const imgcore::BinaryMask approx =
                geometry::project_mask(cap.extent, object_in_camera, manifest.intrinsics);
            const imgcore::BinaryMask chroma = extraction::chroma_key(img, manifest.chroma);
            auto [mask, alpha, box] = extraction::extract_region(
                img, chroma, approx, manifest.band_radius, manifest.matte);
            out.events.push_back({"extract", elapsed_seconds(t0)});

            t0 = std::chrono::steady_clock::now();
            const double k = geometry::scale_factor({cap.d_s, manifest.d_t},
                                                    manifest.scale_invert);
            coloradapt::AdaptResult adapted = coloradapt::adapt(
                img, alpha, background, target_patch, k, mode, manifest.clahe);
            out.events.push_back({"adapt", elapsed_seconds(t0)});

            t0 = std::chrono::steady_clock::now();
            AnnotatedSample sample;
            sample.id = cap.id;
            sample.category = cap.category;
            sample.image_path = cap.id + ".png";
            sample.mask_path = cap.id + "_mask.png";
            sample.alpha_path = cap.id + "_alpha.png";
            sample.box = adapted.box;
            sample.provenance = Provenance::AUTO;
            sample.source_id = cap.id;
            const std::filesystem::path dir(out_dir);
            imgcore::write_image((dir / sample.image_path).string(), adapted.composite);
            imgcore::write_mask((dir / sample.mask_path).string(), adapted.mask);
            imgcore::Gray16 alpha16;
            alpha16.width = adapted.alpha.width();
            alpha16.height = adapted.alpha.height();
            alpha16.samples.resize(static_cast<std::size_t>(alpha16.width) * alpha16.height);
            for (int y = 0; y < alpha16.height; ++y)
                for (int x = 0; x < alpha16.width; ++x)
                    alpha16.samples[static_cast<std::size_t>(y) * alpha16.width + x] =
                        static_cast<std::uint16_t>(
                            std::lround(adapted.alpha.at(x, y) * 65535.0));
            imgcore::write_gray16((dir / sample.alpha_path).string(), alpha16);
            out.events.push_back({"export", elapsed_seconds(t0)});
            out.sample = std::move(sample);
        } catch (const std::exception& e) {
            out.failure = FailedCapture{cap.id, e.what()};
        }
        return out;
    };

    int workers = jobs;
    if (workers <= 0)
        workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = static_cast<int>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) outcomes[i] = process(i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = cursor.fetch_add(1);
                    if (i >= n) break;
                    outcomes[i] = process(i);
                }
            });
        for (std::thread& th : pool) th.join();
    }

    DatasetIndex index;
    index.tool_version = kToolVersion;
    index.config_hash = config_fingerprint(manifest, mode);
    index.mode = mode_name(mode);
    std::set<std::string> classes;
    for (const Capture& cap : manifest.captures) classes.insert(cap.category);
    index.classes.assign(classes.begin(), classes.end());
    for (CaptureOutcome& out : outcomes) {
        if (out.sample) index.samples.push_back(std::move(*out.sample));
        if (out.failure) index.failures.push_back(std::move(*out.failure));
        if (timing)
            timing->insert(timing->end(), out.events.begin(), out.events.end());
    }
    std::sort(index.samples.begin(), index.samples.end(),
              [](const AnnotatedSample& a, const AnnotatedSample& b) { return a.id < b.id; });
    std::sort(index.failures.begin(), index.failures.end(),
              [](const FailedCapture& a, const FailedCapture& b) { return a.id < b.id; });

    std::ofstream out(std::filesystem::path(out_dir) / "index.json",
                      std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write dataset index in " + out_dir);
    out << index.json();
    return index;
}

std::string DatasetIndex::json() const {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["tool_version"] = tool_version;
    doc["config_hash"] = config_hash;
    doc["mode"] = mode;
    doc["classes"] = classes;
    doc["samples"] = nlohmann::json::array();
    for (const AnnotatedSample& s : samples) {
        nlohmann::json entry;
        entry["id"] = s.id;
        entry["category"] = s.category;
        entry["image"] = s.image_path;
        entry["mask"] = s.mask_path;
        entry["alpha"] = s.alpha_path;
        entry["box"] = {s.box.x_min, s.box.y_min, s.box.x_max, s.box.y_max};
        entry["provenance"] = provenance_name(s.provenance);
        entry["source"] = s.source_id;
        doc["samples"].push_back(entry);
    }
    doc["failures"] = nlohmann::json::array();
    for (const FailedCapture& f : failures) {
        nlohmann::json entry;
        entry["id"] = f.id;
        entry["reason"] = f.reason;
        doc["failures"].push_back(entry);
    }
    return doc.dump(2) + "\n";
}

std::vector<PhaseTiming> report_collection_time(const std::vector<TimedEvent>& events,
                                                std::uint64_t image_count) {
    std::vector<PhaseTiming> table;
    for (const TimedEvent& e : events) {
        auto it = std::find_if(table.begin(), table.end(),
                               [&](const PhaseTiming& p) { return p.phase == e.phase; });
        if (it == table.end()) {
            table.push_back({e.phase, 0.0, 0, 0.0});
            it = std::prev(table.end());
        }
        it->total_seconds += e.seconds;
        ++it->events;
    }
    for (PhaseTiming& p : table)
        p.per_100_images = image_count > 0
                               ? p.total_seconds / static_cast<double>(image_count) * 100.0
                               : 0.0;
    return table;
}

std::string timing_text(const std::vector<PhaseTiming>& table) {
    std::ostringstream os;
    os << std::left << std::setw(12) << "phase" << std::right << std::setw(12) << "total s"
       << std::setw(10) << "events" << std::setw(16) << "s/100 images" << "\n";
    os << std::fixed << std::setprecision(3);
    for (const PhaseTiming& p : table)
        os << std::left << std::setw(12) << p.phase << std::right << std::setw(12)
           << p.total_seconds << std::setw(10) << p.events << std::setw(16)
           << p.per_100_images << "\n";
    return os.str();
}

std::string timing_json(const std::vector<PhaseTiming>& table) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["phases"] = nlohmann::json::array();
    for (const PhaseTiming& p : table) {
        nlohmann::json entry;
        entry["phase"] = p.phase;
        entry["total_seconds"] = p.total_seconds;
        entry["events"] = p.events;
        entry["per_100_images"] = p.per_100_images;
        doc["phases"].push_back(entry);
    }
    return doc.dump(2) + "\n";
}

} // namespace sortforge::cli
