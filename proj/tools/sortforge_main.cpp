// Command-line front end: dataset collection, adaptation, evaluation,
// box propagation, and conveyor simulation over JSON configs.

#include "sortforge/cli/annotations.hpp"
#include "sortforge/cli/manifest.hpp"
#include "sortforge/cli/pipeline.hpp"
#include "sortforge/coloradapt/coloradapt.hpp"
#include "sortforge/extraction/extraction.hpp"
#include "sortforge/geometry/projection.hpp"
#include "sortforge/geometry/scaling.hpp"
#include "sortforge/imgcore/io.hpp"
#include "sortforge/metrics/metrics.hpp"
#include "sortforge/sorter/sorter.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <thread>

namespace {

namespace fs = std::filesystem;
namespace imgcore = sortforge::imgcore;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPartial = 2;
constexpr int kExitIo = 3;

int effective_jobs(int flag_jobs) {
    if (const char* env = std::getenv("SORTFORGE_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return flag_jobs;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json doc;
    in >> doc;
    return doc;
}

void write_text_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
}

// ---- extract ---------------------------------------------------------

struct ExtractResult {
    std::string id;
    imgcore::BoundingBox box;
    bool ok = false;
    std::string reason;
};

int cmd_extract(const std::string& config, const std::string& out_dir, int jobs) {
    sortforge::cli::CaptureManifest manifest;
    try {
        manifest = sortforge::cli::ingest(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        fs::create_directories(out_dir);
        const std::size_t n = manifest.captures.size();
        std::vector<ExtractResult> results(n);
        std::atomic<std::size_t> cursor{0};
        const auto worker = [&] {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= n) break;
                const auto& cap = manifest.captures[i];
                ExtractResult& res = results[i];
                res.id = cap.id;
                try {
                    const imgcore::RasterImage img = imgcore::read_image(cap.image_path);
                    const auto pose =
                        sortforge::geometry::compose(cap.marker_pose, cap.object_pose);
                    const auto approx = sortforge::geometry::project_mask(
                        cap.extent, pose, manifest.intrinsics);
                    const auto chroma = sortforge::extraction::chroma_key(img, manifest.chroma);
                    auto [mask, alpha, box] = sortforge::extraction::extract_region(
                        img, chroma, approx, manifest.band_radius, manifest.matte);
                    imgcore::write_mask((fs::path(out_dir) / (cap.id + "_mask.png")).string(),
                                        mask);
                    imgcore::Gray16 a16;
                    a16.width = alpha.width();
                    a16.height = alpha.height();
                    a16.samples.resize(static_cast<std::size_t>(a16.width) * a16.height);
                    for (int y = 0; y < a16.height; ++y)
                        for (int x = 0; x < a16.width; ++x)
                            a16.samples[static_cast<std::size_t>(y) * a16.width + x] =
                                static_cast<std::uint16_t>(
                                    std::lround(alpha.at(x, y) * 65535.0));
                    imgcore::write_gray16(
                        (fs::path(out_dir) / (cap.id + "_alpha.png")).string(), a16);
                    res.box = box;
                    res.ok = true;
                } catch (const std::exception& e) {
                    res.reason = e.what();
                }
            }
        };
        const int workers = std::max(1, std::min<int>(effective_jobs(jobs),
                                                      static_cast<int>(std::max<std::size_t>(n, 1))));
        if (workers <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }

        json doc;
        doc["schema_version"] = 1;
        doc["boxes"] = json::array();
        doc["failures"] = json::array();
        std::size_t failures = 0;
        std::sort(results.begin(), results.end(),
                  [](const ExtractResult& a, const ExtractResult& b) { return a.id < b.id; });
        for (const ExtractResult& r : results) {
            if (r.ok) {
                doc["boxes"].push_back({{"id", r.id},
                                        {"box", {r.box.x_min, r.box.y_min, r.box.x_max,
                                                 r.box.y_max}}});
            } else {
                doc["failures"].push_back({{"id", r.id}, {"reason", r.reason}});
                ++failures;
            }
        }
        write_text_file(fs::path(out_dir) / "boxes.json", doc.dump(2) + "\n");
        std::cout << "extracted " << (n - failures) << "/" << n << " captures into "
                  << out_dir << "\n";
        return failures > 0 ? kExitPartial : kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

// ---- adapt -----------------------------------------------------------

int cmd_adapt(const std::string& config, const std::string& out_dir,
              const std::string& mode_name, int jobs, const std::string& timing_log) {
    sortforge::cli::CaptureManifest manifest;
    sortforge::coloradapt::AdaptMode mode;
    try {
        manifest = sortforge::cli::ingest(config);
        mode = sortforge::cli::parse_mode(mode_name);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        std::vector<sortforge::cli::TimedEvent> events;
        const auto index = sortforge::cli::run_pipeline(
            manifest, mode, out_dir, effective_jobs(jobs),
            timing_log.empty() ? nullptr : &events);
        if (!timing_log.empty()) {
            const auto table = sortforge::cli::report_collection_time(
                events, manifest.captures.size());
            write_text_file(timing_log, sortforge::cli::timing_json(table));
            std::cout << sortforge::cli::timing_text(table);
        }
        std::cout << "adapted " << index.samples.size() << "/" << manifest.captures.size()
                  << " captures (" << index.mode << ") into " << out_dir << "\n";
        for (const auto& f : index.failures)
            std::cout << "  failed " << f.id << ": " << f.reason << "\n";
        return index.failures.empty() ? kExitOk : kExitPartial;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

// ---- export ----------------------------------------------------------

int cmd_export(const std::string& config, const std::string& out_dir,
               const std::string& mode_name) {
    sortforge::cli::CaptureManifest manifest;
    sortforge::coloradapt::AdaptMode mode;
    try {
        manifest = sortforge::cli::ingest(config);
        mode = sortforge::cli::parse_mode(mode_name);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    // Rebuilds index.json from sample files already present in out_dir
    // (an adapt run that was interrupted after its artifacts were written,
    // or hand-pruned outputs).
    try {
        sortforge::cli::DatasetIndex index;
        index.tool_version = "0.1.0";
        index.mode = sortforge::cli::mode_name(mode);
        index.config_hash = "rebuilt";
        std::set<std::string> classes;
        for (const auto& cap : manifest.captures) {
            classes.insert(cap.category);
            const fs::path image = fs::path(out_dir) / (cap.id + ".png");
            const fs::path mask_path = fs::path(out_dir) / (cap.id + "_mask.png");
            const fs::path alpha_path = fs::path(out_dir) / (cap.id + "_alpha.png");
            if (!fs::exists(image) || !fs::exists(mask_path) || !fs::exists(alpha_path)) {
                index.failures.push_back({cap.id, "missing sample files"});
                continue;
            }
            sortforge::cli::AnnotatedSample sample;
            sample.id = cap.id;
            sample.category = cap.category;
            sample.image_path = cap.id + ".png";
            sample.mask_path = cap.id + "_mask.png";
            sample.alpha_path = cap.id + "_alpha.png";
            sample.box = imgcore::tight_bounds(imgcore::read_mask(mask_path.string()));
            sample.provenance = sortforge::cli::Provenance::AUTO;
            sample.source_id = cap.id;
            index.samples.push_back(std::move(sample));
        }
        index.classes.assign(classes.begin(), classes.end());
        write_text_file(fs::path(out_dir) / "index.json", index.json());
        std::cout << "indexed " << index.samples.size() << " samples into " << out_dir
                  << "/index.json\n";
        return index.failures.empty() ? kExitOk : kExitPartial;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

// ---- similarity ------------------------------------------------------

imgcore::RasterImage crop_box(const imgcore::RasterImage& img,
                              const imgcore::BoundingBox& box) {
    imgcore::RasterImage out(box.width(), box.height(), img.channels());
    for (int y = 0; y < box.height(); ++y)
        for (int x = 0; x < box.width(); ++x)
            for (int c = 0; c < img.channels(); ++c)
                out.at(x, y, c) = img.at(box.x_min + x, box.y_min + y, c);
    return out;
}

int cmd_similarity(const std::string& config, const std::string& out_dir, int jobs) {
    sortforge::cli::CaptureManifest manifest;
    try {
        manifest = sortforge::cli::ingest(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        const imgcore::RasterImage background =
            imgcore::read_image(manifest.background_path);
        const imgcore::RasterImage reference =
            imgcore::read_image(manifest.target_patch_path);

        struct Extracted {
            const sortforge::cli::Capture* cap;
            imgcore::RasterImage img;
            sortforge::extraction::AlphaMatte alpha;
            imgcore::BoundingBox box;
        };
        std::vector<std::optional<Extracted>> extracted(manifest.captures.size());
        std::atomic<std::size_t> cursor{0};
        const auto worker = [&] {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= manifest.captures.size()) break;
                const auto& cap = manifest.captures[i];
                try {
                    imgcore::RasterImage img = imgcore::read_image(cap.image_path);
                    const auto pose =
                        sortforge::geometry::compose(cap.marker_pose, cap.object_pose);
                    const auto approx = sortforge::geometry::project_mask(
                        cap.extent, pose, manifest.intrinsics);
                    const auto chroma =
                        sortforge::extraction::chroma_key(img, manifest.chroma);
                    auto [mask, alpha, box] = sortforge::extraction::extract_region(
                        img, chroma, approx, manifest.band_radius, manifest.matte);
                    extracted[i] = Extracted{&cap, std::move(img), std::move(alpha), box};
                } catch (const std::exception&) {
                    // skipped samples simply do not contribute
                }
            }
        };
        const int workers =
            std::max(1, std::min<int>(effective_jobs(jobs),
                                      static_cast<int>(manifest.captures.size())));
        if (workers <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }

        std::vector<sortforge::metrics::SimilaritySample> samples;
        for (const auto& ex : extracted) {
            if (!ex) continue;
            const double k = sortforge::geometry::scale_factor(
                {ex->cap->d_s, manifest.d_t}, manifest.scale_invert);
            samples.push_back({"Original", ex->cap->category, crop_box(ex->img, ex->box)});
            for (const auto mode :
                 {sortforge::coloradapt::AdaptMode::BS, sortforge::coloradapt::AdaptMode::BS_HM,
                  sortforge::coloradapt::AdaptMode::BS_HM_EQ}) {
                const auto adapted = sortforge::coloradapt::adapt(
                    ex->img, ex->alpha, background, reference, k, mode, manifest.clahe);
                samples.push_back({sortforge::cli::mode_name(mode), ex->cap->category,
                                   crop_box(adapted.composite, adapted.box)});
            }
        }
        const auto report = sortforge::metrics::similarity_report(samples, reference);
        std::cout << report.text();
        fs::create_directories(out_dir);
        write_text_file(fs::path(out_dir) / "similarity.json", report.json());
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

// ---- eval-annotations -------------------------------------------------

int cmd_eval(const std::string& config, const std::string& out_dir) {
    std::string auto_dir;
    std::string manual_dir;
    try {
        const json doc = load_json(config);
        if (!doc.contains("auto_dir") || !doc.contains("manual_dir"))
            throw std::runtime_error("eval config needs \"auto_dir\" and \"manual_dir\"");
        const fs::path base = fs::path(config).parent_path();
        const auto resolve = [&](std::string p) {
            fs::path path(p);
            return (path.is_relative() ? base / path : path).string();
        };
        auto_dir = resolve(doc["auto_dir"].get<std::string>());
        manual_dir = resolve(doc["manual_dir"].get<std::string>());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        const auto report = sortforge::cli::evaluate_annotations(auto_dir, manual_dir);
        std::cout << report.text();
        fs::create_directories(out_dir);
        write_text_file(fs::path(out_dir) / "annotations.json", report.json());
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

// ---- propagate ---------------------------------------------------------

int cmd_propagate(const std::string& config, const std::string& out_dir) {
    std::vector<sortforge::cli::LabeledBox> boxes;
    double v_c = 0.0, fps = 0.0, px_per_m = 0.0;
    int n_frames = 0, frame_w = 0, frame_h = 0;
    try {
        const json doc = load_json(config);
        for (const auto& b : doc.at("boxes")) {
            const auto& arr = b.at("box");
            boxes.push_back({{arr.at(0).get<int>(), arr.at(1).get<int>(), arr.at(2).get<int>(),
                              arr.at(3).get<int>()},
                             b.at("label").get<std::string>()});
        }
        v_c = doc.at("v_c").get<double>();
        fps = doc.at("fps").get<double>();
        px_per_m = doc.at("px_per_m").get<double>();
        n_frames = doc.at("n_frames").get<int>();
        frame_w = doc.at("frame_width").get<int>();
        frame_h = doc.at("frame_height").get<int>();
    } catch (const std::exception& e) {
        std::cerr << "error: propagate config: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        const auto frames = sortforge::cli::propagate_boxes(boxes, v_c, fps, px_per_m,
                                                            n_frames, frame_w, frame_h);
        json doc;
        doc["schema_version"] = 1;
        doc["frames"] = json::array();
        for (const auto& frame : frames) {
            json entries = json::array();
            for (const auto& lb : frame)
                entries.push_back({{"box", {lb.box.x_min, lb.box.y_min, lb.box.x_max,
                                            lb.box.y_max}},
                                   {"label", lb.label}});
            doc["frames"].push_back(entries);
        }
        fs::create_directories(out_dir);
        write_text_file(fs::path(out_dir) / "propagated.json", doc.dump(2) + "\n");
        std::cout << "propagated " << boxes.size() << " boxes over " << n_frames
                  << " frames\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

// ---- simulate ----------------------------------------------------------

int cmd_simulate(const std::string& config, const std::string& out_dir,
                 const std::string& policy, std::uint64_t seed) {
    sortforge::sorter::SimulationConfig sim;
    std::vector<sortforge::sorter::ConveyorItem> stream;
    try {
        const json doc = load_json(config);
        if (policy == "literal")
            sim.mode = sortforge::sorter::PolicyMode::LITERAL;
        else if (policy == "prose")
            sim.mode = sortforge::sorter::PolicyMode::PROSE;
        else
            throw std::runtime_error("unknown policy: " + policy +
                                     " (expected literal or prose)");
        sim.seed = seed;
        if (doc.contains("tick")) sim.tick = doc["tick"].get<double>();
        if (doc.contains("belt_length")) sim.belt_length = doc["belt_length"].get<double>();
        if (doc.contains("bin_x")) sim.bin_x = doc["bin_x"].get<double>();
        if (doc.contains("l_by")) sim.l_by = doc["l_by"].get<double>();
        if (doc.contains("t_pd")) sim.t_pd = doc["t_pd"].get<double>();
        if (doc.contains("t_pp")) sim.t_pp = doc["t_pp"].get<double>();
        if (doc.contains("v_pd")) sim.v_pd = doc["v_pd"].get<double>();
        if (doc.contains("v_c")) sim.v_c = doc["v_c"].get<double>();
        if (doc.contains("stochastic")) sim.stochastic = doc["stochastic"].get<bool>();
        if (doc.contains("force")) {
            const std::string f = doc["force"].get<std::string>();
            if (f == "pick_only")
                sim.force = sortforge::sorter::ForcePolicy::PICK_ONLY;
            else if (f == "push_only")
                sim.force = sortforge::sorter::ForcePolicy::PUSH_ONLY;
            else if (f != "none")
                throw std::runtime_error("unknown force mode: " + f);
        }

        const fs::path base = fs::path(config).parent_path();
        fs::path stream_path(doc.at("stream").get<std::string>());
        if (stream_path.is_relative()) stream_path = base / stream_path;
        std::ifstream lines(stream_path);
        if (!lines)
            throw std::runtime_error("cannot open item stream: " + stream_path.string());
        std::string line;
        while (std::getline(lines, line)) {
            if (line.empty()) continue;
            const json item = json::parse(line);
            sortforge::sorter::ConveyorItem ci;
            ci.id = item.at("id").get<int>();
            ci.category = item.at("category").get<std::string>();
            ci.spawn_time = item.at("spawn_time").get<double>();
            if (item.contains("spawn_x")) ci.spawn_x = item["spawn_x"].get<double>();
            if (item.contains("silhouette")) {
                // Parametric extents derived from a silhouette mask file.
                fs::path sil(item["silhouette"].get<std::string>());
                if (sil.is_relative()) sil = base / sil;
                const auto mask = imgcore::read_mask(sil.string());
                const auto box = imgcore::tight_bounds(mask);
                const double px_per_m = item.at("px_per_m").get<double>();
                ci.s_x = box.width() / px_per_m;
                ci.s_y = box.height() / px_per_m;
            } else {
                ci.s_x = item.at("s_x").get<double>();
                ci.s_y = item.at("s_y").get<double>();
            }
            stream.push_back(std::move(ci));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: simulate config: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        const auto report = sortforge::sorter::simulate(stream, sim);
        std::cout << report.text();
        fs::create_directories(out_dir);
        write_text_file(fs::path(out_dir) / "simulation.json", report.json());
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sortforge: capture-to-dataset adaptation and sorting simulation"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir = ".";
    std::string mode = "BS+HM+EQ";
    std::string policy = "literal";
    std::string timing_log;
    std::uint64_t seed = 0;
    int jobs = 1;

    const auto add_common = [&](CLI::App* sub, bool with_mode, bool with_policy) {
        sub->add_option("--config", config, "JSON config / manifest path")->required();
        sub->add_option("--out", out_dir, "output directory");
        if (with_mode)
            sub->add_option("--mode", mode, "adaptation mode: BS, BS+HM, BS+HM+EQ");
        if (with_policy)
            sub->add_option("--policy", policy, "selection policy: literal or prose");
        sub->add_option("--seed", seed, "random seed (stochastic simulation)");
        sub->add_option("--jobs", jobs, "worker threads (SORTFORGE_JOBS overrides)");
    };

    CLI::App* extract = app.add_subcommand("extract", "object extraction only");
    add_common(extract, false, false);
    CLI::App* adapt = app.add_subcommand("adapt", "full capture-to-dataset pipeline");
    add_common(adapt, true, false);
    adapt->add_option("--timing-log", timing_log,
                      "write per-phase timing JSON to this path");
    CLI::App* exp = app.add_subcommand("export", "rebuild index.json from written samples");
    add_common(exp, true, false);
    CLI::App* sim = app.add_subcommand("simulate", "deterministic conveyor simulation");
    add_common(sim, false, true);
    CLI::App* prop = app.add_subcommand("propagate", "shift first-frame boxes along the belt");
    add_common(prop, false, false);
    CLI::App* evalsub = app.add_subcommand("eval-annotations",
                                           "compare auto vs manual masks");
    add_common(evalsub, false, false);
    CLI::App* simil = app.add_subcommand("similarity",
                                         "histogram distances per adaptation mode");
    add_common(simil, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (extract->parsed()) return cmd_extract(config, out_dir, jobs);
    if (adapt->parsed()) return cmd_adapt(config, out_dir, mode, jobs, timing_log);
    if (exp->parsed()) return cmd_export(config, out_dir, mode);
    if (sim->parsed()) return cmd_simulate(config, out_dir, policy, seed);
    if (prop->parsed()) return cmd_propagate(config, out_dir);
    if (evalsub->parsed()) return cmd_eval(config, out_dir);
    if (simil->parsed()) return cmd_similarity(config, out_dir, jobs);
    return kExitUsage;
}
