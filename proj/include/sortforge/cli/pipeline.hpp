#pragma once

#include "sortforge/cli/manifest.hpp"
#include "sortforge/coloradapt/coloradapt.hpp"
#include "sortforge/imgcore/image.hpp"

#include <string>
#include <vector>

namespace sortforge::cli {

enum class Provenance { AUTO, MANUAL, PROPAGATED };

// One exported training sample: composite image plus its annotation files.
struct AnnotatedSample {
    std::string id;
    std::string category;
    std::string image_path;  // composite PNG, relative to the index
    std::string mask_path;   // binary mask PNG
    std::string alpha_path;  // 16-bit matte PNG
    imgcore::BoundingBox box;
    Provenance provenance = Provenance::AUTO;
    std::string source_id;
};

struct FailedCapture {
    std::string id;
    std::string reason;
};

struct DatasetIndex {
    std::vector<AnnotatedSample> samples;  // ordered by capture id
    std::vector<FailedCapture> failures;   // ordered by capture id
    std::vector<std::string> classes;
    std::string tool_version;
    std::string config_hash;
    std::string mode;

    std::string json() const;
};

// Wall-time samples recorded by the pipeline when timing is requested.
struct TimedEvent {
    std::string phase;  // ingest | extract | adapt | export
    double seconds = 0.0;
};

// Runs project -> chroma -> extract -> adapt -> export for every capture,
// writing per-sample files plus index.json into out_dir. Per-capture
// failures are recorded in the index rather than aborting the batch. Work
// fans out across `jobs` threads (<=0 picks the hardware count); outputs
// and the index are ordered by capture id regardless of completion order.
// When `timing` is non-null, per-phase wall times are appended to it.
DatasetIndex run_pipeline(const CaptureManifest& manifest, coloradapt::AdaptMode mode,
                          const std::string& out_dir, int jobs = 1,
                          std::vector<TimedEvent>* timing = nullptr);

// Aggregates timing events into a per-phase table normalized to 100 images.
struct PhaseTiming {
    std::string phase;
    double total_seconds = 0.0;
    std::uint64_t events = 0;
    double per_100_images = 0.0;
};
std::vector<PhaseTiming> report_collection_time(const std::vector<TimedEvent>& events,
                                                std::uint64_t image_count);
std::string timing_text(const std::vector<PhaseTiming>& table);
std::string timing_json(const std::vector<PhaseTiming>& table);

const char* mode_name(coloradapt::AdaptMode mode);
coloradapt::AdaptMode parse_mode(const std::string& name);  // throws on unknown

} // namespace sortforge::cli
