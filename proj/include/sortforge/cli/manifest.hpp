#pragma once

#include "sortforge/coloradapt/coloradapt.hpp"
#include "sortforge/extraction/extraction.hpp"
#include "sortforge/geometry/pose.hpp"
#include "sortforge/geometry/projection.hpp"

#include <string>
#include <vector>

namespace sortforge::cli {

// One captured view of an object on the capture rig.
struct Capture {
    std::string id;
    std::string image_path;  // resolved absolute/relative-to-cwd path
    std::string category;
    double d_s = 0.0;                 // camera to source board distance, meters
    geometry::RigidPose marker_pose;  // camera <- marker
    geometry::RigidPose object_pose;  // marker <- object
    geometry::ModelExtent extent;     // object bounding cuboid, meters
};

// Fully validated capture manifest: every referenced file existed at load
// time and every pose passed its rotation checks.
struct CaptureManifest {
    double d_t = 0.0;  // camera to target board distance, meters
    std::string background_path;
    std::string target_patch_path;
    extraction::ChromaKeySpec chroma;
    geometry::PinholeIntrinsics intrinsics;
    int band_radius = 5;
    extraction::MatteParams matte;
    coloradapt::ClaheSpec clahe;
    bool scale_invert = false;
    std::vector<Capture> captures;
};

// Parses and validates the JSON manifest at `path`. Relative file paths are
// resolved against the manifest's directory. Throws std::runtime_error with
// a field-level message on missing files, schema violations, or dangling
// paths.
CaptureManifest ingest(const std::string& path);

} // namespace sortforge::cli
