#include "sortforge/cli/manifest.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sortforge::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw std::runtime_error("manifest: field \"" + field + "\": " + what);
}

const json& require(const json& obj, const std::string& field, const std::string& prefix) {
    const auto it = obj.find(field);
    if (it == obj.end()) fail(prefix.empty() ? field : prefix + "." + field, "missing");
    return *it;
}

double require_number(const json& obj, const std::string& field, const std::string& prefix) {
    const json& v = require(obj, field, prefix);
    if (!v.is_number()) fail(prefix.empty() ? field : prefix + "." + field, "must be a number");
    return v.get<double>();
}

std::string require_string(const json& obj, const std::string& field,
                           const std::string& prefix) {
    const json& v = require(obj, field, prefix);
    if (!v.is_string() || v.get<std::string>().empty())
        fail(prefix.empty() ? field : prefix + "." + field, "must be a non-empty string");
    return v.get<std::string>();
}

Eigen::Vector3d require_vec3(const json& obj, const std::string& field,
                             const std::string& prefix) {
    const json& v = require(obj, field, prefix);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number())
        fail(prefix.empty() ? field : prefix + "." + field, "must be an array of 3 numbers");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

std::string resolve_path(const std::filesystem::path& base, const std::string& rel,
                         const std::string& field) {
    std::filesystem::path p(rel);
    if (p.is_relative()) p = base / p;
    if (!std::filesystem::exists(p)) fail(field, "file does not exist: " + p.string());
    return p.string();
}

geometry::RigidPose parse_pose(const json& obj, const std::string& field,
                               const geometry::FrameId& from, const geometry::FrameId& to) {
    geometry::RigidPose pose;
    pose.from = from;
    pose.to = to;
    pose.rotation = geometry::axis_angle_to_matrix(require_vec3(obj, "axis_angle", field));
    pose.translation = require_vec3(obj, "translation", field);
    try {
        geometry::validate_pose(pose);
    } catch (const std::exception& e) {
        fail(field, e.what());
    }
    return pose;
}

} // namespace

CaptureManifest ingest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("manifest: cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("manifest: invalid JSON in " + path + ": " + e.what());
    }
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    CaptureManifest m;
    const json& target = require(doc, "target", "");
    m.d_t = require_number(target, "d_t", "target");
    if (m.d_t <= 0.0) fail("target.d_t", "must be positive");
    m.background_path =
        resolve_path(base, require_string(target, "background", "target"), "target.background");
    m.target_patch_path = resolve_path(
        base, require_string(target, "object_patch", "target"), "target.object_patch");

    const json& intr = require(doc, "intrinsics", "");
    m.intrinsics.focal = require_number(intr, "focal", "intrinsics");
    m.intrinsics.cx = require_number(intr, "cx", "intrinsics");
    m.intrinsics.cy = require_number(intr, "cy", "intrinsics");
    m.intrinsics.width = static_cast<int>(require_number(intr, "width", "intrinsics"));
    m.intrinsics.height = static_cast<int>(require_number(intr, "height", "intrinsics"));
    if (m.intrinsics.focal <= 0.0) fail("intrinsics.focal", "must be positive");
    if (m.intrinsics.width < 1 || m.intrinsics.height < 1)
        fail("intrinsics.width/height", "must be positive");

    if (const auto it = doc.find("chroma"); it != doc.end()) {
        m.chroma.key_hue = require_number(*it, "key_hue", "chroma");
        m.chroma.hue_tolerance = require_number(*it, "hue_tolerance", "chroma");
        m.chroma.min_saturation = require_number(*it, "min_saturation", "chroma");
        m.chroma.min_value = require_number(*it, "min_value", "chroma");
    }
    if (const auto it = doc.find("extraction"); it != doc.end()) {
        if (it->contains("band_radius"))
            m.band_radius = static_cast<int>(require_number(*it, "band_radius", "extraction"));
        if (it->contains("matte_epsilon"))
            m.matte.epsilon = require_number(*it, "matte_epsilon", "extraction");
        if (it->contains("window_radius"))
            m.matte.window_radius =
                static_cast<int>(require_number(*it, "window_radius", "extraction"));
        if (m.band_radius < 1) fail("extraction.band_radius", "must be at least 1");
    }
    if (const auto it = doc.find("clahe"); it != doc.end()) {
        m.clahe.tile_cols = static_cast<int>(require_number(*it, "tile_cols", "clahe"));
        m.clahe.tile_rows = static_cast<int>(require_number(*it, "tile_rows", "clahe"));
        m.clahe.clip_limit = require_number(*it, "clip_limit", "clahe");
        if (m.clahe.tile_cols < 1 || m.clahe.tile_rows < 1)
            fail("clahe.tile_cols/tile_rows", "must be at least 1");
        if (m.clahe.clip_limit < 1.0) fail("clahe.clip_limit", "must be at least 1");
    }
    if (const auto it = doc.find("scale_invert"); it != doc.end()) {
        if (!it->is_boolean()) fail("scale_invert", "must be a boolean");
        m.scale_invert = it->get<bool>();
    }

    const json& captures = require(doc, "captures", "");
    if (!captures.is_array() || captures.empty())
        fail("captures", "must be a non-empty array");
    std::set<std::string> seen_ids;
    for (std::size_t i = 0; i < captures.size(); ++i) {
        const json& c = captures[i];
        const std::string prefix = "captures[" + std::to_string(i) + "]";
        Capture cap;
        cap.id = require_string(c, "id", prefix);
        if (!seen_ids.insert(cap.id).second) fail(prefix + ".id", "duplicate id " + cap.id);
        cap.image_path =
            resolve_path(base, require_string(c, "image", prefix), prefix + ".image");
        cap.category = require_string(c, "category", prefix);
        cap.d_s = require_number(c, "d_s", prefix);
        if (cap.d_s <= 0.0) fail(prefix + ".d_s", "must be positive");
        cap.marker_pose =
            parse_pose(require(c, "marker_pose", prefix), prefix + ".marker_pose",
                       "camera", "marker");
        cap.object_pose =
            parse_pose(require(c, "object_pose", prefix), prefix + ".object_pose",
                       "marker", "object");
        const Eigen::Vector3d extent = require_vec3(c, "model_extent", prefix);
        if (extent.minCoeff() < 0.0) fail(prefix + ".model_extent", "must be non-negative");
        cap.extent = {extent.x(), extent.y(), extent.z()};
        m.captures.push_back(std::move(cap));
    }
    return m;
}

} // namespace sortforge::cli
