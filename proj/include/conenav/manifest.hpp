#pragma once

#include <optional>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "conenav/scenes.hpp"
#include "conenav/sim.hpp"

namespace conenav {

struct OutputSpec {
    std::string directory = "out";
    std::set<std::string> formats = {"csv", "svg", "json"};
};

/// Grid request for field export: axis-aligned bounding box with a per-axis
/// resolution.
struct FieldSpec {
    Vec bounds_min;
    Vec bounds_max;
    std::vector<int> resolution;
};

/// One run description: scene reference (builtin name or environment file
/// path), controller and simulation sections, optional field grid, outputs.
struct RunManifest {
    int format_version = 1;
    std::string scene;
    nlohmann::json scene_params;  // empty object when unused
    ControllerConfig controller;
    ControllerKind kind = ControllerKind::SmoothExact;
    std::variant<Vec, SamplingSpec> initial;
    double dt = 1e-3;
    double max_time = 100.0;
    double goal_tolerance = 0.05;
    int lidar_beams = 360;
    std::optional<FieldSpec> field;
    OutputSpec outputs;
};

RunManifest parse_manifest(const nlohmann::json& doc);
nlohmann::ordered_json serialize_manifest(const RunManifest& manifest);
RunManifest load_manifest_file(const std::string& path);

/// Instantiates the scene the manifest references (builtin or file). When
/// the scene leaves the reach margin unspecified it defaults to the
/// controller's outer margin.
Environment realize_scene(const RunManifest& manifest);

/// Assembles the simulator configuration for the manifest.
SimConfig realize_sim_config(const RunManifest& manifest);

ControllerKind controller_kind_from_string(const std::string& name);

}  // namespace conenav
