#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "conenav/geometry.hpp"
#include "conenav/sphere_world.hpp"

namespace conenav {

/// Window and generator knobs consumed by the builtin scenes. For the
/// sinusoidal corridor the window selects which obstacle centers are
/// instantiated: every center with first coordinate in
/// [window_min - sensing_pad, window_max + sensing_pad].
struct SceneParams {
    double window_min = -16.0;
    double window_max = 16.0;
    double sensing_pad = 2.5;  // sensing radius plus obstacle feature size
    double reach_margin = 0.4;
    // sphere-world generator
    int dimension = 2;
    int obstacle_count = 3;
    std::uint64_t seed = 0;
    double workspace_radius = 10.0;
    double min_obstacle_radius = 0.6;
    double max_obstacle_radius = 1.4;
    double clearance = 1.0;  // extra separation enforced between spheres
};

/// Builtin scenes:
///  - "fig2": the complement of a single ball at (2,2) with radius 0.5.
///  - "paper-corridor": the band between two sinusoidal walls minus a row
///    of radius-2 disc obstacles centered at ((4q+3) pi/2, 0).
///  - "sphere-world": seeded random sphere world (valid by construction).
/// Unknown names raise InputError.
Environment build_scene(const std::string& name, const SceneParams& params = {});

/// Seeded sphere-world generator used by the "sphere-world" scene and the
/// test suites; always passes validate_sphere_world.
SphereWorld random_sphere_world(const SceneParams& params);

/// Samples a goal for a sphere world: interior point with boundary distance
/// at least `clearance`, deterministic in `seed`.
Vec sample_interior_goal(const SphereWorld& world, double clearance, std::uint64_t seed);

/// Parses the environment-description JSON (workspace ball, ball list,
/// optional builtin scene reference). Schema documented in the README.
Environment load_environment(const nlohmann::json& doc);
Environment load_environment_file(const std::string& path);

/// Scene parameters from the optional "scene_params" JSON object.
SceneParams scene_params_from_json(const nlohmann::json& doc);

}  // namespace conenav
