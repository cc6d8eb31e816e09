#include "conenav/scenes.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

namespace conenav {

namespace {

using nlohmann::json;

constexpr double kWallLipschitz = 4.1231056256176605;  // sqrt(17), bound on ||grad(4 sin x1 -+ x2 - 5)||

ImplicitRegion lower_wall() {
    ImplicitRegion region;
    region.name = "lower-wall";
    region.level = [](const Vec& x) { return 4.0 * std::sin(x[0]) - x[1] - 5.0; };
    region.level_gradient = [](const Vec& x) {
        Vec g(2);
        g[0] = 4.0 * std::cos(x[0]);
        g[1] = -1.0;
        return g;
    };
    region.lipschitz_bound = kWallLipschitz;
    return region;
}

ImplicitRegion upper_wall() {
    ImplicitRegion region;
    region.name = "upper-wall";
    region.level = [](const Vec& x) { return 4.0 * std::sin(x[0]) + x[1] - 5.0; };
    region.level_gradient = [](const Vec& x) {
        Vec g(2);
        g[0] = 4.0 * std::cos(x[0]);
        g[1] = 1.0;
        return g;
    };
    region.lipschitz_bound = kWallLipschitz;
    return region;
}

Vec make_vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

Environment corridor_scene(const SceneParams& params) {
    Environment env;
    env.reach_margin = params.reach_margin;
    env.obstacles.emplace_back(lower_wall());
    env.obstacles.emplace_back(upper_wall());
    // Disc obstacles centered at ((4q+3) pi/2, 0), radius 2: the level sets
    // 4 - (x1 - c)^2 - x2^2 = 0 are exactly these circles, so ball
    // primitives represent them with analytic distance queries. The
    // infinite family is truncated to the window plus sensing padding.
    const double lo = params.window_min - params.sensing_pad;
    const double hi = params.window_max + params.sensing_pad;
    const double spacing = std::numbers::pi / 2.0;
    const int q_lo = static_cast<int>(std::ceil((lo / spacing - 3.0) / 4.0));
    const int q_hi = static_cast<int>(std::floor((hi / spacing - 3.0) / 4.0));
    for (int q = q_lo; q <= q_hi; ++q) {
        env.obstacles.emplace_back(Ball{make_vec2((4.0 * q + 3.0) * spacing, 0.0), 2.0});
    }
    return env;
}

}  // namespace

SphereWorld random_sphere_world(const SceneParams& params) {
    if (params.dimension < 2) throw InputError("random_sphere_world: dimension must be >= 2");
    if (params.obstacle_count < 0) throw InputError("random_sphere_world: negative obstacle count");

    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SphereWorld world;
    world.workspace = Ball{Vec::Zero(params.dimension), params.workspace_radius};

    const int wanted = params.obstacle_count;
    for (int attempt = 0; attempt < 100000 && static_cast<int>(world.obstacles.size()) < wanted; ++attempt) {
        Ball candidate;
        candidate.radius = params.min_obstacle_radius +
                           unit(rng) * (params.max_obstacle_radius - params.min_obstacle_radius);
        candidate.center = Vec(params.dimension);
        const double reach = params.workspace_radius - candidate.radius - params.clearance;
        for (int i = 0; i < params.dimension; ++i) candidate.center[i] = (2.0 * unit(rng) - 1.0) * reach;
        if (candidate.center.norm() + candidate.radius + params.clearance > params.workspace_radius) continue;
        bool clear = true;
        for (const auto& other : world.obstacles) {
            if ((candidate.center - other.center).norm() <
                candidate.radius + other.radius + params.clearance) {
                clear = false;
                break;
            }
        }
        if (clear) world.obstacles.push_back(std::move(candidate));
    }
    if (static_cast<int>(world.obstacles.size()) < wanted) {
        throw NumericalError("random_sphere_world: could not place obstacles within budget");
    }
    const SphereWorldValidation report = validate_sphere_world(to_environment(world));
    if (!report.pass) throw NumericalError("random_sphere_world: generated world fails validation");
    return world;
}

Vec sample_interior_goal(const SphereWorld& world, double clearance, std::uint64_t seed) {
    if (!world.workspace) throw InputError("sample_interior_goal: world has no workspace ball");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Environment env = to_environment(world);
    Vec x(world.workspace->center.size());
    for (int attempt = 0; attempt < 100000; ++attempt) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            x[i] = (2.0 * unit(rng) - 1.0) * world.workspace->radius;
        }
        if (!contains(env, x)) continue;
        if (boundary_query(env, x).distance >= clearance) return x;
    }
    throw NumericalError("sample_interior_goal: rejection sampling exhausted its budget");
}

Environment build_scene(const std::string& name, const SceneParams& params) {
    if (name == "fig2") {
        Environment env;
        env.reach_margin = params.reach_margin;
        env.obstacles.emplace_back(Ball{make_vec2(2.0, 2.0), 0.5});
        return env;
    }
    if (name == "paper-corridor") return corridor_scene(params);
    if (name == "sphere-world") {
        return to_environment(random_sphere_world(params), params.reach_margin);
    }
    throw InputError("build_scene: unknown scene '" + name + "'");
}

SceneParams scene_params_from_json(const json& doc) {
    SceneParams params;
    if (doc.is_null()) return params;
    if (doc.contains("window_min")) params.window_min = doc.at("window_min").get<double>();
    if (doc.contains("window_max")) params.window_max = doc.at("window_max").get<double>();
    if (doc.contains("sensing_pad")) params.sensing_pad = doc.at("sensing_pad").get<double>();
    if (doc.contains("reach_margin")) params.reach_margin = doc.at("reach_margin").get<double>();
    if (doc.contains("dimension")) params.dimension = doc.at("dimension").get<int>();
    if (doc.contains("obstacle_count")) params.obstacle_count = doc.at("obstacle_count").get<int>();
    if (doc.contains("seed")) params.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("workspace_radius")) params.workspace_radius = doc.at("workspace_radius").get<double>();
    if (doc.contains("min_obstacle_radius")) params.min_obstacle_radius = doc.at("min_obstacle_radius").get<double>();
    if (doc.contains("max_obstacle_radius")) params.max_obstacle_radius = doc.at("max_obstacle_radius").get<double>();
    if (doc.contains("clearance")) params.clearance = doc.at("clearance").get<double>();
    return params;
}

Environment load_environment(const json& doc) {
    if (!doc.is_object()) throw InputError("environment description must be a JSON object");
    if (doc.contains("format_version") && doc.at("format_version").get<int>() != 1) {
        throw InputError("environment description: unsupported format_version");
    }

    Environment env;
    if (doc.contains("builtin")) {
        SceneParams params = scene_params_from_json(doc.value("builtin_params", json()));
        env = build_scene(doc.at("builtin").get<std::string>(), params);
    }
    auto parse_ball = [](const json& ball) {
        const auto center = ball.at("center").get<std::vector<double>>();
        if (center.size() < 2) throw InputError("environment description: ball center needs >= 2 coordinates");
        Ball b;
        b.center = Eigen::Map<const Vec>(center.data(), static_cast<Eigen::Index>(center.size()));
        b.radius = ball.at("radius").get<double>();
        if (!(b.radius > 0.0)) throw InputError("environment description: ball radius must be positive");
        return b;
    };
    if (doc.contains("workspace")) env.workspace = parse_ball(doc.at("workspace"));
    if (doc.contains("balls")) {
        for (const auto& ball : doc.at("balls")) env.obstacles.emplace_back(parse_ball(ball));
    }
    if (doc.contains("reach_margin")) env.reach_margin = doc.at("reach_margin").get<double>();
    return env;
}

Environment load_environment_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open environment file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw InputError("environment file '" + path + "': " + e.what());
    }
    return load_environment(doc);
}

}  // namespace conenav
