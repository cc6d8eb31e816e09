#include <doctest.h>

#include <cmath>
#include <random>

#include "conenav/sensors.hpp"
#include "test_support.hpp"

using namespace conenav;
using namespace conenav::testing;

TEST_CASE("simulate_lidar: saturation and a straight hit") {
    const Environment env = fig2_environment();

    SUBCASE("far from the obstacle every beam saturates") {
        const LidarScan scan = simulate_lidar(env, vec2(-3, -3), 90, 0.5);
        for (double r : scan.ranges) CHECK(r == 0.5);
    }
    SUBCASE("vertical beam measures the gap to the disc") {
        const LidarScan scan = simulate_lidar(env, vec2(2, 1.2), 360, 0.5);
        // theta = pi/2 lives at index 270 with the -pi start.
        CHECK(scan.angles[270] == doctest::Approx(std::numbers::pi / 2.0));
        CHECK(scan.ranges[270] == doctest::Approx(0.3).epsilon(1e-7));
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(simulate_lidar(env, vec2(2, 2), 360, 0.5), InputError);   // inside obstacle
        CHECK_THROWS_AS(simulate_lidar(env, vec2(0, 0), 4, 0.5), InputError);     // too few beams
        CHECK_THROWS_AS(simulate_lidar(env, vec3(0, 0, 0), 360, 0.5), InputError);  // planar only
    }
}

TEST_CASE("simulate_lidar: corridor pose just beyond sensing range") {
    const Environment env = corridor_environment();
    const Vec x = vec2(0, 3);
    // Oracle distance ~0.5035 exceeds the 0.5 range, so the scan saturates.
    CHECK(corridor_distance_oracle(x) > 0.5);
    const LidarScan scan = simulate_lidar(env, x, 360, 0.5);
    for (double r : scan.ranges) CHECK(r == 0.5);
}

TEST_CASE("scan_to_safety_input") {
    LidarScan scan;
    scan.max_range = 0.5;
    const int count = 360;
    const double step = 2.0 * std::numbers::pi / count;
    for (int j = 0; j < count; ++j) {
        scan.angles.push_back(-std::numbers::pi + j * step);
        scan.ranges.push_back(0.5);
    }

    SUBCASE("all saturated: unreliable bearing") {
        const ScanReduction red = scan_to_safety_input(scan);
        CHECK(red.input.distance == 0.5);
        CHECK_FALSE(red.bearing_reliable);
    }
    SUBCASE("single minimum at pi/2") {
        scan.ranges[270] = 0.3;
        const ScanReduction red = scan_to_safety_input(scan);
        CHECK(red.input.distance == doctest::Approx(0.3));
        CHECK(red.argmin_angle == doctest::Approx(std::numbers::pi / 2.0));
        CHECK(red.input.gradient[0] == doctest::Approx(0.0));
        CHECK(red.input.gradient[1] == doctest::Approx(-1.0));
        CHECK(red.bearing_reliable);
    }
    SUBCASE("ties resolve to the smallest index") {
        scan.ranges[10] = 0.2;
        scan.ranges[20] = 0.2;
        const ScanReduction red = scan_to_safety_input(scan);
        CHECK(red.argmin_index == 10);
    }
}

TEST_CASE("lidar quantization bound on random disc scenes") {
    // A beam offset by delta from the true bearing exits a disc of radius r
    // at length <= d (1 + (1 + d/r)(1/cos(delta) - 1)); the flat-boundary
    // value d / cos(delta) is recovered as r -> infinity.
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int beams = 360;
    const double step = 2.0 * std::numbers::pi / beams;
    const double tol_ray = 1e-9;
    int tested = 0;
    while (tested < 100) {
        Environment env;
        const int discs = 1 + static_cast<int>(unit(rng) * 3);
        for (int i = 0; i < discs; ++i) {
            env.obstacles.emplace_back(
                Ball{vec2(-4.0 + 8.0 * unit(rng), -4.0 + 8.0 * unit(rng)), 0.3 + unit(rng)});
        }
        const Vec x = random_in_box(rng, vec2(-5, -5), vec2(5, 5));
        if (!contains(env, x)) continue;
        double d = std::numeric_limits<double>::infinity();
        double nearest_radius = 0.0;
        for (const auto& prim : env.obstacles) {
            const Ball& b = std::get<Ball>(prim);
            const double di = (x - b.center).norm() - b.radius;
            if (di < d) {
                d = di;
                nearest_radius = b.radius;
            }
        }
        if (!(d > 0.05 && d < 0.5)) continue;
        ++tested;
        const ScanReduction red = scan_to_safety_input(simulate_lidar(env, x, beams, 0.5));
        const double flat = 1.0 / std::cos(step / 2.0) - 1.0;
        // 1.01 absorbs the higher-order terms of the exit-length expansion.
        const double bound = 1.01 * d * flat * (1.0 + d / nearest_radius) + tol_ray;
        CHECK(red.input.distance >= d);
        CHECK(red.input.distance <= d + bound);
    }
}

TEST_CASE("disparity_to_depth") {
    StereoRig rig;
    rig.focal_length = 500.0;
    rig.baseline = 0.1;
    CHECK(disparity_to_depth(50.0, 0.0, rig) == doctest::Approx(1.0));
    CHECK(disparity_to_depth(25.0, 0.0, rig) == doctest::Approx(2.0));
    CHECK(std::isinf(disparity_to_depth(10.0, 10.0, rig)));
}

TEST_CASE("pixel_to_point formulas") {
    StereoRig rig;
    rig.focal_length = 500.0;
    rig.baseline = 0.1;

    const Eigen::Vector3d p = pixel_to_point({50.0, 0.0}, {0.0, 0.0}, rig);
    CHECK(p.x() == doctest::Approx(0.1));
    CHECK(p.y() == doctest::Approx(0.0));
    CHECK(p.z() == doctest::Approx(1.0));

    const Eigen::Vector3d principal = pixel_to_point({0.0, 0.0}, {-50.0, 0.0}, rig);
    CHECK(principal.x() == doctest::Approx(0.0));

    const Eigen::Vector3d off = pixel_to_point({50.0, 25.0}, {0.0, 25.0}, rig);
    CHECK(off.x() == doctest::Approx(0.1));
    CHECK(off.y() == doctest::Approx(0.05));
    CHECK(off.z() == doctest::Approx(1.0));

    CHECK_THROWS_AS(pixel_to_point({50.0, 1.0}, {0.0, 0.0}, rig), InputError);  // unrectified
    CHECK_THROWS_AS(pixel_to_point({0.0, 0.0}, {50.0, 0.0}, rig), InputError);  // negative disparity
}

TEST_CASE("stereo round trip recovers depth to 1e-9") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    StereoRig rig;
    rig.focal_length = 400.0 + 300.0 * unit(rng);
    rig.baseline = 0.05 + 0.2 * unit(rng);
    for (int i = 0; i < 1000; ++i) {
        const double z = 0.5 + 9.5 * unit(rng);
        const double x = (2.0 * unit(rng) - 1.0) * z;
        const double y = (2.0 * unit(rng) - 1.0) * z;
        const double ul = rig.focal_length * x / z;
        const double vl = rig.focal_length * y / z;
        const double ur = rig.focal_length * (x - rig.baseline) / z;
        CHECK(std::abs(disparity_to_depth(ul, ur, rig) - z) <= 1e-9);
        const Eigen::Vector3d p = pixel_to_point({ul, vl}, {ur, vl}, rig);
        // p_z and the depth formula agree exactly: identical arithmetic.
        CHECK(p.z() == disparity_to_depth(ul, ur, rig));
        CHECK(std::abs(p.x() - x) <= 1e-9 * std::max(1.0, std::abs(x)));
        CHECK(std::abs(p.y() - y) <= 1e-9 * std::max(1.0, std::abs(y)));
    }
}

TEST_CASE("simulate_depth_map and reduction on a spatial ball scene") {
    Environment env;
    env.obstacles.emplace_back(Ball{vec3(0, 0, 2), 0.5});

    StereoRig rig;  // identity pose: camera frame == robot frame
    rig.focal_length = 120.0;

    CameraPose robot;  // at the origin, looking along +z

    const int w = 21, h = 21;
    const DepthMap dm = simulate_depth_map(env, robot, rig, w, h, 100.0);

    SUBCASE("center pixel sees the near cap") {
        CHECK(dm.at(10, 10) == doctest::Approx(1.5).epsilon(1e-7));
    }
    SUBCASE("per-pixel agreement with the analytic sphere intersection") {
        for (int v = 0; v < h; ++v) {
            for (int u = 0; u < w; ++u) {
                Eigen::Vector3d dir((u - dm.cx) / dm.focal_length, (v - dm.cy) / dm.focal_length, 1.0);
                dir.normalize();
                const Eigen::Vector3d center(0, 0, 2);
                const double b = dir.dot(center);
                const double disc = b * b - (center.squaredNorm() - 0.25);
                if (disc < 0.0) {
                    CHECK(std::isinf(dm.at(u, v)));
                } else {
                    const double t = b - std::sqrt(disc);
                    const double depth = t * dir.z();
                    CHECK(dm.at(u, v) == doctest::Approx(depth).epsilon(1e-6));
                }
            }
        }
    }
    SUBCASE("reduction returns the nearest robot-frame distance and inward bearing") {
        const auto red = depth_map_to_safety_input(dm, rig);
        REQUIRE(red.has_value());
        CHECK(red->input.distance == doctest::Approx(1.5).epsilon(1e-6));
        CHECK(red->input.gradient[2] == doctest::Approx(-1.0).epsilon(1e-6));
        CHECK(std::abs(red->input.gradient.norm() - 1.0) <= 1e-12);
    }
    SUBCASE("empty map signals no obstacle") {
        Environment empty;
        const DepthMap blank = simulate_depth_map(empty, robot, rig, 9, 9, 10.0);
        for (double d : blank.depths) CHECK(std::isinf(d));
        CHECK_FALSE(depth_map_to_safety_input(blank, rig).has_value());
    }
}

TEST_CASE("fronto-parallel wall gives constant depth") {
    Environment env;
    ImplicitRegion wall;
    wall.name = "wall";
    wall.level = [](const Vec& y) { return y[2] - 2.0; };  // blocked beyond z = 2
    wall.level_gradient = [](const Vec& y) {
        (void)y;
        Vec g(3);
        g << 0, 0, 1;
        return g;
    };
    wall.lipschitz_bound = 1.0;
    env.obstacles.emplace_back(wall);

    StereoRig rig;
    rig.focal_length = 60.0;
    const DepthMap dm = simulate_depth_map(env, CameraPose{}, rig, 11, 11, 50.0);
    for (int v = 0; v < dm.height; ++v) {
        for (int u = 0; u < dm.width; ++u) {
            CHECK(dm.at(u, v) == doctest::Approx(2.0).epsilon(1e-7));
        }
    }
}

TEST_CASE("produced bearings are unit") {
    const Environment env = fig2_environment();
    std::mt19937_64 rng(71);
    int tested = 0;
    while (tested < 50) {
        const Vec x = random_in_box(rng, vec2(1, 1), vec2(3, 3));
        if (!contains(env, x)) continue;
        const ScanReduction red = scan_to_safety_input(simulate_lidar(env, x, 180, 0.8));
        if (!red.bearing_reliable) continue;
        ++tested;
        CHECK(std::abs(red.input.gradient.norm() - 1.0) <= 1e-12);
    }
}
