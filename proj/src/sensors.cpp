#include "conenav/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace conenav {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double LidarScan::angle_step() const {
    return angles.empty() ? 0.0 : 2.0 * std::numbers::pi / static_cast<double>(angles.size());
}

LidarScan simulate_lidar(const Environment& env, const Vec& x, int count, double max_range, Exec exec) {
    require_point(x, "simulate_lidar");
    if (x.size() != 2) throw InputError("simulate_lidar: planar scenes only (n = 2)");
    if (count < 8) throw InputError("simulate_lidar: need at least 8 beams");
    if (!(max_range > 0.0)) throw InputError("simulate_lidar: max_range must be positive");
    if (!contains(env, x)) throw InputError("simulate_lidar: scan origin is outside the free space");

    LidarScan scan;
    scan.max_range = max_range;
    scan.angles.resize(static_cast<std::size_t>(count));
    scan.ranges.resize(static_cast<std::size_t>(count));
    const double step = 2.0 * std::numbers::pi / count;
    for (int j = 0; j < count; ++j) scan.angles[static_cast<std::size_t>(j)] = -std::numbers::pi + j * step;

    // Whole-scan fast path: when the certified distance bound already
    // exceeds the radial range, every beam saturates at exactly max_range.
    if (distance_lower_bound(env, x) > max_range) {
        std::fill(scan.ranges.begin(), scan.ranges.end(), max_range);
        return scan;
    }

    for_each_index(count, exec, [&](std::ptrdiff_t j) {
        Vec dir(2);
        const double theta = scan.angles[static_cast<std::size_t>(j)];
        dir[0] = std::cos(theta);
        dir[1] = std::sin(theta);
        scan.ranges[static_cast<std::size_t>(j)] = ray_cast(env, x, dir, max_range);
    });
    return scan;
}

ScanReduction scan_to_safety_input(const LidarScan& scan) {
    if (scan.ranges.empty()) throw InputError("scan_to_safety_input: empty scan");
    std::size_t best = 0;
    for (std::size_t j = 1; j < scan.ranges.size(); ++j) {
        if (scan.ranges[j] < scan.ranges[best]) best = j;  // strict: smallest index wins ties
    }
    ScanReduction out;
    out.argmin_index = best;
    out.argmin_angle = scan.angles[best];
    out.input.distance = scan.ranges[best];
    out.input.gradient = Vec(2);
    out.input.gradient[0] = -std::cos(out.argmin_angle);
    out.input.gradient[1] = -std::sin(out.argmin_angle);
    out.bearing_reliable = out.input.distance < scan.max_range;
    return out;
}

double disparity_to_depth(double px_left, double px_right, const StereoRig& rig) {
    const double disparity = std::abs(px_left - px_right);
    if (disparity == 0.0) return kInf;
    return rig.focal_length * rig.baseline / disparity;
}

Eigen::Vector3d pixel_to_point(const Eigen::Vector2d& left, const Eigen::Vector2d& right, const StereoRig& rig) {
    if (left.y() != right.y()) throw InputError("pixel_to_point: pair is not rectified (row mismatch)");
    const double disparity = left.x() - right.x();
    if (!(disparity > 0.0)) throw InputError("pixel_to_point: disparity must be positive");
    Eigen::Vector3d p;
    p.x() = rig.baseline * left.x() / disparity;
    p.y() = rig.baseline * left.y() / disparity;
    p.z() = rig.focal_length * rig.baseline / disparity;
    return p;
}

std::optional<DepthReduction> depth_map_to_safety_input(const DepthMap& dm, const StereoRig& rig) {
    double best_distance = kInf;
    int best_u = -1, best_v = -1;
    Eigen::Vector3d best_robot = Eigen::Vector3d::Zero();
    for (int v = 0; v < dm.height; ++v) {
        for (int u = 0; u < dm.width; ++u) {
            const double z = dm.at(u, v);
            if (!std::isfinite(z)) continue;
            Eigen::Vector3d p((u - dm.cx) / dm.focal_length * z, (v - dm.cy) / dm.focal_length * z, z);
            Eigen::Vector3d robot = rig.left_rotation * p + rig.left_translation;
            // Minimize the robot-frame distance, not raw depth: off-axis
            // pixels at small z can be farther than an on-axis pixel.
            const double d = robot.norm();
            if (d < best_distance) {
                best_distance = d;
                best_u = u;
                best_v = v;
                best_robot = robot;
            }
        }
    }
    if (best_u < 0) return std::nullopt;

    DepthReduction out;
    out.pixel_u = best_u;
    out.pixel_v = best_v;
    out.input.distance = best_distance;
    // The raw bearing points from the robot toward the obstacle; negate to
    // match the distance-gradient convention the controller consumes.
    Vec g(3);
    const Eigen::Vector3d unit = -best_robot / best_distance;
    g << unit.x(), unit.y(), unit.z();
    out.input.gradient = g;
    return out;
}

DepthMap simulate_depth_map(const Environment& env, const CameraPose& robot_pose, const StereoRig& rig,
                            int width, int height, double max_range, Exec exec) {
    if (width <= 0 || height <= 0) throw InputError("simulate_depth_map: resolution must be positive");
    if (!(max_range > 0.0)) throw InputError("simulate_depth_map: max_range must be positive");

    DepthMap dm;
    dm.width = width;
    dm.height = height;
    dm.focal_length = rig.focal_length;
    dm.cx = (width - 1) / 2.0;
    dm.cy = (height - 1) / 2.0;
    dm.depths.assign(static_cast<std::size_t>(width) * height, kInf);

    const Eigen::Index env_dim = environment_dimension(env);
    if (env_dim != 0 && env_dim != 3) throw InputError("simulate_depth_map: spatial scenes only (n = 3)");

    const Eigen::Matrix3d cam_to_world = robot_pose.rotation * rig.left_rotation;
    const Eigen::Vector3d cam_origin = robot_pose.rotation * rig.left_translation + robot_pose.translation;
    Vec origin(3);
    origin << cam_origin.x(), cam_origin.y(), cam_origin.z();

    for_each_index(static_cast<std::ptrdiff_t>(dm.depths.size()), exec, [&](std::ptrdiff_t idx) {
        const int u = static_cast<int>(idx % width);
        const int v = static_cast<int>(idx / width);
        Eigen::Vector3d ray_cam((u - dm.cx) / rig.focal_length, (v - dm.cy) / rig.focal_length, 1.0);
        const double stretch = ray_cam.norm();
        const Eigen::Vector3d dir_world = cam_to_world * (ray_cam / stretch);
        Vec dir(3);
        dir << dir_world.x(), dir_world.y(), dir_world.z();
        const double t = ray_cast(env, origin, dir, max_range);
        if (t < max_range) {
            dm.depths[static_cast<std::size_t>(idx)] = t / stretch;  // z-component in the camera frame
        }
    });
    return dm;
}

}  // namespace conenav
