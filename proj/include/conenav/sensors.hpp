#pragma once

#include <optional>
#include <vector>

#include "conenav/control.hpp"
#include "conenav/geometry.hpp"
#include "conenav/parallel.hpp"
#include "conenav/types.hpp"

namespace conenav {

/// 360-degree range scan: uniform bearings theta_j = -pi + j * (2 pi / count)
/// with ranges saturated at `max_range`.
struct LidarScan {
    std::vector<double> angles;
    std::vector<double> ranges;
    double max_range = 0.0;
    double angle_step() const;
};

/// Reduction of a scan to the controller input. When the minimum range
/// saturates at the scan's max range the bearing carries no information and
/// `bearing_reliable` is false (the controller falls back to the nominal
/// branch since outer margin < sensing radius).
struct ScanReduction {
    SafetyInput input;
    double argmin_angle = 0.0;
    std::size_t argmin_index = 0;
    bool bearing_reliable = true;
};

/// Rectified parallel stereo pair: focal length in pixels, baseline in
/// meters, and the pose of the left camera in the robot frame (p_robot =
/// rotation * p_camera + translation).
struct StereoRig {
    double focal_length = 500.0;
    double baseline = 0.1;
    Eigen::Matrix3d left_rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d left_translation = Eigen::Vector3d::Zero();
};

/// Pose of a frame in its parent frame: p_parent = rotation * p + translation.
struct CameraPose {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();
};

/// Per-pixel depth (z in the camera frame), +infinity where nothing was hit.
struct DepthMap {
    int width = 0;
    int height = 0;
    double focal_length = 0.0;
    double cx = 0.0;  // principal point, pixels
    double cy = 0.0;
    std::vector<double> depths;  // row-major, depths[v * width + u]
    double at(int u, int v) const { return depths[static_cast<std::size_t>(v) * width + u]; }
};

/// Reduction of a depth map to the controller input, plus the minimizing
/// pixel for diagnostics.
struct DepthReduction {
    SafetyInput input;
    int pixel_u = 0;
    int pixel_v = 0;
};

/// Casts `count` rays from x at uniform bearings (planar scenes only) and
/// returns the polar range curve. Beams are independent, so the parallel
/// kernel is bit-identical to the serial reference.
LidarScan simulate_lidar(const Environment& env, const Vec& x, int count, double max_range,
                         Exec exec = Exec::Parallel);

/// Distance = min range, bearing = -(cos, sin) of the argmin angle
/// (smallest index wins ties).
ScanReduction scan_to_safety_input(const LidarScan& scan);

/// Depth from a rectified correspondence: focal * baseline / |disparity|.
/// Zero disparity signals infinite depth (+infinity).
double disparity_to_depth(double px_left, double px_right, const StereoRig& rig);

/// Camera-frame 3-D point of a rectified correspondence with positive
/// disparity. Pixel coordinates are measured from the principal point.
Eigen::Vector3d pixel_to_point(const Eigen::Vector2d& left, const Eigen::Vector2d& right, const StereoRig& rig);

/// Finds the pixel whose reconstructed point is nearest in the robot frame
/// and returns distance ||R_L p + p_L|| with the bearing normalized to the
/// distance-gradient convention (pointing from the obstacle toward the
/// robot). Empty when every depth is infinite (no obstacle in view).
std::optional<DepthReduction> depth_map_to_safety_input(const DepthMap& dm, const StereoRig& rig);

/// Renders a synthetic depth map by per-pixel ray casting through the
/// pinhole model (principal point at the image center). `robot_pose` places
/// the robot frame in the world; the rig places the camera in the robot
/// frame. Spatial scenes (n = 3) only.
DepthMap simulate_depth_map(const Environment& env, const CameraPose& robot_pose, const StereoRig& rig,
                            int width, int height, double max_range, Exec exec = Exec::Parallel);

}  // namespace conenav
