#pragma once

#include <ostream>

#include <nlohmann/json.hpp>

#include "conenav/sensors.hpp"
#include "conenav/sim.hpp"

namespace conenav {

/// Trajectory CSV: t, x_1..x_n, distance, lyapunov (0.5 ||x - x_d||^2), mode.
void write_trajectory_csv(const Trajectory& traj, const ControllerConfig& cfg, std::ostream& out);

/// Planar path plot: obstacle discs, goal marker, trajectory polyline.
void write_trajectory_svg(const Trajectory& traj, const Environment& env, const ControllerConfig& cfg,
                          std::ostream& out);

/// Scan CSV: theta, range.
void write_scan_csv(const LidarScan& scan, std::ostream& out);

/// Polar plot of a scan around its origin.
void write_scan_svg(const LidarScan& scan, const Vec& origin, std::ostream& out);

nlohmann::ordered_json trajectory_summary(const Trajectory& traj);
nlohmann::ordered_json batch_summary_json(const BatchSummary& summary);

}  // namespace conenav
