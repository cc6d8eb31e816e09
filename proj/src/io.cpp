#include "conenav/io.hpp"

#include <algorithm>
#include <cmath>

#include "conenav/svg.hpp"

namespace conenav {

void write_trajectory_csv(const Trajectory& traj, const ControllerConfig& cfg, std::ostream& out) {
    (void)cfg;
    out << "# format_version=1\n";
    const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
    out << "t";
    for (Eigen::Index i = 0; i < n; ++i) out << ",x_" << (i + 1);
    out << ",distance,lyapunov,mode\n";
    for (std::size_t j = 0; j < traj.states.size(); ++j) {
        out << format_fixed(traj.times[j], 6);
        for (Eigen::Index i = 0; i < n; ++i) out << "," << format_fixed(traj.states[j][i], 9);
        const StepRecord& rec = traj.steps[j];
        out << "," << format_fixed(rec.obstacle_distance, 9) << ","
            << format_fixed(0.5 * rec.goal_distance * rec.goal_distance, 9) << "," << to_string(rec.mode)
            << "\n";
    }
}

void write_trajectory_svg(const Trajectory& traj, const Environment& env, const ControllerConfig& cfg,
                          std::ostream& out) {
    double xmin = cfg.goal[0], xmax = cfg.goal[0], ymin = cfg.goal[1], ymax = cfg.goal[1];
    auto grow = [&](double x, double y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    };
    for (const auto& x : traj.states) grow(x[0], x[1]);
    for (const auto& prim : env.obstacles) {
        if (const Ball* b = std::get_if<Ball>(&prim)) {
            grow(b->center[0] - b->radius, b->center[1] - b->radius);
            grow(b->center[0] + b->radius, b->center[1] + b->radius);
        }
    }
    const double pad = 0.5;
    SvgWriter svg(out, xmin - pad, ymin - pad, xmax + pad, ymax + pad);
    for (const auto& prim : env.obstacles) {
        if (const Ball* b = std::get_if<Ball>(&prim)) {
            svg.circle(b->center[0], b->center[1], b->radius, "#505050", "", 0.0);
        }
    }
    std::vector<std::pair<double, double>> pts;
    pts.reserve(traj.states.size());
    for (const auto& x : traj.states) pts.emplace_back(x[0], x[1]);
    svg.polyline(pts, "#7a2ea0", 0.04);
    if (!pts.empty()) svg.circle(pts.front().first, pts.front().second, 0.08, "#c0392b", "", 0.0);
    svg.circle(cfg.goal[0], cfg.goal[1], 0.08, "#f2c511", "", 0.0);
}

void write_scan_csv(const LidarScan& scan, std::ostream& out) {
    out << "# format_version=1\n";
    out << "theta,range\n";
    for (std::size_t j = 0; j < scan.angles.size(); ++j) {
        out << format_fixed(scan.angles[j], 9) << "," << format_fixed(scan.ranges[j], 9) << "\n";
    }
}

void write_scan_svg(const LidarScan& scan, const Vec& origin, std::ostream& out) {
    const double R = scan.max_range;
    SvgWriter svg(out, origin[0] - 1.2 * R, origin[1] - 1.2 * R, origin[0] + 1.2 * R, origin[1] + 1.2 * R, 200.0);
    svg.circle(origin[0], origin[1], R, "none", "#cccccc", 0.004);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(scan.angles.size() + 1);
    for (std::size_t j = 0; j < scan.angles.size(); ++j) {
        pts.emplace_back(origin[0] + scan.ranges[j] * std::cos(scan.angles[j]),
                         origin[1] + scan.ranges[j] * std::sin(scan.angles[j]));
    }
    if (!pts.empty()) pts.push_back(pts.front());
    svg.polyline(pts, "#1f6fb4", 0.005);
    svg.circle(origin[0], origin[1], 0.01 * R, "#c0392b", "", 0.0);
}

nlohmann::ordered_json trajectory_summary(const Trajectory& traj) {
    nlohmann::ordered_json doc;
    doc["format_version"] = 1;
    doc["outcome"] = to_string(traj.outcome);
    doc["steps"] = traj.times.size();
    doc["duration"] = traj.times.empty() ? 0.0 : traj.times.back();
    doc["final_goal_distance"] = traj.steps.empty() ? 0.0 : traj.steps.back().goal_distance;
    doc["min_distance"] = traj.min_recorded_distance();
    doc["max_lyapunov_increase"] = traj.max_goal_distance_increase();
    std::size_t margin_flags = 0;
    for (const auto& s : traj.steps) margin_flags += s.margin_violation ? 1 : 0;
    doc["margin_violation_steps"] = margin_flags;
    return doc;
}

nlohmann::ordered_json batch_summary_json(const BatchSummary& summary) {
    nlohmann::ordered_json doc;
    doc["format_version"] = 1;
    doc["total"] = summary.total;
    doc["converged"] = summary.converged;
    doc["timeouts"] = summary.timeouts;
    doc["safety_violations"] = summary.safety_violations;
    doc["equilibrium_traps"] = summary.equilibrium_traps;
    doc["min_distance"] = summary.min_distance;
    doc["max_min_distance_violation"] = summary.max_min_distance_violation;
    doc["max_lyapunov_increase"] = summary.max_lyapunov_increase;
    return doc;
}

}  // namespace conenav
