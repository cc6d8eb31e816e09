#include "conenav/field.hpp"

#include <algorithm>
#include <cmath>

#include "conenav/sensors.hpp"
#include "conenav/svg.hpp"

namespace conenav {

FieldGrid export_field(const Environment& env, const ControllerConfig& cfg, const FieldSpec& spec,
                       ControllerKind kind, Exec exec) {
    validate(cfg);
    if (spec.bounds_min.size() != 2 || spec.bounds_max.size() != 2 || spec.resolution.size() != 2) {
        throw InputError("export_field: planar grids only (n = 2)");
    }
    if (spec.resolution[0] < 2 || spec.resolution[1] < 2) throw InputError("export_field: resolution too small");

    FieldGrid grid;
    grid.spec = spec;
    grid.nx = spec.resolution[0];
    grid.ny = spec.resolution[1];
    grid.cells.resize(static_cast<std::size_t>(grid.nx) * grid.ny);

    const double dx = (spec.bounds_max[0] - spec.bounds_min[0]) / grid.nx;
    const double dy = (spec.bounds_max[1] - spec.bounds_min[1]) / grid.ny;
    const double snap = 0.5 * std::hypot(dx, dy);

    for_each_index(static_cast<std::ptrdiff_t>(grid.cells.size()), exec, [&](std::ptrdiff_t idx) {
        const int ix = static_cast<int>(idx % grid.nx);
        const int iy = static_cast<int>(idx / grid.nx);
        FieldCell& cell = grid.cells[static_cast<std::size_t>(idx)];
        cell.center = Vec(2);
        cell.center[0] = spec.bounds_min[0] + (ix + 0.5) * dx;
        cell.center[1] = spec.bounds_min[1] + (iy + 0.5) * dy;
        if (!contains(env, cell.center)) {
            cell.masked = true;
            cell.velocity = Vec::Zero(2);
            return;
        }
        if (kind == ControllerKind::SmoothLidar) {
            const LidarScan scan = simulate_lidar(env, cell.center, 360, cfg.sensing_radius, Exec::Serial);
            const SafetyInput input = scan_to_safety_input(scan).input;
            cell.distance = input.distance;
            cell.velocity = project_smooth(cell.center, input, cfg);
            cell.mode = smooth_mode(input.distance, nominal_control(cell.center, cfg).dot(input.gradient), cfg);
            return;
        }
        const BoundaryQuery q = boundary_query(env, cell.center);
        cell.distance = q.distance;
        if (kind == ControllerKind::DiscontinuousExact) {
            const bool on_boundary = q.distance <= snap;
            const Vec nu = -q.gradient;
            cell.velocity = project_discontinuous(cell.center, on_boundary, nu, cfg);
            cell.mode = (on_boundary && nu.dot(nominal_control(cell.center, cfg)) > 0.0)
                            ? ControlMode::FullProjection
                            : ControlMode::Nominal;
        } else {
            SafetyInput input{q.distance, q.gradient};
            cell.velocity = project_smooth(cell.center, input, cfg);
            cell.mode = smooth_mode(q.distance, nominal_control(cell.center, cfg).dot(q.gradient), cfg);
        }
    });
    return grid;
}

void write_field_csv(const FieldGrid& grid, std::ostream& out) {
    out << "# format_version=1\n";
    out << "x_1,x_2,u_1,u_2,distance,mode\n";
    for (const auto& cell : grid.cells) {
        out << format_fixed(cell.center[0], 9) << "," << format_fixed(cell.center[1], 9) << ",";
        if (cell.masked) {
            out << "0,0,0,masked\n";
        } else {
            out << format_fixed(cell.velocity[0], 9) << "," << format_fixed(cell.velocity[1], 9) << ","
                << format_fixed(cell.distance, 9) << "," << to_string(cell.mode) << "\n";
        }
    }
}

void write_field_svg(const FieldGrid& grid, const ControllerConfig& cfg, std::ostream& out) {
    const FieldSpec& spec = grid.spec;
    SvgWriter svg(out, spec.bounds_min[0], spec.bounds_min[1], spec.bounds_max[0], spec.bounds_max[1]);
    const double dx = (spec.bounds_max[0] - spec.bounds_min[0]) / grid.nx;
    const double dy = (spec.bounds_max[1] - spec.bounds_min[1]) / grid.ny;

    // Background tint: obstacle mask, kept margin, blend band.
    for (const auto& cell : grid.cells) {
        const double x = cell.center[0] - 0.5 * dx;
        const double y = cell.center[1] - 0.5 * dy;
        if (cell.masked) {
            svg.rect(x, y, dx, dy, "#404040");
        } else if (cell.distance <= cfg.inner_margin) {
            svg.rect(x, y, dx, dy, "#b9e8b9");
        } else if (cell.distance <= cfg.outer_margin) {
            svg.rect(x, y, dx, dy, "#f6c9c9");
        }
    }

    double max_speed = 0.0;
    for (const auto& cell : grid.cells) {
        if (!cell.masked) max_speed = std::max(max_speed, cell.velocity.norm());
    }
    const double arrow_scale = max_speed > 0.0 ? 0.85 * std::min(dx, dy) / max_speed : 0.0;
    for (const auto& cell : grid.cells) {
        if (cell.masked) continue;
        const char* color = cell.mode == ControlMode::Nominal
                                ? "#1f6fb4"
                                : (cell.mode == ControlMode::Blending ? "#c77f1f" : "#b41f1f");
        svg.arrow(cell.center[0], cell.center[1], arrow_scale * cell.velocity[0], arrow_scale * cell.velocity[1],
                  color, 0.15 * std::min(dx, dy) * 0.2);
    }
    svg.circle(cfg.goal[0], cfg.goal[1], 0.06 * std::min(dx, dy) * grid.nx / 10.0, "#f2c511", "#8a7107",
               0.01);
}

}  // namespace conenav
