#include "conenav/sphere_world.hpp"

#include <cmath>
#include <limits>

namespace conenav {

namespace {

void require_valid(const SphereWorld& world) {
    if (world.workspace) {
        const SphereWorldValidation report = validate_sphere_world(to_environment(world));
        if (!report.pass) {
            throw InputError("sphere world fails validation: " + report.violations.front().describe());
        }
        return;
    }
    // Unbounded world: only pairwise disjointness applies.
    for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
        for (std::size_t j = i + 1; j < world.obstacles.size(); ++j) {
            const double sep = (world.obstacles[i].center - world.obstacles[j].center).norm();
            if (!(sep > world.obstacles[i].radius + world.obstacles[j].radius)) {
                throw InputError("sphere world fails validation: obstacles " + std::to_string(i) + " and " +
                                 std::to_string(j) + " overlap");
            }
        }
    }
}

// Outward free-space normal on the boundary sphere of obstacle i (points
// into the obstacle).
Vec obstacle_normal(const Ball& obstacle, const Vec& x) {
    return -(x - obstacle.center).normalized();
}

}  // namespace

Environment to_environment(const SphereWorld& world, double reach_margin) {
    Environment env;
    if (world.workspace) env.workspace = *world.workspace;
    env.obstacles.reserve(world.obstacles.size());
    for (const auto& b : world.obstacles) env.obstacles.emplace_back(b);
    env.reach_margin = reach_margin;
    return env;
}

EquilibriumReport undesired_equilibria(const SphereWorld& world, const ControllerConfig& cfg) {
    require_valid(world);
    validate(cfg);
    const Vec& goal = cfg.goal;

    EquilibriumReport report;
    report.points.reserve(world.obstacles.size());
    for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
        const Ball& obstacle = world.obstacles[i];
        const double separation = (goal - obstacle.center).norm();
        if (!(separation > obstacle.radius)) {
            throw InputError("undesired_equilibria: goal lies inside obstacle " + std::to_string(i));
        }
        Equilibrium eq;
        eq.obstacle_index = i;
        eq.alpha = 1.0 + obstacle.radius / separation;
        eq.point = (1.0 - eq.alpha) * goal + eq.alpha * obstacle.center;
        const Vec nu = obstacle_normal(obstacle, eq.point);
        eq.residual = project_discontinuous(eq.point, true, nu, cfg).norm();
        eq.stable_manifold.origin = goal;
        eq.stable_manifold.direction = (obstacle.center - goal) / separation;
        eq.stable_manifold.min_arclength = eq.alpha * separation;
        report.points.push_back(std::move(eq));
    }
    return report;
}

double equilibrium_residual(const SphereWorld& world, const Vec& x, const ControllerConfig& cfg) {
    require_valid(world);
    require_point(x, "equilibrium_residual");

    // Identify which boundary sphere the point lies on (within 1e-9).
    double best_gap = std::numeric_limits<double>::infinity();
    int best = -1;  // -1 = workspace sphere
    if (world.workspace) {
        best_gap = std::abs((x - world.workspace->center).norm() - world.workspace->radius);
    }
    for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
        const double gap = std::abs((x - world.obstacles[i].center).norm() - world.obstacles[i].radius);
        if (gap < best_gap) {
            best_gap = gap;
            best = static_cast<int>(i);
        }
    }
    if (best_gap > 1e-9) throw InputError("equilibrium_residual: point is not on the boundary (within 1e-9)");

    const Vec nu = best < 0 ? Vec((x - world.workspace->center).normalized())
                            : obstacle_normal(world.obstacles[static_cast<std::size_t>(best)], x);
    const Vec kappa0 = nominal_control(x, cfg);
    if (nu.dot(kappa0) > 0.0) return (kappa0 - nu * nu.dot(kappa0)).norm();
    return kappa0.norm();
}

ProbeReport instability_probe(const SphereWorld& world, std::size_t i, const ControllerConfig& cfg,
                              double perturbation, double horizon, const ProbeOptions& options) {
    require_valid(world);
    if (i >= world.obstacles.size()) throw InputError("instability_probe: obstacle index out of range");
    if (!(perturbation >= 0.0)) throw InputError("instability_probe: perturbation must be non-negative");
    const Ball& obstacle = world.obstacles[i];
    if (perturbation > 0.5 * obstacle.radius) {
        throw InputError("instability_probe: perturbation must be small relative to the obstacle radius");
    }

    const EquilibriumReport eqs = undesired_equilibria(world, cfg);
    const Vec& xbar = eqs.points[i].point;
    const Vec nu = obstacle_normal(obstacle, xbar);

    // Deterministic tangential direction: first coordinate axis with a
    // non-degenerate component orthogonal to the normal.
    Vec tangent = Vec::Zero(xbar.size());
    for (Eigen::Index axis = 0; axis < xbar.size(); ++axis) {
        Vec w = Vec::Unit(xbar.size(), axis) - nu[axis] * nu;
        if (w.norm() > 1e-9) {
            tangent = w.normalized();
            break;
        }
    }

    // Displace along the sphere: move tangentially, then reproject. Rounding
    // may land the reprojected point marginally inside the ball; bump the
    // radius until the start is in the closed free space.
    const Vec radial = (xbar - obstacle.center + perturbation * tangent).normalized();
    Vec start = obstacle.center + obstacle.radius * radial;
    for (double bump = 1e-15 * obstacle.radius; (start - obstacle.center).norm() < obstacle.radius;
         bump *= 2.0) {
        start = obstacle.center + (obstacle.radius + bump) * radial;
    }

    SimConfig sim;
    sim.environment = to_environment(world);
    sim.controller = cfg;
    sim.kind = ControllerKind::DiscontinuousExact;
    sim.initial = start;
    sim.dt = options.dt;
    sim.max_time = horizon;
    sim.goal_tolerance = options.goal_tolerance;
    const Trajectory traj = run_from(sim, start);

    ProbeReport report;
    report.start = start;
    report.equilibrium = xbar;
    report.outcome = traj.outcome;
    report.terminal_goal_distance = traj.steps.empty() ? 0.0 : traj.steps.back().goal_distance;
    report.max_goal_distance_increase = traj.max_goal_distance_increase();
    for (std::size_t j = 0; j < traj.states.size(); ++j) {
        if ((traj.states[j] - xbar).norm() > options.escape_radius) {
            report.escaped = true;
            report.escape_time = traj.times[j];
            break;
        }
    }
    return report;
}

}  // namespace conenav
