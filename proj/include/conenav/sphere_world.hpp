#pragma once

#include <vector>

#include "conenav/control.hpp"
#include "conenav/geometry.hpp"
#include "conenav/sim.hpp"
#include "conenav/types.hpp"

namespace conenav {

/// Sphere world: workspace ball minus M disjoint open balls, subject to
/// validate_sphere_world. The workspace may be absent (unbounded free
/// space, e.g. the complement of a single disc); it contributes no
/// undesired equilibria either way.
struct SphereWorld {
    std::optional<Ball> workspace;
    std::vector<Ball> obstacles;
};

Environment to_environment(const SphereWorld& world, double reach_margin = 0.4);

/// Half-line descriptor of the set of starts that flow into an undesired
/// equilibrium: points x_d + s * direction for arclength s > min_arclength.
struct StableManifoldRay {
    Vec origin;     // x_d
    Vec direction;  // unit, from x_d through the obstacle center
    double min_arclength = 0.0;
};

struct Equilibrium {
    std::size_t obstacle_index = 0;
    Vec point;            // antipodal boundary point of the obstacle
    double alpha = 1.0;   // 1 + r_i / ||x_d - c_i||
    double residual = 0.0;  // speed of the projected law at the point
    StableManifoldRay stable_manifold;
};

struct EquilibriumReport {
    std::vector<Equilibrium> points;
};

struct ProbeReport {
    bool escaped = false;
    double escape_time = 0.0;            // first time outside the escape ball
    double terminal_goal_distance = 0.0;
    double max_goal_distance_increase = 0.0;  // worst one-step ||x - x_d|| growth
    Outcome outcome = Outcome::Timeout;
    Vec start;
    Vec equilibrium;
};

struct ProbeOptions {
    double dt = 1e-3;
    double goal_tolerance = 0.05;
    double escape_radius = 0.1;
};

/// Enumerates the undesired equilibria: exactly one antipodal point per
/// obstacle, none on the workspace sphere. Residuals are evaluated with the
/// discontinuous projected law and must vanish to rounding.
EquilibriumReport undesired_equilibria(const SphereWorld& world, const ControllerConfig& cfg);

/// Speed of the projected law at a boundary point x: ||Pi(nu) kappa_0|| when
/// the nominal command pushes outward, ||kappa_0|| otherwise. Zero exactly
/// on the equilibria and at the goal. `x` must lie on the boundary within
/// 1e-9.
double equilibrium_residual(const SphereWorld& world, const Vec& x, const ControllerConfig& cfg);

/// Simulates the discontinuous law from the antipodal point of obstacle `i`
/// displaced tangentially along its sphere by `perturbation`, and reports
/// whether (and when) the state leaves the escape ball around the
/// equilibrium. The tangential direction is the first coordinate axis
/// orthogonalized against the normal, so probes are reproducible.
ProbeReport instability_probe(const SphereWorld& world, std::size_t i, const ControllerConfig& cfg,
                              double perturbation, double horizon, const ProbeOptions& options = {});

}  // namespace conenav
