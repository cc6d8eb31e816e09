#pragma once

#include "conenav/types.hpp"

namespace conenav {

/// Gains and margins of the navigation controller. The margins satisfy
/// 0 < inner < outer <= reach and outer < sensing_radius; see validate().
struct ControllerConfig {
    Vec goal;                     // x_d
    double gain = 0.5;            // k, 1/s
    double inner_margin = 0.2;    // epsilon, the kept safety margin
    double outer_margin = 0.4;    // epsilon', where the avoidance blend starts
    double sensing_radius = 0.5;  // R
};

/// Margin used by precondition checks against the inner margin.
inline constexpr double kMarginTolerance = 1e-6;

/// Throws InputError unless 0 < k, 0 < inner < outer < sensing_radius and
/// the goal is a finite point. The reach constraint (outer <= h) is checked
/// where an environment is in scope.
void validate(const ControllerConfig& cfg);

/// Distance-and-bearing summary the controller consumes; produced either
/// from exact geometry queries or from simulated range sensors. `gradient`
/// is the unit distance-field gradient (points from the closest obstacle
/// point toward the robot, into free space).
struct SafetyInput {
    double distance = 0.0;
    Vec gradient;
};

enum class ControlMode { Nominal, Blending, FullProjection };

/// Goal-seeking law -k (x - x_d).
Vec nominal_control(const Vec& x, const ControllerConfig& cfg);

/// Orthogonal projector I - nu nu^T onto the hyperplane normal to `nu`.
/// `nu` must be unit within 1e-9.
Mat tangent_projector(const Vec& nu);

/// Half-space tangent-cone membership at a smooth boundary point with
/// outward normal `nu`: true iff nu . z <= tol.
bool cone_contains(const Vec& nu, const Vec& z, double tol = 0.0);

/// Discontinuous projected law: nominal in the interior or when the nominal
/// command already points into the cone; otherwise the tangential component
/// only. `nu` is the outward free-space normal and must be unit when
/// `on_boundary` is set.
Vec project_discontinuous(const Vec& x, bool on_boundary, const Vec& nu, const ControllerConfig& cfg);

/// Blend factor phi(d) = clamp((outer - d)/(outer - inner), 0, 1).
double smoothing_factor(double distance, const ControllerConfig& cfg);

/// Continuous projected law: nominal outside the outer margin or when the
/// nominal command moves away from the obstacle; otherwise
/// (I - phi g g^T) kappa_0. Distances below the inner margin saturate the
/// blend at phi = 1 (the simulator flags such steps separately).
Vec project_smooth(const Vec& x, const SafetyInput& input, const ControllerConfig& cfg);

/// Mode classification matching project_smooth's branches, for trajectory
/// and field annotations.
ControlMode smooth_mode(double distance, double nominal_dot_gradient, const ControllerConfig& cfg);

}  // namespace conenav
