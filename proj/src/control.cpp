#include "conenav/control.hpp"

#include <algorithm>
#include <cmath>

namespace conenav {

void validate(const ControllerConfig& cfg) {
    require_point(cfg.goal, "ControllerConfig.goal");
    if (!(cfg.gain > 0.0)) throw InputError("ControllerConfig: gain must be positive");
    if (!(cfg.inner_margin > 0.0)) throw InputError("ControllerConfig: inner margin must be positive");
    if (!(cfg.inner_margin < cfg.outer_margin)) {
        throw InputError("ControllerConfig: margins must satisfy 0 < inner < outer");
    }
    if (!(cfg.outer_margin < cfg.sensing_radius)) {
        throw InputError("ControllerConfig: outer margin must stay below the sensing radius");
    }
}

Vec nominal_control(const Vec& x, const ControllerConfig& cfg) {
    return -cfg.gain * (x - cfg.goal);
}

Mat tangent_projector(const Vec& nu) {
    if (std::abs(nu.norm() - 1.0) > 1e-9) throw InputError("tangent_projector: nu must be unit (within 1e-9)");
    return Mat::Identity(nu.size(), nu.size()) - nu * nu.transpose();
}

bool cone_contains(const Vec& nu, const Vec& z, double tol) { return nu.dot(z) <= tol; }

Vec project_discontinuous(const Vec& x, bool on_boundary, const Vec& nu, const ControllerConfig& cfg) {
    Vec kappa0 = nominal_control(x, cfg);
    if (!on_boundary) return kappa0;
    if (std::abs(nu.norm() - 1.0) > 1e-9) throw InputError("project_discontinuous: nu must be unit on the boundary");
    const double normal_component = nu.dot(kappa0);
    if (normal_component <= 0.0) return kappa0;
    return kappa0 - nu * normal_component;
}

double smoothing_factor(double distance, const ControllerConfig& cfg) {
    if (!(distance >= 0.0)) throw InputError("smoothing_factor: distance must be non-negative");
    return std::clamp((cfg.outer_margin - distance) / (cfg.outer_margin - cfg.inner_margin), 0.0, 1.0);
}

Vec project_smooth(const Vec& x, const SafetyInput& input, const ControllerConfig& cfg) {
    Vec kappa0 = nominal_control(x, cfg);
    if (input.distance > cfg.outer_margin) return kappa0;
    const double along_gradient = kappa0.dot(input.gradient);
    if (along_gradient >= 0.0) return kappa0;  // already moving away from the obstacle
    const double phi = smoothing_factor(input.distance, cfg);
    return kappa0 - (phi * along_gradient) * input.gradient;
}

ControlMode smooth_mode(double distance, double nominal_dot_gradient, const ControllerConfig& cfg) {
    if (distance > cfg.outer_margin || nominal_dot_gradient >= 0.0) return ControlMode::Nominal;
    return smoothing_factor(distance, cfg) >= 1.0 ? ControlMode::FullProjection : ControlMode::Blending;
}

}  // namespace conenav
