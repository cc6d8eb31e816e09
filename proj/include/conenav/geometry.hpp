#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conenav/types.hpp"

namespace conenav {

/// Closed ball primitive. Used both for spherical obstacles and for the
/// workspace bound (free space confined to its closure).
struct Ball {
    Vec center;
    double radius = 0.0;
};

/// Obstacle described by a smooth scalar field g: the obstacle region is
/// {x : g(x) > 0}, free space satisfies g(x) <= 0. The gradient is optional
/// (central differences are used when absent). `lipschitz_bound`, when
/// positive, certifies |g(a) - g(b)| <= L ||a - b|| and lets the ray kernel
/// take certified long steps; 0 means unknown.
struct ImplicitRegion {
    std::string name;
    std::function<double(const Vec&)> level;
    std::function<Vec(const Vec&)> level_gradient;  // may be empty
    double lipschitz_bound = 0.0;
};

using ObstaclePrimitive = std::variant<Ball, ImplicitRegion>;

struct RayCastParams {
    double bracket_step = 1e-2;  // uniform bracketing step along the ray
    double tolerance = 1e-9;     // bisection tolerance on the hit parameter
};

/// Resolution of the angular sweep used to answer distance queries against
/// ImplicitRegion primitives (the sweep reuses the ray kernel).
struct SweepParams {
    int coarse_rays = 360;
    int refine_iterations = 32;  // golden-section iterations around the argmin
    double max_range = 64.0;     // search budget for the sweep rays
};

/// Free space X = (workspace closure) minus the union of obstacle regions.
/// All queries treat the value as immutable; instances are safe to share
/// across threads.
struct Environment {
    std::optional<Ball> workspace;
    std::vector<ObstaclePrimitive> obstacles;
    /// Assumed reach h of the obstacle set: closest boundary points are
    /// unique (and the distance gradient is Lipschitz) wherever the distance
    /// is below h. Supplied by the scene; defaults to the controller's outer
    /// margin when a manifest leaves it unset.
    double reach_margin = 0.4;
    RayCastParams ray;
    SweepParams sweep;
    /// Optional sink for degenerate-geometry diagnostics (non-unique closest
    /// points and similar guarded paths).
    std::function<void(const std::string&)> diagnostics;
};

/// Result of a closest-boundary query at a free-space point.
struct BoundaryQuery {
    /// Distance to the obstacle set; +infinity when the environment has no
    /// boundary at all (empty obstacle list, no workspace).
    double distance = 0.0;
    Vec closest_point;
    /// Unit gradient of the distance field: (x - closest)/distance for
    /// distance > 0, the inward free-space normal at boundary points.
    Vec gradient;
    /// False when another boundary point attains the same distance within
    /// tolerance (positive reach locally violated); the first argmin is
    /// reported and a diagnostic event is emitted.
    bool unique = true;
};

struct SphereWorldViolation {
    enum class Kind { Overlap, NotInsideWorkspace };
    Kind kind;
    std::size_t i = 0;  // obstacle indices involved
    std::size_t j = 0;  // second index for Overlap
    double margin = 0.0;
    std::string describe() const;
};

struct SphereWorldValidation {
    bool pass = true;
    std::vector<SphereWorldViolation> violations;
};

/// Membership test: inside/on the workspace bound and outside/on every
/// obstacle boundary. Throws InputError on non-finite coordinates.
bool contains(const Environment& env, const Vec& x);

/// Distance, closest boundary point and distance gradient at a free point.
/// Ball primitives are answered analytically; ImplicitRegion primitives by
/// an angular ray sweep plus golden-section refinement of the argmin
/// bearing. Precondition: contains(env, x).
BoundaryQuery boundary_query(const Environment& env, const Vec& x);

/// Smallest t in [0, max_range] with x + t*direction on the boundary of the
/// free space, or max_range when there is no hit. Uniform bracketing (with
/// certified Lipschitz skipping where a bound is available) plus bisection
/// on each primitive's level function along the ray. `direction` must be
/// unit within 1e-12.
double ray_cast(const Environment& env, const Vec& x, const Vec& direction, double max_range);

/// Certified lower bound on the boundary distance; 0 when no certificate is
/// available for some primitive. Cheap (no ray casting), used to skip whole
/// scans and sweeps.
double distance_lower_bound(const Environment& env, const Vec& x);

/// Checks the sphere-world separation rules: pairwise ||c_i - c_j|| >
/// r_i + r_j and strict containment r_0 > ||c_i - c_0|| + r_i. Requires a
/// workspace ball and only Ball obstacles (type error otherwise).
SphereWorldValidation validate_sphere_world(const Environment& env);

/// Ambient dimension inferred from the workspace or the first ball
/// obstacle; 0 when the environment carries no ball primitive.
Eigen::Index environment_dimension(const Environment& env);

}  // namespace conenav
