#include "conenav/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace conenav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroDistanceTol = 1e-12;
constexpr double kUniqueDistanceTol = 1e-9;
constexpr double kUniquePointTol = 1e-6;

// Free-space sign convention along a ray: level <= 0 in free space,
// > 0 strictly inside the blocked region, 0 on the boundary.
double ball_obstacle_level(const Ball& b, const Vec& y) { return b.radius - (y - b.center).norm(); }
double workspace_level(const Ball& w, const Vec& y) { return (y - w.center).norm() - w.radius; }

void emit_diagnostic(const Environment& env, const std::string& msg) {
    if (env.diagnostics) env.diagnostics(msg);
}

// First crossing of `level` from the free side (level < 0) to the blocked
// side along x + t*dir, t in [0, max_range]. Bracketing advances by the
// uniform step, or by the certified bound |level|/L when a Lipschitz
// constant is known (no crossing can hide inside such a step). The bracket
// is then shrunk by bisection to `tolerance`.
template <typename LevelFn>
std::optional<double> first_crossing(const LevelFn& level_at, double lipschitz, double max_range,
                                     const RayCastParams& p) {
    if (max_range <= 0.0) {
        return level_at(0.0) >= 0.0 ? std::optional<double>(0.0) : std::nullopt;
    }
    double t = 0.0;
    double f = level_at(0.0);
    if (f >= 0.0) return 0.0;
    while (t < max_range) {
        double step = p.bracket_step;
        if (lipschitz > 0.0) step = std::max(step, -f / lipschitz);
        const double t_next = std::min(t + step, max_range);
        const double f_next = level_at(t_next);
        if (f_next >= 0.0) {
            double lo = t, hi = t_next;
            double f_lo = f, f_hi = f_next;
            while (hi - lo > p.tolerance) {
                const double mid = 0.5 * (lo + hi);
                const double f_mid = level_at(mid);
                if (f_mid >= 0.0) {
                    hi = mid;
                    f_hi = f_mid;
                } else {
                    lo = mid;
                    f_lo = f_mid;
                }
            }
            // False-position polish: pushes the root error far below the
            // bracket tolerance so downstream difference quotients stay
            // smooth.
            for (int it = 0; it < 6 && hi - lo > 0.0; ++it) {
                if (!(f_hi > f_lo)) break;
                const double m = hi - f_hi * (hi - lo) / (f_hi - f_lo);
                if (!(m > lo && m < hi)) break;
                const double f_m = level_at(m);
                if (f_m >= 0.0) {
                    hi = m;
                    f_hi = f_m;
                } else {
                    lo = m;
                    f_lo = f_m;
                }
            }
            return hi;
        }
        t = t_next;
        f = f_next;
    }
    return std::nullopt;
}

struct RayScratch {
    Vec point;
    explicit RayScratch(Eigen::Index n) : point(n) {}
};

// Crossing of one primitive along a world-space ray.
std::optional<double> primitive_crossing(const ObstaclePrimitive& prim, const Vec& x, const Vec& dir,
                                         double max_range, const RayCastParams& p, RayScratch& scratch) {
    if (const Ball* b = std::get_if<Ball>(&prim)) {
        auto level = [&](double t) {
            scratch.point = x + t * dir;
            return ball_obstacle_level(*b, scratch.point);
        };
        return first_crossing(level, 1.0, max_range, p);
    }
    const ImplicitRegion& region = std::get<ImplicitRegion>(prim);
    auto level = [&](double t) {
        scratch.point = x + t * dir;
        return region.level(scratch.point);
    };
    return first_crossing(level, region.lipschitz_bound, max_range, p);
}

std::optional<double> workspace_crossing(const Ball& w, const Vec& x, const Vec& dir, double max_range,
                                         const RayCastParams& p, RayScratch& scratch) {
    auto level = [&](double t) {
        scratch.point = x + t * dir;
        return workspace_level(w, scratch.point);
    };
    return first_crossing(level, 1.0, max_range, p);
}

Vec implicit_gradient(const ImplicitRegion& region, const Vec& x) {
    if (region.level_gradient) return region.level_gradient(x);
    // Central differences as a fallback for regions without an analytic gradient.
    const double h = 1e-7 * std::max(1.0, x.norm());
    Vec g(x.size());
    Vec probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double fp = region.level(probe);
        probe[i] = x[i] - h;
        const double fm = region.level(probe);
        probe[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

struct Candidate {
    double distance = kInf;
    Vec closest;
    Vec gradient;         // unit distance gradient, valid for distance > 0
    Vec boundary_normal;  // inward free-space normal, used when distance == 0
    bool unique = true;
    bool valid = false;
};

// Ray along `dir` against a single primitive, capped. Returns the hit
// parameter or max_range when the primitive is not reached.
double single_primitive_ray(const ObstaclePrimitive& prim, const Vec& x, const Vec& dir, double max_range,
                            const RayCastParams& p, RayScratch& scratch) {
    auto hit = primitive_crossing(prim, x, dir, max_range, p, scratch);
    return hit ? *hit : max_range;
}

// Distance to one ImplicitRegion by angular sweep: cast rays on a coarse
// uniform fan, keep the shortest hit, then refine the argmin bearing by
// golden-section search (the hit length is smooth and locally unimodal in
// the bearing for a C^2 boundary).
Candidate sweep_implicit_2d(const Environment& env, const ObstaclePrimitive& prim, const Vec& x, double cap) {
    const int n_rays = std::max(8, env.sweep.coarse_rays);
    const double two_pi = 2.0 * std::numbers::pi;
    const double step = two_pi / n_rays;
    RayScratch scratch(x.size());
    Vec dir(2);

    auto ray_at = [&](double theta, double budget) {
        dir[0] = std::cos(theta);
        dir[1] = std::sin(theta);
        return single_primitive_ray(prim, x, dir, budget, env.ray, scratch);
    };

    double best = kInf, best_theta = 0.0;
    double second = kInf;  // best among bearings well separated from the argmin lobe
    int best_j = -1;
    std::vector<double> lengths(static_cast<std::size_t>(n_rays), kInf);
    for (int j = 0; j < n_rays; ++j) {
        const double theta = -std::numbers::pi + j * step;
        const double budget = std::min(cap, (std::isfinite(best) ? best + 10.0 * env.ray.bracket_step : cap));
        const double t = ray_at(theta, budget);
        if (t < budget) {
            lengths[static_cast<std::size_t>(j)] = t;
            if (t < best) {
                best = t;
                best_theta = theta;
                best_j = j;
            }
        }
    }
    Candidate cand;
    if (best_j < 0) return cand;  // nothing within cap

    for (int j = 0; j < n_rays; ++j) {
        int sep = std::abs(j - best_j);
        sep = std::min(sep, n_rays - sep);
        if (sep > 3 && lengths[static_cast<std::size_t>(j)] < second) second = lengths[static_cast<std::size_t>(j)];
    }

    // Golden-section refinement of the argmin bearing.
    const double budget = best + 0.05 + 10.0 * env.ray.bracket_step;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = best_theta - 1.5 * step, b = best_theta + 1.5 * step;
    double t1 = b - gr * (b - a), t2 = a + gr * (b - a);
    double f1 = ray_at(t1, budget), f2 = ray_at(t2, budget);
    for (int it = 0; it < env.sweep.refine_iterations; ++it) {
        if (f1 <= f2) {
            b = t2;
            t2 = t1;
            f2 = f1;
            t1 = b - gr * (b - a);
            f1 = ray_at(t1, budget);
        } else {
            a = t1;
            t1 = t2;
            f1 = f2;
            t2 = a + gr * (b - a);
            f2 = ray_at(t2, budget);
        }
    }
    double theta_star = (f1 <= f2) ? t1 : t2;
    double t_star = std::min(f1, f2);
    if (t_star > best) {  // never worse than the coarse sweep
        theta_star = best_theta;
        t_star = best;
    }

    cand.valid = true;
    cand.distance = t_star;
    dir[0] = std::cos(theta_star);
    dir[1] = std::sin(theta_star);
    cand.closest = x + t_star * dir;
    cand.gradient = -dir;
    cand.unique = !(std::isfinite(second) && second - t_star <= kUniqueDistanceTol);
    const ImplicitRegion& region = std::get<ImplicitRegion>(prim);
    Vec g = implicit_gradient(region, cand.closest);
    const double gn = g.norm();
    cand.boundary_normal = (gn > 0.0) ? Vec(-g / gn) : Vec(-dir);
    return cand;
}

// 3-D variant: Fibonacci-sphere fan followed by local grid zooming on the
// (azimuth, polar) chart around the best direction.
Candidate sweep_implicit_3d(const Environment& env, const ObstaclePrimitive& prim, const Vec& x, double cap) {
    RayScratch scratch(x.size());
    Vec dir(3);
    auto ray_dir = [&](double az, double pol, double budget) {
        const double s = std::sin(pol);
        dir[0] = s * std::cos(az);
        dir[1] = s * std::sin(az);
        dir[2] = std::cos(pol);
        return single_primitive_ray(prim, x, dir, budget, env.ray, scratch);
    };

    const int count = std::max(512, env.sweep.coarse_rays * 8);
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    double best = kInf, best_az = 0.0, best_pol = 0.0;
    for (int j = 0; j < count; ++j) {
        const double z = 1.0 - 2.0 * (j + 0.5) / count;
        const double pol = std::acos(std::clamp(z, -1.0, 1.0));
        const double az = golden_angle * j;
        const double budget = std::min(cap, (std::isfinite(best) ? best + 10.0 * env.ray.bracket_step : cap));
        const double t = ray_dir(az, pol, budget);
        if (t < budget && t < best) {
            best = t;
            best_az = az;
            best_pol = pol;
        }
    }
    Candidate cand;
    if (!std::isfinite(best)) return cand;

    double half = std::sqrt(4.0 * std::numbers::pi / count);  // about one sample spacing
    const double budget = best + 0.05 + 10.0 * env.ray.bracket_step;
    for (int round = 0; round < 6; ++round) {
        double local_best = best, local_az = best_az, local_pol = best_pol;
        for (int ia = -3; ia <= 3; ++ia) {
            for (int ip = -3; ip <= 3; ++ip) {
                const double az = best_az + ia * half / 3.0;
                const double pol = std::clamp(best_pol + ip * half / 3.0, 1e-9, std::numbers::pi - 1e-9);
                const double t = ray_dir(az, pol, budget);
                if (t < local_best) {
                    local_best = t;
                    local_az = az;
                    local_pol = pol;
                }
            }
        }
        best = local_best;
        best_az = local_az;
        best_pol = local_pol;
        half /= 3.0;
    }

    cand.valid = true;
    cand.distance = best;
    const double s = std::sin(best_pol);
    dir[0] = s * std::cos(best_az);
    dir[1] = s * std::sin(best_az);
    dir[2] = std::cos(best_pol);
    cand.closest = x + best * dir;
    cand.gradient = -dir;
    const ImplicitRegion& region = std::get<ImplicitRegion>(prim);
    Vec g = implicit_gradient(region, cand.closest);
    const double gn = g.norm();
    cand.boundary_normal = (gn > 0.0) ? Vec(-g / gn) : Vec(-dir);
    return cand;
}

Candidate ball_obstacle_candidate(const Ball& b, const Vec& x) {
    Candidate cand;
    cand.valid = true;
    const Vec offset = x - b.center;
    const double rho = offset.norm();
    if (rho < kZeroDistanceTol) {
        // Query at the obstacle center: should be unreachable from free space.
        cand.distance = -b.radius;
        cand.closest = b.center + b.radius * Vec::Unit(x.size(), 0);
        cand.gradient = Vec::Unit(x.size(), 0);
        cand.boundary_normal = Vec::Unit(x.size(), 0);
        cand.unique = false;
        return cand;
    }
    cand.distance = rho - b.radius;
    cand.closest = b.center + (b.radius / rho) * offset;
    // Radial direction computed directly: (x - closest)/distance cancels
    // catastrophically at small distances.
    cand.gradient = offset / rho;
    cand.boundary_normal = cand.gradient;  // away from the obstacle, into free space
    return cand;
}

Candidate workspace_candidate(const Ball& w, const Vec& x) {
    Candidate cand;
    cand.valid = true;
    const Vec offset = x - w.center;
    const double rho = offset.norm();
    cand.distance = w.radius - rho;
    if (rho < kZeroDistanceTol) {
        cand.closest = w.center + w.radius * Vec::Unit(x.size(), 0);
        cand.gradient = -Vec::Unit(x.size(), 0);
        cand.boundary_normal = -Vec::Unit(x.size(), 0);
        cand.unique = false;  // the whole bounding sphere is equidistant
        return cand;
    }
    cand.closest = w.center + (w.radius / rho) * offset;
    cand.gradient = -offset / rho;  // inward
    cand.boundary_normal = cand.gradient;
    return cand;
}

}  // namespace

std::string SphereWorldViolation::describe() const {
    std::ostringstream os;
    if (kind == Kind::Overlap) {
        os << "obstacles " << i << " and " << j << " overlap (separation margin " << margin << ")";
    } else {
        os << "obstacle " << i << " is not strictly inside the workspace (margin " << margin << ")";
    }
    return os.str();
}

bool contains(const Environment& env, const Vec& x) {
    require_point(x, "contains");
    if (env.workspace && workspace_level(*env.workspace, x) > 0.0) return false;
    for (const auto& prim : env.obstacles) {
        if (const Ball* b = std::get_if<Ball>(&prim)) {
            if (ball_obstacle_level(*b, x) > 0.0) return false;
        } else {
            if (std::get<ImplicitRegion>(prim).level(x) > 0.0) return false;
        }
    }
    return true;
}

double distance_lower_bound(const Environment& env, const Vec& x) {
    double bound = kInf;
    if (env.workspace) bound = std::min(bound, -workspace_level(*env.workspace, x));
    for (const auto& prim : env.obstacles) {
        if (const Ball* b = std::get_if<Ball>(&prim)) {
            bound = std::min(bound, -ball_obstacle_level(*b, x));
        } else {
            const ImplicitRegion& region = std::get<ImplicitRegion>(prim);
            if (region.lipschitz_bound > 0.0) {
                bound = std::min(bound, -region.level(x) / region.lipschitz_bound);
            } else {
                bound = 0.0;
            }
        }
    }
    return std::max(bound, 0.0);
}

double ray_cast(const Environment& env, const Vec& x, const Vec& direction, double max_range) {
    require_point(x, "ray_cast");
    if (direction.size() != x.size()) throw InputError("ray_cast: dimension mismatch");
    if (!direction.allFinite() || std::abs(direction.norm() - 1.0) > 1e-12) {
        throw InputError("ray_cast: direction must be a unit vector (within 1e-12)");
    }
    if (!(max_range >= 0.0)) throw InputError("ray_cast: max_range must be non-negative");

    RayScratch scratch(x.size());
    double best = max_range;
    if (env.workspace) {
        if (auto t = workspace_crossing(*env.workspace, x, direction, best, env.ray, scratch)) best = *t;
    }
    for (const auto& prim : env.obstacles) {
        if (auto t = primitive_crossing(prim, x, direction, best, env.ray, scratch)) best = std::min(best, *t);
    }
    return best;
}

BoundaryQuery boundary_query(const Environment& env, const Vec& x) {
    require_point(x, "boundary_query");
    if (!contains(env, x)) throw InputError("boundary_query: point is outside the free space");

    std::vector<Candidate> candidates;
    candidates.reserve(env.obstacles.size() + 1);
    double best_so_far = kInf;

    if (env.workspace) {
        candidates.push_back(workspace_candidate(*env.workspace, x));
        best_so_far = candidates.back().distance;
    }
    for (const auto& prim : env.obstacles) {
        if (std::holds_alternative<Ball>(prim)) {
            candidates.push_back(ball_obstacle_candidate(std::get<Ball>(prim), x));
            best_so_far = std::min(best_so_far, candidates.back().distance);
        }
    }
    for (const auto& prim : env.obstacles) {
        if (!std::holds_alternative<ImplicitRegion>(prim)) continue;
        const ImplicitRegion& region = std::get<ImplicitRegion>(prim);
        // Certified bound first: skip the sweep when this region provably
        // cannot beat the best candidate found so far.
        if (region.lipschitz_bound > 0.0 && std::isfinite(best_so_far)) {
            const double lower = -region.level(x) / region.lipschitz_bound;
            if (lower > best_so_far + kUniqueDistanceTol) continue;
        }
        const double cap = std::min(env.sweep.max_range,
                                    std::isfinite(best_so_far) ? best_so_far + 0.1 : env.sweep.max_range);
        Candidate cand;
        if (x.size() == 2) {
            cand = sweep_implicit_2d(env, prim, x, cap);
        } else if (x.size() == 3) {
            cand = sweep_implicit_3d(env, prim, x, cap);
        } else {
            throw NumericalError("boundary_query: implicit-region distance sweep supports n in {2,3}; got n = " +
                                 std::to_string(x.size()) + " for region '" + region.name + "'");
        }
        if (cand.valid) {
            candidates.push_back(std::move(cand));
            best_so_far = std::min(best_so_far, candidates.back().distance);
        }
    }

    BoundaryQuery out;
    if (candidates.empty()) {
        out.distance = kInf;
        out.closest_point = x;
        out.gradient = Vec::Zero(x.size());
        return out;
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (candidates[i].distance < candidates[best].distance) best = i;
    }
    const Candidate& win = candidates[best];
    out.distance = std::max(win.distance, 0.0);
    out.closest_point = win.closest;
    out.unique = win.unique;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (i == best) continue;
        if (candidates[i].distance - win.distance <= kUniqueDistanceTol &&
            (candidates[i].closest - win.closest).norm() > kUniquePointTol) {
            out.unique = false;
        }
    }
    if (!out.unique) {
        std::ostringstream os;
        os << "boundary_query: non-unique closest point at x = [" << x.transpose() << "]";
        emit_diagnostic(env, os.str());
    }

    out.gradient = out.distance > kZeroDistanceTol ? win.gradient : win.boundary_normal;
    return out;
}

Eigen::Index environment_dimension(const Environment& env) {
    if (env.workspace) return env.workspace->center.size();
    for (const auto& prim : env.obstacles) {
        if (const Ball* b = std::get_if<Ball>(&prim)) return b->center.size();
    }
    return 0;
}

SphereWorldValidation validate_sphere_world(const Environment& env) {
    if (!env.workspace) throw InputError("validate_sphere_world: environment has no workspace ball");
    std::vector<const Ball*> balls;
    balls.reserve(env.obstacles.size());
    for (const auto& prim : env.obstacles) {
        const Ball* b = std::get_if<Ball>(&prim);
        if (!b) throw InputError("validate_sphere_world: non-ball obstacle primitive present");
        balls.push_back(b);
    }

    SphereWorldValidation report;
    for (std::size_t i = 0; i < balls.size(); ++i) {
        for (std::size_t j = i + 1; j < balls.size(); ++j) {
            const double sep = (balls[i]->center - balls[j]->center).norm() - balls[i]->radius - balls[j]->radius;
            if (!(sep > 0.0)) {
                report.pass = false;
                report.violations.push_back({SphereWorldViolation::Kind::Overlap, i, j, sep});
            }
        }
        const double margin =
            env.workspace->radius - ((balls[i]->center - env.workspace->center).norm() + balls[i]->radius);
        if (!(margin > 0.0)) {
            report.pass = false;
            report.violations.push_back({SphereWorldViolation::Kind::NotInsideWorkspace, i, i, margin});
        }
    }
    return report;
}

}  // namespace conenav
