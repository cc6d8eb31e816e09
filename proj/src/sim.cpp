#include "conenav/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "conenav/sensors.hpp"

namespace conenav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTrapSpeed = 1e-6;
constexpr int kTrapStreak = 100;

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

void validate_sim_config(const SimConfig& cfg) {
    validate(cfg.controller);
    if (!(cfg.dt > 0.0)) throw InputError("SimConfig: dt must be positive");
    if (!(cfg.goal_tolerance > 0.0)) throw InputError("SimConfig: goal tolerance must be positive");
    if (!(cfg.max_time >= 0.0)) throw InputError("SimConfig: max_time must be non-negative");
    if (cfg.environment.reach_margin > 0.0 && cfg.controller.outer_margin > cfg.environment.reach_margin) {
        throw InputError("SimConfig: outer margin exceeds the environment's reach margin");
    }
    if (!contains(cfg.environment, cfg.controller.goal)) {
        throw InputError("SimConfig: goal is outside the free space");
    }
    const BoundaryQuery goal_query = boundary_query(cfg.environment, cfg.controller.goal);
    if (!(goal_query.distance > cfg.controller.inner_margin)) {
        throw InputError("SimConfig: goal must lie strictly inside the margin-eroded free space");
    }
    if (cfg.kind == ControllerKind::SmoothLidar && cfg.controller.goal.size() != 2) {
        throw InputError("SimConfig: the lidar controller requires a planar scene");
    }
}

// Boundary activation band for the discontinuous law in discrete time: the
// projected branch engages whenever a forward-Euler step could reach the
// boundary. This realizes the sliding behaviour of the continuous-time
// solution without sliding-mode machinery.
double activation_band(const Vec& x, const SimConfig& cfg) {
    return std::max(1e-9, 1.5 * cfg.dt * nominal_control(x, cfg.controller).norm());
}

}  // namespace

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Converged: return "converged";
        case Outcome::Timeout: return "timeout";
        case Outcome::SafetyViolation: return "safety-violation";
        case Outcome::EquilibriumTrap: return "equilibrium-trap";
    }
    return "?";
}

const char* to_string(ControlMode m) {
    switch (m) {
        case ControlMode::Nominal: return "nominal";
        case ControlMode::Blending: return "blending";
        case ControlMode::FullProjection: return "full-projection";
    }
    return "?";
}

const char* to_string(ControllerKind k) {
    switch (k) {
        case ControllerKind::DiscontinuousExact: return "discontinuous-exact";
        case ControllerKind::SmoothExact: return "smooth-exact";
        case ControllerKind::SmoothLidar: return "smooth-lidar";
    }
    return "?";
}

double Trajectory::min_recorded_distance() const {
    double best = kInf;
    for (const auto& s : steps) best = std::min(best, s.obstacle_distance);
    return best;
}

double Trajectory::max_goal_distance_increase() const {
    double worst = 0.0;
    for (std::size_t j = 1; j < steps.size(); ++j) {
        worst = std::max(worst, steps[j].goal_distance - steps[j - 1].goal_distance);
    }
    return worst;
}

double safety_floor(const SimConfig& cfg) {
    return cfg.kind == ControllerKind::DiscontinuousExact ? 0.0 : 0.5 * cfg.controller.inner_margin;
}

Vec step(const Vec& x, const VelocityField& field, double dt, Integrator integrator) {
    if (!(dt > 0.0)) throw InputError("step: dt must be positive");
    if (integrator == Integrator::Euler) {
        const Vec v = field(x);
        if (!v.allFinite()) throw NumericalError("step: non-finite velocity");
        return x + dt * v;
    }
    const Vec k1 = field(x);
    const Vec k2 = field(x + (0.5 * dt) * k1);
    const Vec k3 = field(x + (0.5 * dt) * k2);
    const Vec k4 = field(x + dt * k3);
    Vec next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite()) throw NumericalError("step: non-finite velocity");
    return next;
}

Trajectory run_from(const SimConfig& cfg, const Vec& start) {
    validate_sim_config(cfg);
    require_point(start, "run: initial state");
    if (start.size() != cfg.controller.goal.size()) throw InputError("run: state/goal dimension mismatch");
    if (!contains(cfg.environment, start)) throw InputError("run: initial state is outside the free space");
    if (cfg.kind != ControllerKind::DiscontinuousExact) {
        const double d0 = boundary_query(cfg.environment, start).distance;
        if (d0 < cfg.controller.inner_margin - kMarginTolerance) {
            throw InputError("run: initial state is already inside the safety margin");
        }
    }

    const ControllerConfig& ctl = cfg.controller;
    const double floor = safety_floor(cfg);
    Trajectory traj;
    Vec x = start;
    int trap_streak = 0;

    for (std::size_t j = 0;; ++j) {
        const double t = static_cast<double>(j) * cfg.dt;
        StepRecord rec;
        rec.goal_distance = (x - ctl.goal).norm();

        bool in_free_space = contains(cfg.environment, x);
        bool violated = false;
        SafetyInput input;  // smooth kinds: measurement frozen for this step

        if (!in_free_space) {
            rec.obstacle_distance = 0.0;
            rec.velocity = Vec::Zero(x.size());
            rec.margin_violation = true;
            violated = true;
        } else if (cfg.kind == ControllerKind::DiscontinuousExact) {
            const BoundaryQuery q = boundary_query(cfg.environment, x);
            rec.obstacle_distance = q.distance;
            const bool on_boundary = q.distance <= activation_band(x, cfg);
            const Vec nu = -q.gradient;
            rec.velocity = project_discontinuous(x, on_boundary, nu, ctl);
            rec.mode = (on_boundary && nu.dot(nominal_control(x, ctl)) > 0.0) ? ControlMode::FullProjection
                                                                              : ControlMode::Nominal;
        } else {
            if (cfg.kind == ControllerKind::SmoothLidar) {
                const LidarScan scan = simulate_lidar(cfg.environment, x, cfg.lidar_beams, ctl.sensing_radius);
                input = scan_to_safety_input(scan).input;
            } else {
                const BoundaryQuery q = boundary_query(cfg.environment, x);
                input.distance = q.distance;
                input.gradient = q.gradient;
            }
            rec.obstacle_distance = input.distance;
            rec.velocity = project_smooth(x, input, ctl);
            rec.mode = smooth_mode(input.distance, nominal_control(x, ctl).dot(input.gradient), ctl);
            rec.margin_violation = input.distance < ctl.inner_margin - kMarginTolerance;
            violated = input.distance < floor;
        }

        traj.times.push_back(t);
        traj.states.push_back(x);
        traj.steps.push_back(rec);

        if (rec.goal_distance < cfg.goal_tolerance) {
            traj.outcome = Outcome::Converged;
            break;
        }
        if (violated) {
            traj.outcome = Outcome::SafetyViolation;
            break;
        }
        const double speed = rec.velocity.norm();
        trap_streak = (speed < kTrapSpeed) ? trap_streak + 1 : 0;
        if (trap_streak >= kTrapStreak) {
            traj.outcome = Outcome::EquilibriumTrap;
            break;
        }
        if (t >= cfg.max_time) {
            traj.outcome = (speed < kTrapSpeed) ? Outcome::EquilibriumTrap : Outcome::Timeout;
            break;
        }

        if (cfg.kind == ControllerKind::DiscontinuousExact) {
            const Vec v = rec.velocity;
            x = step(x, [&](const Vec&) { return v; }, cfg.dt, Integrator::Euler);
        } else {
            // Zero-order hold of the measurement within the step; the
            // nominal part still varies across the RK stages.
            x = step(x, [&](const Vec& y) { return project_smooth(y, input, ctl); }, cfg.dt,
                     Integrator::RungeKutta4);
        }
    }
    return traj;
}

Trajectory run(const SimConfig& cfg) {
    if (const Vec* x0 = std::get_if<Vec>(&cfg.initial)) return run_from(cfg, *x0);
    const SamplingSpec& spec = std::get<SamplingSpec>(cfg.initial);
    if (spec.count == 0) throw InputError("run: sampling spec has zero samples");
    return run_from(cfg, sample_initial(cfg, spec, 0));
}

Vec sample_initial(const SimConfig& cfg, const SamplingSpec& spec, std::size_t sample_index) {
    if (spec.region_min.size() != spec.region_max.size() || spec.region_min.size() < 2) {
        throw InputError("SamplingSpec: invalid region");
    }
    std::mt19937_64 rng(splitmix64(spec.seed ^ splitmix64(0x9e3779b97f4a7c15ull + sample_index)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vec x(spec.region_min.size());
    for (int attempt = 0; attempt < 100000; ++attempt) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            x[i] = spec.region_min[i] + unit(rng) * (spec.region_max[i] - spec.region_min[i]);
        }
        if (!contains(cfg.environment, x)) continue;
        if (boundary_query(cfg.environment, x).distance >= cfg.controller.outer_margin) return x;
    }
    throw NumericalError("sample_initial: rejection sampling exhausted its budget");
}

BatchSummary batch_run(const SimConfig& cfg, Exec exec, std::vector<Trajectory>* keep) {
    validate_sim_config(cfg);
    if (!std::holds_alternative<SamplingSpec>(cfg.initial)) {
        throw InputError("batch_run: configuration must carry a sampling spec");
    }
    const SamplingSpec& spec = std::get<SamplingSpec>(cfg.initial);

    BatchSummary summary;
    summary.total = spec.count;
    if (spec.count == 0) return summary;

    struct RunStats {
        Outcome outcome = Outcome::Timeout;
        double min_distance = kInf;
        double max_lyapunov_increase = 0.0;
    };
    std::vector<RunStats> stats(spec.count);
    if (keep) keep->resize(spec.count);
    const double floor = safety_floor(cfg);

    for_each_index(static_cast<std::ptrdiff_t>(spec.count), exec, [&](std::ptrdiff_t i) {
        const Vec x0 = sample_initial(cfg, spec, static_cast<std::size_t>(i));
        Trajectory traj = run_from(cfg, x0);
        stats[static_cast<std::size_t>(i)] = {traj.outcome, traj.min_recorded_distance(),
                                              traj.max_goal_distance_increase()};
        if (keep) (*keep)[static_cast<std::size_t>(i)] = std::move(traj);
    });

    summary.min_distance = kInf;
    for (const auto& s : stats) {
        switch (s.outcome) {
            case Outcome::Converged: ++summary.converged; break;
            case Outcome::Timeout: ++summary.timeouts; break;
            case Outcome::SafetyViolation: ++summary.safety_violations; break;
            case Outcome::EquilibriumTrap: ++summary.equilibrium_traps; break;
        }
        summary.min_distance = std::min(summary.min_distance, s.min_distance);
        summary.max_min_distance_violation =
            std::max(summary.max_min_distance_violation, std::max(0.0, floor - s.min_distance));
        summary.max_lyapunov_increase = std::max(summary.max_lyapunov_increase, s.max_lyapunov_increase);
    }
    return summary;
}

AuditReport safety_audit(const Trajectory& traj, const Environment& env, const ControllerConfig& cfg,
                         double floor, Exec exec) {
    AuditReport report;
    report.min_distance = kInf;
    const std::size_t n = traj.states.size();
    std::vector<double> distances(n, kInf);
    for_each_index(static_cast<std::ptrdiff_t>(n), exec, [&](std::ptrdiff_t i) {
        const Vec& x = traj.states[static_cast<std::size_t>(i)];
        distances[static_cast<std::size_t>(i)] = contains(env, x) ? boundary_query(env, x).distance : 0.0;
    });
    for (std::size_t i = 0; i < n; ++i) {
        report.min_distance = std::min(report.min_distance, distances[i]);
        if (!report.first_violation_index && distances[i] < floor) report.first_violation_index = i;
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double prev = (traj.states[i - 1] - cfg.goal).norm();
        const double cur = (traj.states[i] - cfg.goal).norm();
        report.max_lyapunov_increase = std::max(report.max_lyapunov_increase, cur - prev);
    }
    return report;
}

}  // namespace conenav
