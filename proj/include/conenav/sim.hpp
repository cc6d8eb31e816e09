#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "conenav/control.hpp"
#include "conenav/geometry.hpp"
#include "conenav/parallel.hpp"
#include "conenav/types.hpp"

namespace conenav {

enum class ControllerKind { DiscontinuousExact, SmoothExact, SmoothLidar };
enum class Outcome { Converged, Timeout, SafetyViolation, EquilibriumTrap };
enum class Integrator { RungeKutta4, Euler };

/// Seeded rejection sampler for initial conditions: uniform draws in the
/// axis-aligned box, rejected until the sample is in free space with
/// boundary distance >= the controller's outer margin.
struct SamplingSpec {
    std::size_t count = 0;
    Vec region_min;
    Vec region_max;
    std::uint64_t seed = 0;
};

struct SimConfig {
    Environment environment;
    ControllerConfig controller;
    ControllerKind kind = ControllerKind::SmoothExact;
    std::variant<Vec, SamplingSpec> initial;
    double dt = 1e-3;
    double max_time = 100.0;
    double goal_tolerance = 0.05;
    int lidar_beams = 360;
};

/// Per-state annotations recorded along a trajectory. `obstacle_distance`
/// is the distance the controller acted on (exact query or scan minimum,
/// depending on the controller kind).
struct StepRecord {
    double obstacle_distance = 0.0;
    double goal_distance = 0.0;
    Vec velocity;
    ControlMode mode = ControlMode::Nominal;
    bool margin_violation = false;  // distance fell below inner - tolerance
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<StepRecord> steps;  // one per recorded state
    Outcome outcome = Outcome::Timeout;
    double min_recorded_distance() const;
    double max_goal_distance_increase() const;
};

struct BatchSummary {
    std::size_t total = 0;
    std::size_t converged = 0;
    std::size_t timeouts = 0;
    std::size_t safety_violations = 0;
    std::size_t equilibrium_traps = 0;
    double min_distance = 0.0;               // min over runs of per-run minimum
    double max_min_distance_violation = 0.0; // max over runs of (floor - min distance)+
    double max_lyapunov_increase = 0.0;      // max over runs of one-step ||x - x_d|| increase
};

struct AuditReport {
    double min_distance = 0.0;
    std::optional<std::size_t> first_violation_index;
    double max_lyapunov_increase = 0.0;
};

using VelocityField = std::function<Vec(const Vec&)>;

/// One fixed-step update of x' = field(x). RungeKutta4 serves the smooth
/// controllers; Euler serves the discontinuous one (intermediate RK stages
/// straddling the discontinuity carry no meaning). Throws NumericalError on
/// a non-finite velocity.
Vec step(const Vec& x, const VelocityField& field, double dt, Integrator integrator = Integrator::RungeKutta4);

/// Closed-loop integration from the configured initial state until the goal
/// tolerance, the time horizon, a safety-floor violation, or an equilibrium
/// trap (speed below 1e-6 m/s for 100 consecutive steps).
Trajectory run(const SimConfig& cfg);

/// Same loop from an explicit start, bypassing the sampler.
Trajectory run_from(const SimConfig& cfg, const Vec& start);

/// Samples `count` initial conditions from the spec and simulates them,
/// optionally in parallel (run outputs are independent of the execution
/// policy). When `keep` is non-null it receives the trajectories in sample
/// order.
BatchSummary batch_run(const SimConfig& cfg, Exec exec = Exec::Parallel,
                       std::vector<Trajectory>* keep = nullptr);

/// Recomputes the boundary distance at every recorded state via
/// boundary_query, reports the minimum, the first index below `floor` (if
/// any) and the largest one-step increase of ||x - x_d||.
AuditReport safety_audit(const Trajectory& traj, const Environment& env, const ControllerConfig& cfg,
                         double floor, Exec exec = Exec::Parallel);

/// Safety floor used for violation detection: half the inner margin for the
/// smooth kinds, zero (free-space membership only) for the discontinuous
/// kind.
double safety_floor(const SimConfig& cfg);

/// Draws the initial state with index `sample_index` from the sampling
/// spec (deterministic in spec.seed and the index).
Vec sample_initial(const SimConfig& cfg, const SamplingSpec& spec, std::size_t sample_index);

const char* to_string(Outcome o);
const char* to_string(ControlMode m);
const char* to_string(ControllerKind k);

}  // namespace conenav
