// Compares the serial reference kernels against their OpenMP variants:
// lidar scans, depth-map rendering, batch simulation and trajectory audits.

#include <chrono>
#include <cstdio>
#include <vector>

#include "conenav/field.hpp"
#include "conenav/scenes.hpp"
#include "conenav/sensors.hpp"
#include "conenav/sim.hpp"

using namespace conenav;

namespace {

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

template <typename Fn>
double time_seconds(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %.2fx\n", name, serial, parallel,
                parallel > 0.0 ? serial / parallel : 0.0);
}

}  // namespace

int main() {
    const Environment corridor = build_scene("paper-corridor");

    // Poses scattered along the corridor, all in free space.
    std::vector<Vec> poses;
    for (int i = 0; i < 400; ++i) {
        const Vec x = vec2(-9.0 + 18.0 * (i / 400.0), 2.2 + 1.2 * ((i * 7) % 11) / 11.0);
        if (contains(corridor, x)) poses.push_back(x);
    }

    {
        volatile double sink = 0.0;
        auto scan_all = [&](Exec exec) {
            for (const Vec& x : poses) {
                const LidarScan scan = simulate_lidar(corridor, x, 360, 0.5, exec);
                sink = sink + scan.ranges[0];
            }
        };
        const double serial = time_seconds([&] { scan_all(Exec::Serial); });
        const double parallel = time_seconds([&] { scan_all(Exec::Parallel); });
        report("lidar scans (360 beams)", serial, parallel);
    }

    {
        Environment ball_scene;
        Vec c(3);
        c << 0.2, -0.1, 2.5;
        ball_scene.obstacles.emplace_back(Ball{c, 0.8});
        StereoRig rig;
        rig.focal_length = 240.0;
        volatile double sink = 0.0;
        auto render = [&](Exec exec) {
            const DepthMap dm = simulate_depth_map(ball_scene, CameraPose{}, rig, 201, 201, 50.0, exec);
            sink = sink + dm.at(100, 100);
        };
        const double serial = time_seconds([&] { render(Exec::Serial); });
        const double parallel = time_seconds([&] { render(Exec::Parallel); });
        report("depth map (201x201)", serial, parallel);
    }

    SimConfig cfg;
    cfg.environment = build_scene("fig2");
    cfg.controller.goal = vec2(0, 0);
    cfg.controller.gain = 0.5;
    cfg.controller.inner_margin = 0.2;
    cfg.controller.outer_margin = 0.4;
    cfg.controller.sensing_radius = 0.5;
    cfg.max_time = 60.0;
    SamplingSpec spec;
    spec.count = 64;
    spec.region_min = vec2(-4, -4);
    spec.region_max = vec2(6, 6);
    spec.seed = 17;
    cfg.initial = spec;

    {
        const double serial = time_seconds([&] { batch_run(cfg, Exec::Serial); });
        const double parallel = time_seconds([&] { batch_run(cfg, Exec::Parallel); });
        report("batch of 64 runs", serial, parallel);
    }

    {
        cfg.initial = Vec(vec2(4.0, 3.3));
        const Trajectory traj = run(cfg);
        volatile double sink = 0.0;
        const double serial = time_seconds(
            [&] { sink = sink + safety_audit(traj, cfg.environment, cfg.controller, 0.1, Exec::Serial).min_distance; });
        const double parallel = time_seconds(
            [&] { sink = sink + safety_audit(traj, cfg.environment, cfg.controller, 0.1, Exec::Parallel).min_distance; });
        report("trajectory audit", serial, parallel);
    }

    return 0;
}
