#include "conenav/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "conenav/field.hpp"
#include "conenav/io.hpp"
#include "conenav/manifest.hpp"
#include "conenav/scenes.hpp"

namespace conenav {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void ensure_output_dir(const OutputSpec& outputs) {
    std::error_code ec;
    fs::create_directories(outputs.directory, ec);
    if (ec) throw InputError("cannot create output directory '" + outputs.directory + "'");
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << contents;
}

bool wants(const OutputSpec& outputs, const char* format) { return outputs.formats.count(format) > 0; }

int run_simulate(const std::string& manifest_path, std::ostream& out) {
    const RunManifest manifest = load_manifest_file(manifest_path);
    SimConfig cfg = realize_sim_config(manifest);
    ensure_output_dir(manifest.outputs);

    std::vector<Trajectory> trajectories;
    if (const Vec* x0 = std::get_if<Vec>(&cfg.initial)) {
        trajectories.push_back(run_from(cfg, *x0));
    } else {
        const SamplingSpec& spec = std::get<SamplingSpec>(cfg.initial);
        for (std::size_t i = 0; i < spec.count; ++i) {
            trajectories.push_back(run_from(cfg, sample_initial(cfg, spec, i)));
        }
    }

    ordered_json runs = ordered_json::array();
    bool any_violation = false;
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
        const Trajectory& traj = trajectories[i];
        any_violation = any_violation || traj.outcome == Outcome::SafetyViolation;
        runs.push_back(trajectory_summary(traj));

        std::ostringstream tag;
        if (trajectories.size() > 1) {
            tag << "trajectory_" << i;
        } else {
            tag << "trajectory";
        }
        if (wants(manifest.outputs, "csv")) {
            std::ostringstream csv;
            write_trajectory_csv(traj, cfg.controller, csv);
            write_file(fs::path(manifest.outputs.directory) / (tag.str() + ".csv"), csv.str());
        }
        if (wants(manifest.outputs, "svg") && cfg.controller.goal.size() == 2) {
            std::ostringstream svg;
            write_trajectory_svg(traj, cfg.environment, cfg.controller, svg);
            write_file(fs::path(manifest.outputs.directory) / (tag.str() + ".svg"), svg.str());
        }
    }

    ordered_json doc;
    doc["format_version"] = 1;
    doc["runs"] = runs;
    if (wants(manifest.outputs, "json")) {
        write_file(fs::path(manifest.outputs.directory) / "summary.json", doc.dump(2) + "\n");
    }
    out << doc.dump(2) << "\n";
    return any_violation ? 2 : 0;
}

int run_batch(const std::string& manifest_path, std::ostream& out) {
    const RunManifest manifest = load_manifest_file(manifest_path);
    SimConfig cfg = realize_sim_config(manifest);
    if (!std::holds_alternative<SamplingSpec>(cfg.initial)) {
        throw InputError("batch: manifest sim.initial must be a sampling spec");
    }
    const BatchSummary summary = batch_run(cfg);
    const ordered_json doc = batch_summary_json(summary);
    out << doc.dump(2) << "\n";
    if (wants(manifest.outputs, "json")) {
        ensure_output_dir(manifest.outputs);
        write_file(fs::path(manifest.outputs.directory) / "batch_summary.json", doc.dump(2) + "\n");
    }
    return summary.safety_violations > 0 ? 2 : 0;
}

int run_field(const std::string& manifest_path, std::ostream& out) {
    const RunManifest manifest = load_manifest_file(manifest_path);
    if (!manifest.field) throw InputError("field: manifest has no 'field' section");
    const Environment env = realize_scene(manifest);
    const FieldGrid grid = export_field(env, manifest.controller, *manifest.field, manifest.kind);
    ensure_output_dir(manifest.outputs);
    if (wants(manifest.outputs, "csv")) {
        std::ostringstream csv;
        write_field_csv(grid, csv);
        write_file(fs::path(manifest.outputs.directory) / "field.csv", csv.str());
    }
    if (wants(manifest.outputs, "svg")) {
        std::ostringstream svg;
        write_field_svg(grid, manifest.controller, svg);
        write_file(fs::path(manifest.outputs.directory) / "field.svg", svg.str());
    }
    std::size_t masked = 0;
    for (const auto& cell : grid.cells) masked += cell.masked ? 1 : 0;
    ordered_json doc;
    doc["format_version"] = 1;
    doc["cells"] = grid.cells.size();
    doc["masked_cells"] = masked;
    out << doc.dump(2) << "\n";
    return 0;
}

int run_equilibria(const std::string& manifest_path, std::ostream& out) {
    const RunManifest manifest = load_manifest_file(manifest_path);
    const Environment env = realize_scene(manifest);
    const SphereWorld world = sphere_world_from_environment(env);
    const EquilibriumReport report = undesired_equilibria(world, manifest.controller);

    ordered_json points = ordered_json::array();
    for (const auto& eq : report.points) {
        ordered_json node;
        node["obstacle"] = eq.obstacle_index;
        node["point"] = std::vector<double>(eq.point.data(), eq.point.data() + eq.point.size());
        node["alpha"] = eq.alpha;
        node["residual"] = eq.residual;
        node["stable_manifold"] = {
            {"direction", std::vector<double>(eq.stable_manifold.direction.data(),
                                              eq.stable_manifold.direction.data() +
                                                  eq.stable_manifold.direction.size())},
            {"min_arclength", eq.stable_manifold.min_arclength}};
        points.push_back(node);
    }
    ordered_json doc;
    doc["format_version"] = 1;
    doc["equilibria"] = points;
    out << doc.dump(2) << "\n";
    if (wants(manifest.outputs, "json")) {
        ensure_output_dir(manifest.outputs);
        write_file(fs::path(manifest.outputs.directory) / "equilibria.json", doc.dump(2) + "\n");
    }
    return 0;
}

int run_lidar_debug(const std::string& manifest_path, const std::string& at, std::ostream& out) {
    const RunManifest manifest = load_manifest_file(manifest_path);
    const Environment env = realize_scene(manifest);

    Vec origin(2);
    {
        std::istringstream is(at);
        char comma = 0;
        if (!(is >> origin[0] >> comma >> origin[1]) || comma != ',') {
            throw InputError("lidar-debug: --at expects 'x,y'");
        }
    }
    const LidarScan scan = simulate_lidar(env, origin, manifest.lidar_beams, manifest.controller.sensing_radius);
    const ScanReduction reduction = scan_to_safety_input(scan);

    ensure_output_dir(manifest.outputs);
    if (wants(manifest.outputs, "csv")) {
        std::ostringstream csv;
        write_scan_csv(scan, csv);
        write_file(fs::path(manifest.outputs.directory) / "scan.csv", csv.str());
    }
    if (wants(manifest.outputs, "svg")) {
        std::ostringstream svg;
        write_scan_svg(scan, origin, svg);
        write_file(fs::path(manifest.outputs.directory) / "scan.svg", svg.str());
    }
    ordered_json doc;
    doc["format_version"] = 1;
    doc["distance"] = reduction.input.distance;
    doc["argmin_angle"] = reduction.argmin_angle;
    doc["bearing_reliable"] = reduction.bearing_reliable;
    out << doc.dump(2) << "\n";
    return 0;
}

int run_validate(const std::string& scene, std::ostream& out, std::ostream& err) {
    Environment env;
    if (fs::exists(scene)) {
        env = load_environment_file(scene);
    } else {
        env = build_scene(scene);
    }
    bool all_balls = env.workspace.has_value();
    for (const auto& prim : env.obstacles) {
        all_balls = all_balls && std::holds_alternative<Ball>(prim);
    }
    if (!all_balls) {
        out << "scene loaded; not an all-ball bounded world, separation rules not applicable\n";
        return 0;
    }
    const SphereWorldValidation report = validate_sphere_world(env);
    if (report.pass) {
        out << "valid sphere world (" << env.obstacles.size() << " obstacles)\n";
        return 0;
    }
    for (const auto& violation : report.violations) err << "violation: " << violation.describe() << "\n";
    return 1;
}

}  // namespace

SphereWorld sphere_world_from_environment(const Environment& env) {
    SphereWorld world;
    if (env.workspace) world.workspace = *env.workspace;
    for (const auto& prim : env.obstacles) {
        const Ball* b = std::get_if<Ball>(&prim);
        if (!b) throw InputError("environment contains non-ball primitives; not a sphere world");
        world.obstacles.push_back(*b);
    }
    return world;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Projection-based safe navigation: simulator, analysis and plots"};
    app.require_subcommand(1);

    std::string manifest_path, scene, at;

    CLI::App* simulate = app.add_subcommand("simulate", "integrate runs from a manifest");
    simulate->add_option("manifest", manifest_path, "run manifest (JSON)")->required();

    CLI::App* batch = app.add_subcommand("batch", "sampled batch of runs, summary only");
    batch->add_option("manifest", manifest_path, "run manifest (JSON)")->required();

    CLI::App* field = app.add_subcommand("field", "evaluate the vector field on a grid");
    field->add_option("manifest", manifest_path, "run manifest (JSON)")->required();

    CLI::App* equilibria = app.add_subcommand("equilibria", "undesired equilibria of a sphere world");
    equilibria->add_option("manifest", manifest_path, "run manifest (JSON)")->required();

    CLI::App* lidar = app.add_subcommand("lidar-debug", "dump one scan as CSV and a polar SVG");
    lidar->add_option("manifest", manifest_path, "run manifest (JSON)")->required();
    lidar->add_option("--at", at, "scan origin 'x,y'")->required();

    CLI::App* validate_cmd = app.add_subcommand("validate", "check sphere-world separation rules");
    validate_cmd->add_option("scene", scene, "builtin scene name or environment file")->required();

    try {
        std::vector<const char*> argv;
        argv.push_back("conenav");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        err << app.help();
        return 1;
    }

    try {
        if (simulate->parsed()) return run_simulate(manifest_path, out);
        if (batch->parsed()) return run_batch(manifest_path, out);
        if (field->parsed()) return run_field(manifest_path, out);
        if (equilibria->parsed()) return run_equilibria(manifest_path, out);
        if (lidar->parsed()) return run_lidar_debug(manifest_path, at, out);
        if (validate_cmd->parsed()) return run_validate(scene, out, err);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace conenav
