#include "conenav/manifest.hpp"

#include <filesystem>
#include <fstream>

namespace conenav {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Vec vec_from_json(const json& node, const char* what) {
    const auto values = node.get<std::vector<double>>();
    if (values.size() < 2) throw InputError(std::string(what) + ": need at least 2 coordinates");
    return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json vec_to_json(const Vec& v) {
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace

ControllerKind controller_kind_from_string(const std::string& name) {
    if (name == "discontinuous-exact") return ControllerKind::DiscontinuousExact;
    if (name == "smooth-exact") return ControllerKind::SmoothExact;
    if (name == "smooth-lidar") return ControllerKind::SmoothLidar;
    throw InputError("unknown controller kind '" + name + "'");
}

RunManifest parse_manifest(const json& doc) {
    if (!doc.is_object()) throw InputError("manifest must be a JSON object");
    RunManifest m;
    m.format_version = doc.value("format_version", 1);
    if (m.format_version != 1) throw InputError("manifest: unsupported format_version");
    if (!doc.contains("scene")) throw InputError("manifest: missing 'scene'");
    m.scene = doc.at("scene").get<std::string>();
    m.scene_params = doc.value("scene_params", json::object());

    const json& ctl = doc.at("controller");
    m.controller.gain = ctl.at("k").get<double>();
    m.controller.inner_margin = ctl.at("epsilon").get<double>();
    m.controller.outer_margin = ctl.at("epsilon_prime").get<double>();
    m.controller.sensing_radius = ctl.at("sensing_radius").get<double>();
    m.controller.goal = vec_from_json(ctl.at("goal"), "controller.goal");

    const json& sim = doc.at("sim");
    m.kind = controller_kind_from_string(sim.at("kind").get<std::string>());
    m.dt = sim.at("dt").get<double>();
    m.max_time = sim.at("max_time").get<double>();
    m.goal_tolerance = sim.at("goal_tolerance").get<double>();
    m.lidar_beams = sim.value("beams", 360);
    const json& initial = sim.at("initial");
    if (initial.is_array()) {
        m.initial = vec_from_json(initial, "sim.initial");
    } else {
        SamplingSpec spec;
        spec.count = initial.at("count").get<std::size_t>();
        spec.seed = initial.at("seed").get<std::uint64_t>();
        spec.region_min = vec_from_json(initial.at("region").at("min"), "sim.initial.region.min");
        spec.region_max = vec_from_json(initial.at("region").at("max"), "sim.initial.region.max");
        m.initial = spec;
    }

    if (doc.contains("field")) {
        const json& field = doc.at("field");
        FieldSpec spec;
        spec.bounds_min = vec_from_json(field.at("min"), "field.min");
        spec.bounds_max = vec_from_json(field.at("max"), "field.max");
        spec.resolution = field.at("resolution").get<std::vector<int>>();
        m.field = spec;
    }

    if (doc.contains("outputs")) {
        const json& outputs = doc.at("outputs");
        m.outputs.directory = outputs.value("directory", std::string("out"));
        if (outputs.contains("formats")) {
            m.outputs.formats.clear();
            for (const auto& f : outputs.at("formats")) m.outputs.formats.insert(f.get<std::string>());
        }
    }
    return m;
}

ordered_json serialize_manifest(const RunManifest& m) {
    ordered_json doc;
    doc["format_version"] = m.format_version;
    doc["scene"] = m.scene;
    if (!m.scene_params.empty()) doc["scene_params"] = m.scene_params;

    ordered_json ctl;
    ctl["k"] = m.controller.gain;
    ctl["epsilon"] = m.controller.inner_margin;
    ctl["epsilon_prime"] = m.controller.outer_margin;
    ctl["sensing_radius"] = m.controller.sensing_radius;
    ctl["goal"] = vec_to_json(m.controller.goal);
    doc["controller"] = ctl;

    ordered_json sim;
    sim["kind"] = to_string(m.kind);
    sim["dt"] = m.dt;
    sim["max_time"] = m.max_time;
    sim["goal_tolerance"] = m.goal_tolerance;
    sim["beams"] = m.lidar_beams;
    if (const Vec* x0 = std::get_if<Vec>(&m.initial)) {
        sim["initial"] = vec_to_json(*x0);
    } else {
        const SamplingSpec& spec = std::get<SamplingSpec>(m.initial);
        ordered_json node;
        node["count"] = spec.count;
        node["seed"] = spec.seed;
        node["region"] = {{"min", vec_to_json(spec.region_min)}, {"max", vec_to_json(spec.region_max)}};
        sim["initial"] = node;
    }
    doc["sim"] = sim;

    if (m.field) {
        ordered_json field;
        field["min"] = vec_to_json(m.field->bounds_min);
        field["max"] = vec_to_json(m.field->bounds_max);
        field["resolution"] = m.field->resolution;
        doc["field"] = field;
    }

    ordered_json outputs;
    outputs["directory"] = m.outputs.directory;
    outputs["formats"] = m.outputs.formats;
    doc["outputs"] = outputs;
    return doc;
}

RunManifest load_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open manifest '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw InputError("manifest '" + path + "': " + e.what());
    }
    return parse_manifest(doc);
}

Environment realize_scene(const RunManifest& m) {
    Environment env;
    if (std::filesystem::exists(m.scene)) {
        env = load_environment_file(m.scene);
    } else {
        SceneParams params = scene_params_from_json(m.scene_params);
        if (!m.scene_params.contains("reach_margin")) params.reach_margin = m.controller.outer_margin;
        env = build_scene(m.scene, params);
    }
    if (!(env.reach_margin > 0.0)) env.reach_margin = m.controller.outer_margin;
    return env;
}

SimConfig realize_sim_config(const RunManifest& m) {
    SimConfig cfg;
    cfg.environment = realize_scene(m);
    cfg.controller = m.controller;
    cfg.kind = m.kind;
    cfg.initial = m.initial;
    cfg.dt = m.dt;
    cfg.max_time = m.max_time;
    cfg.goal_tolerance = m.goal_tolerance;
    cfg.lidar_beams = m.lidar_beams;
    return cfg;
}

}  // namespace conenav
