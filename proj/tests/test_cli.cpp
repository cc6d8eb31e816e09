#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "conenav/cli.hpp"

using namespace conenav;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / fs::path("conenav_cli_test");
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

int invoke(const std::vector<std::string>& args, std::string* stdout_text = nullptr,
           std::string* stderr_text = nullptr) {
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    if (stdout_text) *stdout_text = out.str();
    if (stderr_text) *stderr_text = err.str();
    return code;
}

}  // namespace

TEST_CASE("cli: no usable arguments yields a usage error") {
    std::string err;
    CHECK(invoke({}, nullptr, &err) == 1);
    CHECK(invoke({"frobnicate"}, nullptr, &err) == 1);
}

TEST_CASE("cli validate: pass, fail and builtin names") {
    TempDir tmp;
    write(tmp.path / "good.json", R"({
        "format_version": 1,
        "workspace": {"center": [0, 0], "radius": 5.0},
        "balls": [{"center": [2, 2], "radius": 0.5}]
    })");
    write(tmp.path / "overlap.json", R"({
        "format_version": 1,
        "workspace": {"center": [0, 0], "radius": 5.0},
        "balls": [{"center": [0, 0], "radius": 1.0}, {"center": [1.5, 0], "radius": 1.0}]
    })");

    CHECK(invoke({"validate", (tmp.path / "good.json").string()}) == 0);

    std::string err;
    CHECK(invoke({"validate", (tmp.path / "overlap.json").string()}, nullptr, &err) == 1);
    CHECK(err.find("obstacles 0 and 1 overlap") != std::string::npos);

    CHECK(invoke({"validate", "paper-corridor"}) == 0);
    CHECK(invoke({"validate", "no-such-scene"}) == 1);
}

TEST_CASE("cli simulate: writes csv, svg and summary") {
    TempDir tmp;
    const std::string outdir = (tmp.path / "out").string();
    json manifest = {
        {"format_version", 1},
        {"scene", "fig2"},
        {"controller",
         {{"k", 0.5}, {"epsilon", 0.2}, {"epsilon_prime", 0.4}, {"sensing_radius", 0.5}, {"goal", {0.0, 0.0}}}},
        {"sim",
         {{"kind", "smooth-exact"},
          {"dt", 1e-3},
          {"max_time", 30.0},
          {"goal_tolerance", 0.05},
          {"initial", {4.0, 3.5}}}},
        {"outputs", {{"directory", outdir}, {"formats", {"csv", "svg", "json"}}}}};
    write(tmp.path / "manifest.json", manifest.dump());

    std::string out;
    CHECK(invoke({"simulate", (tmp.path / "manifest.json").string()}, &out) == 0);
    CHECK(fs::exists(fs::path(outdir) / "trajectory.csv"));
    CHECK(fs::exists(fs::path(outdir) / "trajectory.svg"));
    CHECK(fs::exists(fs::path(outdir) / "summary.json"));
    const json summary = json::parse(out);
    CHECK(summary.at("runs").at(0).at("outcome") == "converged");

    std::ifstream csv(fs::path(outdir) / "trajectory.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line == "# format_version=1");
    std::getline(csv, line);
    CHECK(line == "t,x_1,x_2,distance,lyapunov,mode");
}

TEST_CASE("cli equilibria and lidar-debug") {
    TempDir tmp;
    const std::string outdir = (tmp.path / "out").string();
    json manifest = {
        {"format_version", 1},
        {"scene", "fig2"},
        {"controller",
         {{"k", 0.5}, {"epsilon", 0.2}, {"epsilon_prime", 0.4}, {"sensing_radius", 0.5}, {"goal", {0.0, 0.0}}}},
        {"sim",
         {{"kind", "smooth-lidar"},
          {"dt", 1e-3},
          {"max_time", 30.0},
          {"goal_tolerance", 0.05},
          {"initial", {4.0, 3.5}}}},
        {"outputs", {{"directory", outdir}, {"formats", {"csv", "svg", "json"}}}}};
    write(tmp.path / "manifest.json", manifest.dump());

    std::string out;
    CHECK(invoke({"equilibria", (tmp.path / "manifest.json").string()}, &out) == 0);
    const json report = json::parse(out);
    const double alpha = 1.0 + 1.0 / (4.0 * std::sqrt(2.0));
    CHECK(report.at("equilibria").size() == 1);
    CHECK(report.at("equilibria").at(0).at("point").at(0).get<double>() == doctest::Approx(2.0 * alpha));
    CHECK(report.at("equilibria").at(0).at("residual").get<double>() <= 1e-12);

    CHECK(invoke({"lidar-debug", (tmp.path / "manifest.json").string(), "--at", "2,1.2"}, &out) == 0);
    CHECK(fs::exists(fs::path(outdir) / "scan.csv"));
    CHECK(fs::exists(fs::path(outdir) / "scan.svg"));
    const json scan = json::parse(out);
    CHECK(scan.at("distance").get<double>() == doctest::Approx(0.3).epsilon(1e-6));

    std::string err;
    CHECK(invoke({"lidar-debug", (tmp.path / "manifest.json").string(), "--at", "nonsense"}, nullptr, &err) == 1);
}

TEST_CASE("cli field: grid export on the fig2 scene") {
    TempDir tmp;
    const std::string outdir = (tmp.path / "out").string();
    json manifest = {
        {"format_version", 1},
        {"scene", "fig2"},
        {"controller",
         {{"k", 0.5}, {"epsilon", 0.2}, {"epsilon_prime", 0.4}, {"sensing_radius", 0.5}, {"goal", {0.0, 0.0}}}},
        {"sim",
         {{"kind", "discontinuous-exact"},
          {"dt", 1e-3},
          {"max_time", 30.0},
          {"goal_tolerance", 0.05},
          {"initial", {4.0, 3.5}}}},
        {"field", {{"min", {-1.0, -1.0}}, {"max", {5.0, 5.0}}, {"resolution", {24, 24}}}},
        {"outputs", {{"directory", outdir}, {"formats", {"csv", "svg", "json"}}}}};
    write(tmp.path / "manifest.json", manifest.dump());

    CHECK(invoke({"field", (tmp.path / "manifest.json").string()}) == 0);
    CHECK(fs::exists(fs::path(outdir) / "field.csv"));
    CHECK(fs::exists(fs::path(outdir) / "field.svg"));

    // Missing field section is a usage error.
    json no_field = manifest;
    no_field.erase("field");
    write(tmp.path / "nofield.json", no_field.dump());
    CHECK(invoke({"field", (tmp.path / "nofield.json").string()}) == 1);
}

TEST_CASE("cli simulate: missing manifest is a usage error") {
    std::string err;
    CHECK(invoke({"simulate", "/no/such/manifest.json"}, nullptr, &err) == 1);
    CHECK(!err.empty());
}

TEST_CASE("cli simulate: corridor scene with the lidar controller end to end") {
    TempDir tmp;
    const std::string outdir = (tmp.path / "out").string();
    json manifest = {
        {"format_version", 1},
        {"scene", "paper-corridor"},
        {"controller",
         {{"k", 0.5}, {"epsilon", 0.2}, {"epsilon_prime", 0.4}, {"sensing_radius", 0.5}, {"goal", {-9.0, 3.0}}}},
        {"sim",
         {{"kind", "smooth-lidar"},
          {"dt", 1e-3},
          {"max_time", 60.0},
          {"goal_tolerance", 0.05},
          {"beams", 360},
          {"initial", {-6.0, 3.0}}}},
        {"outputs", {{"directory", outdir}, {"formats", {"csv", "svg", "json"}}}}};
    write(tmp.path / "manifest.json", manifest.dump());

    std::string out;
    CHECK(invoke({"simulate", (tmp.path / "manifest.json").string()}, &out) == 0);
    CHECK(fs::exists(fs::path(outdir) / "trajectory.csv"));
    CHECK(fs::exists(fs::path(outdir) / "trajectory.svg"));
    const json summary = json::parse(out);
    CHECK(summary.at("runs").at(0).at("outcome") == "converged");
    CHECK(summary.at("runs").at(0).at("min_distance").get<double>() >= 0.18);
}
