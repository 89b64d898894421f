#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "curveflow/curve_io.hpp"
#include "curveflow/experiments.hpp"

using namespace curveflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("curveflow_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int cli(const std::string& args) {
    const std::string cmd = std::string(CURVEFLOW_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, MakeFixtureThenEvolve) {
    const auto dir = scratch("evolve");
    ASSERT_EQ(cli("--output-dir " + dir.string() + " make-fixture --kind circle --n 256 --output circle.json"), 0);
    const auto c = read_curve((dir / "circle.json").string());
    EXPECT_EQ(c.size(), 256u);

    const auto out = dir / "run";
    ASSERT_EQ(cli("--output-dir " + out.string() + " evolve --input " + (dir / "circle.json").string() + " --t-end 0.25"), 0);
    EXPECT_TRUE(fs::exists(out / "trajectory.csv"));
    EXPECT_TRUE(fs::exists(out / "final_curve.json"));
    const auto final_curve = read_curve((out / "final_curve.json").string());
    EXPECT_NEAR(length(final_curve), 2.0 * std::numbers::pi * std::sqrt(0.5), 5e-3);
}

TEST(Cli, ManifestIsComplete) {
    const auto dir = scratch("manifest");
    ASSERT_EQ(cli("--output-dir " + dir.string() + " reaper --r 1 --alpha 1"), 0);
    const auto m = read_json_file((dir / "manifest.json").string());
    EXPECT_EQ(m.at("tool"), "curveflow");
    EXPECT_EQ(m.at("version"), tool_version);
    EXPECT_EQ(m.at("config").at("name"), "reaper");
    EXPECT_DOUBLE_EQ(m.at("config").at("parameters").at("alpha").get<double>(), 1.0);
    EXPECT_TRUE(m.at("wall_time_s").is_number());
    ASSERT_FALSE(m.at("checks").empty());
    for (const auto& c : m.at("checks")) EXPECT_TRUE(c.at("passed").get<bool>()) << c.at("name");
    for (const auto& f : m.at("files")) {
        const auto path = dir / f.at("path").get<std::string>();
        ASSERT_TRUE(fs::exists(path)) << path;
        EXPECT_EQ(f.at("fnv1a64").get<std::string>(), hex64(fnv1a64(slurp(path))));
    }
}

TEST(Cli, IdenticalRunsGiveIdenticalCsv) {
    const auto a = scratch("det_a"), b = scratch("det_b");
    const std::string args = " evolve --input " + (a / "c.json").string() + " --t-end 0.05 --record-every 4";
    ASSERT_EQ(cli("--seed 3 --output-dir " + a.string() + " make-fixture --kind star --jitter 0.01 --output c.json"), 0);
    ASSERT_EQ(cli("--seed 3 --output-dir " + a.string() + args), 0);
    ASSERT_EQ(cli("--seed 3 --output-dir " + b.string() + args), 0);
    const auto x = slurp(a / "trajectory.csv"), y = slurp(b / "trajectory.csv");
    EXPECT_FALSE(x.empty());
    EXPECT_EQ(x, y);
}

TEST(Cli, ExitCodes) {
    const auto dir = scratch("codes");
    EXPECT_EQ(cli("--output-dir " + dir.string() + " no-such-experiment"), 2);
    EXPECT_EQ(cli("--output-dir " + dir.string() + " reaper --r abc"), 2);
    EXPECT_EQ(cli("--output-dir " + dir.string() + " make-fixture --kind hexagon"), 2);
    EXPECT_EQ(cli("--output-dir " + dir.string() + " evolve --input " + (dir / "missing.json").string()), 2);
    // Sixteen samples are too coarse for the discrete residual check.
    EXPECT_EQ(cli("--output-dir " + dir.string() + " reaper --samples 16"), 1);
    EXPECT_EQ(cli("--output-dir " + dir.string() + " reaper"), 0);
}

TEST(Cli, ConfigFile) {
    const auto dir = scratch("config");
    write_json_file((dir / "cfg.json").string(),
                    {{"name", "make-fixture"}, {"parameters", {{"kind", "koch_prefix"}, {"iter", 2}}}, {"output_dir", dir.string()}});
    ASSERT_EQ(cli("--config " + (dir / "cfg.json").string()), 0);
    const auto c = read_curve((dir / "fixture.json").string());
    EXPECT_NEAR(length(c), 3.0 * 16.0 / 9.0, 1e-9);
}

TEST(Experiments, ParameterValidation) {
    EXPECT_THROW(validate_parameters("make-fixture", nlohmann::json::object()), UsageError);
    EXPECT_THROW(validate_parameters("evolve", {{"bogus", 1}}), UsageError);
    const auto p = validate_parameters("evolve", {{"t_end", 0.5}});
    EXPECT_DOUBLE_EQ(p.at("t_end").get<double>(), 0.5);
    EXPECT_TRUE(p.contains("cfl"));
    EXPECT_THROW(run(ExperimentConfig{"nope", {}, nlohmann::json::object(), "out", 0}), UsageError);
}

TEST(Experiments, Hashing) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
    EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
    EXPECT_EQ(csv_number(0.1), "0.10000000000000001");
}
