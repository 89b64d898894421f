// Command-line driver for the curveflow experiments.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curveflow/experiments.hpp"
#include "curveflow/parallel.hpp"

namespace {

std::string flag_name(std::string name) {
    for (auto& ch : name)
        if (ch == '_') ch = '-';
    return "--" + name;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace curveflow;
    CLI::App app{"Curve shortening flow experiments"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string output_dir;
    std::uint64_t seed = 0;
    int threads = -1;
    std::string config_path;
    auto* out_opt = app.add_option("--output-dir", output_dir, "directory for artifacts and manifest.json");
    auto* seed_opt = app.add_option("--seed", seed, "seed for fixture randomization");
    app.add_option("--threads", threads, "worker threads (default: CURVEFLOW_THREADS or 1)");
    app.add_option("--config", config_path, "JSON config {name, inputs, parameters, output_dir, seed}");

    struct Sub {
        CLI::App* app = nullptr;
        std::vector<std::string> inputs;
        std::map<std::string, std::string> values;
    };
    std::map<std::string, Sub> subs;
    for (const auto& name : experiment_names()) {
        auto& s = subs[name];
        s.app = app.add_subcommand(name, name);
        if (name != "make-fixture" && name != "reaper" && name != "acceptance")
            s.app->add_option("--input", s.inputs, "input curve or raster JSON");
        for (const auto& spec : experiment_schema(name)) s.app->add_option(flag_name(spec.name), s.values[spec.name], spec.help);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = config_from_json(read_json_file(config_path));
        if (!out_opt->empty()) cfg.output_dir = output_dir;
        if (!seed_opt->empty()) cfg.seed = seed;
        if (threads >= 0) set_thread_count(threads);
        for (auto& [name, s] : subs) {
            if (!s.app->parsed()) continue;
            cfg.name = name;
            if (!s.inputs.empty()) cfg.inputs = s.inputs;
            for (const auto& spec : experiment_schema(name)) {
                auto* opt = s.app->get_option(flag_name(spec.name));
                if (!opt->empty()) cfg.parameters[spec.name] = parse_param_text(spec, s.values[spec.name]);
            }
        }
        if (cfg.name.empty()) {
            std::cerr << app.help();
            return 2;
        }
        std::string report;
        const auto outcome = run(cfg, &report);
        if (!report.empty()) std::cout << report << (report.back() == '\n' ? "" : "\n");
        for (const auto& c : outcome.checks)
            if (!c.passed) std::cout << "check failed: " << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
        std::cout << "artifacts in " << cfg.output_dir << "\n";
        return outcome.exit_code;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
