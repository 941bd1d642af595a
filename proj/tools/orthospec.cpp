#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "orthospec/errors.hpp"
#include "orthospec/scenario.hpp"

namespace {

void print_error_json(const std::string& type, const std::string& message) {
    nlohmann::json err;
    err["error"] = {{"type", type}, {"message", message}};
    std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orthospec: length spectra of torus orthogeodesics, zeta functions, "
                 "length-comb Fourier analysis and geodesic-flow correlations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = 0;

    const std::vector<std::string> commands = {"spectrum", "count",       "zeta",
                                               "residues", "scan",        "guinand",
                                               "correlation", "laplace",  "mellin"};
    for (const std::string& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "scenario JSON document")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--threads", threads, "worker count (overrides the config)");
    }

    CLI11_PARSE(app, argc, argv);
    std::string command = app.get_subcommands().front()->get_name();

    try {
        std::ifstream in(config_path);
        if (!in) {
            print_error_json("config", "cannot open config file: " + config_path);
            return 2;
        }
        nlohmann::json config;
        try {
            config = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            print_error_json("config", std::string("invalid JSON: ") + e.what());
            return 2;
        }
        if (config.contains("command") &&
            config.at("command").get<std::string>() != command) {
            print_error_json("config", "config 'command' disagrees with the subcommand");
            return 2;
        }
        config["command"] = command;
        if (!out_dir.empty()) config["out"] = out_dir;
        if (threads > 0) config["threads"] = threads;

        orthospec::Scenario sc = orthospec::parse_scenario(config);
        orthospec::run(sc);
        return 0;
    } catch (const orthospec::ConfigError& e) {
        print_error_json("config", e.what());
        return 2;
    } catch (const orthospec::Error& e) {
        print_error_json("numeric", e.what());
        return 3;
    } catch (const nlohmann::json::exception& e) {
        print_error_json("config", e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error_json("internal", e.what());
        return 3;
    }
}
