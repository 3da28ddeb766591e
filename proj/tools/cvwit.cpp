#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/output.hpp"
#include "cvwit/error.hpp"

namespace {

std::string flag_name(std::string key) {
    for (auto& ch : key)
        if (ch == '_') ch = '-';
    return "--" + key;
}

struct Subcommand {
    CLI::App* app = nullptr;
    std::string config_path;
    std::map<std::string, std::string> values;
};

void add_key_flags(Subcommand& sub, bool m0) {
    sub.app->add_option("--config", sub.config_path, "JSON config file; flags override its values");
    for (const auto& key : cvwit::cli::config_keys()) {
        const std::string name = key.name;
        if (m0 && name == "delta") continue;
        sub.app->add_option(flag_name(name), sub.values[name], key.help);
    }
    // For m0 the conventional confidence parameter is called delta.
    if (m0) sub.app->add_option("--delta", sub.values["fail_prob"], "failure probability (alias of --fail-prob)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cvwit: interferometric two-state entanglement witnesses for two-mode bosonic states"};
    app.set_version_flag("--version", std::string(cvwit::cli::kToolVersion));
    app.require_subcommand(1);

    std::map<std::string, Subcommand> subs;
    const std::pair<const char*, const char*> commands[] = {
        {"witness", "evaluate one minor at one parameter point"},
        {"scan", "evaluate criteria over a 1-D or 2-D parameter grid"},
        {"shots", "repeated finite-shot estimation with coverage statistics"},
        {"m0", "critical number of measurements"},
    };
    for (const auto& [name, help] : commands) {
        auto& sub = subs[name];
        sub.app = app.add_subcommand(name, help);
        add_key_flags(sub, std::string(name) == "m0");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        for (auto& [name, sub] : subs) {
            if (!sub.app->parsed()) continue;
            auto config = sub.config_path.empty() ? cvwit::cli::RunConfig{}
                                                  : cvwit::cli::RunConfig::from_file(sub.config_path);
            for (const auto& key : cvwit::cli::config_keys()) {
                const std::string k = key.name;
                if (name == "m0" && k == "delta") continue;
                const std::string flag = (name == "m0" && k == "fail_prob")
                                             ? (sub.app->count("--delta") ? "--delta" : "--fail-prob")
                                             : flag_name(k);
                if (sub.app->count(flag)) config.set_from_string(k, sub.values[k]);
            }
            const auto text = cvwit::cli::run_command(name, config);
            cvwit::cli::emit(config.string("output", ""), text);
        }
    } catch (const std::exception& e) {
        std::cerr << "cvwit: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
