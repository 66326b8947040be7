#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nnls/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectral data, wedge asymptotics and PDE comparisons for the nonlocal NLS equation"};
    app.require_subcommand(1);

    std::string config, out = ".";
    std::vector<std::string> tol;
    using Cmd = int (*)(const nnls::ExperimentConfig&, const std::string&, std::ostream&);
    Cmd chosen = nullptr;
    const std::vector<std::pair<std::string, Cmd>> cmds{
        {"scatter", nnls::cmd_scatter},
        {"predict", nnls::cmd_predict},
        {"compare", nnls::cmd_compare},
        {"match", nnls::cmd_match},
    };
    const std::vector<std::string> help{
        "Compute spectral data and write the JSON cache",
        "Evaluate wedge predictions into a CSV",
        "Run the PDE and compare it with the predictions",
        "Check the alpha -> 1 matching",
    };
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        auto* sub = app.add_subcommand(cmds[i].first, help[i]);
        sub->add_option("--config", config, "experiment config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory");
        sub->add_option("--tol", tol, "override a tolerance, key=value (repeatable)");
        sub->callback([&chosen, f = cmds[i].second] { chosen = f; });
    }
    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = nnls::load_config(config);
        for (const auto& kv : tol) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw nnls::ConfigError("--tol expects key=value, got '" + kv + "'");
            cfg.tol.set(kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
        }
        return chosen(cfg, out, std::cout);
    } catch (const nnls::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
