// heomcorr: simulate / sweep / converge driver.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heomcorr/scenario.hpp"

namespace {

using namespace heomcorr;

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

std::vector<double> parse_lambda_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("--lambda: \"" + item + "\" is not a number");
        }
    }
    if (out.empty()) throw ConfigError("--lambda: empty list");
    return out;
}

// Writes to `path` atomically, or to stdout when no path is configured.
void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return;
    }
    scenario::write_atomic(path, content);
}

template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical tolerance abort: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-qubit correlation dynamics in Lorentzian baths (HEOM, RWA and pseudomode solvers)"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string lambdas;
    double tol = 1e-3;

    auto* simulate = app.add_subcommand("simulate", "Run one scenario and write its time series");
    simulate->add_option("--config", config_path, "Scenario config (JSON)")->required();
    simulate->add_option("--out", out_path, "Output CSV (defaults to the config's output, else stdout)");

    auto* sweep = app.add_subcommand("sweep", "Run a scenario over a lambda grid");
    sweep->add_option("--config", config_path, "Scenario config (JSON)")->required();
    sweep->add_option("--lambda", lambdas, "Comma-separated lambda values")->required();
    sweep->add_option("--out", out_path, "Output CSV (defaults to the config's output, else stdout)");

    auto* conv = app.add_subcommand("converge", "Search hierarchy depth and step size");
    conv->add_option("--config", config_path, "Scenario config (JSON)")->required();
    conv->add_option("--tol", tol, "Observable tolerance")->required();
    conv->add_option("--out", out_path, "Output CSV (defaults to the config's output, else stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (simulate->parsed()) {
        return guarded([&] {
            const auto cfg = scenario::load_config(config_path);
            const auto series = scenario::run_scenario(cfg);
            emit(out_path.empty() ? cfg.output : out_path, scenario::time_series_csv(series));
            return 0;
        });
    }
    if (sweep->parsed()) {
        return guarded([&] {
            const auto cfg = scenario::load_config(config_path);
            const auto grid = parse_lambda_list(lambdas);
            const auto points = scenario::run_sweep(cfg, grid);
            int status = 0;
            for (const auto& p : points) {
                if (p.exit_code != 0) {
                    std::cerr << "lambda=" << p.lambda << ": " << p.error << '\n';
                    if (status == 0) status = p.exit_code;
                }
            }
            emit(out_path.empty() ? cfg.output : out_path, scenario::sweep_csv(points));
            return status;
        });
    }
    return guarded([&] {
        if (!(tol > 0.0)) throw ConfigError("--tol must be > 0");
        const auto cfg = scenario::load_config(config_path);
        const auto report = scenario::run_converge(cfg, tol);
        std::cerr << "converged: N=" << report.depth << " dt=" << report.dt << '\n';
        emit(out_path.empty() ? cfg.output : out_path, scenario::converge_csv(report));
        return 0;
    });
}
