#include "heomcorr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <thread>

#include "heomcorr/integrator.hpp"
#include "heomcorr/measures.hpp"
#include "heomcorr/rwa.hpp"

namespace heomcorr::scenario {

using nlohmann::json;

std::string to_string(Solver s) {
    switch (s) {
        case Solver::Heom: return "heom";
        case Solver::Rwa: return "rwa";
        case Solver::Pseudomode: return "pseudomode";
    }
    return "?";
}

std::vector<double> ScenarioConfig::uniform_time_grid_for(const TimeSpec& t) {
    return uniform_time_grid(t.t_max, t.n_samples);
}

namespace {

void reject_unknown(const json& node, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!node.is_object()) throw ConfigError("\"" + where + "\" must be an object");
    std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, value] : node.items()) {
        if (!keys.count(key)) {
            throw ConfigError("unknown key \"" + (where.empty() ? key : where + "." + key) + "\"");
        }
    }
}

double number(const json& node, const char* key, const std::string& where) {
    const std::string name = where.empty() ? key : where + "." + key;
    if (!node.contains(key)) throw ConfigError("missing key \"" + name + "\"");
    if (!node.at(key).is_number()) throw ConfigError("\"" + name + "\" must be a number");
    return node.at(key).get<double>();
}

double number_or(const json& node, const char* key, const std::string& where, double fallback) {
    return node.contains(key) ? number(node, key, where) : fallback;
}

std::string text(const json& node, const char* key, const std::string& where) {
    const std::string name = where.empty() ? key : where + "." + key;
    if (!node.contains(key)) throw ConfigError("missing key \"" + name + "\"");
    if (!node.at(key).is_string()) throw ConfigError("\"" + name + "\" must be a string");
    return node.at(key).get<std::string>();
}

std::size_t count(const json& node, const char* key, const std::string& where, std::size_t fallback) {
    if (!node.contains(key)) return fallback;
    const std::string name = where + "." + key;
    if (!node.at(key).is_number_integer() || node.at(key).get<long long>() < 1) {
        throw ConfigError("\"" + name + "\" must be a positive integer");
    }
    return node.at(key).get<std::size_t>();
}

ComplexMatrix parse_matrix(const json& node) {
    reject_unknown(node, "initial.rho", {"real", "imag"});
    auto read = [&](const char* part, bool required) {
        ComplexMatrix m(4, 4);
        if (!node.contains(part)) {
            if (required) throw ConfigError(std::string("missing key \"initial.rho.") + part + "\"");
            return m;
        }
        const json& rows = node.at(part);
        if (!rows.is_array() || rows.size() != 4) throw ConfigError("initial.rho must be 4x4");
        for (std::size_t r = 0; r < 4; ++r) {
            if (!rows[r].is_array() || rows[r].size() != 4) throw ConfigError("initial.rho must be 4x4");
            for (std::size_t c = 0; c < 4; ++c) {
                if (!rows[r][c].is_number()) throw ConfigError("initial.rho entries must be numbers");
                m(r, c) = rows[r][c].get<double>();
            }
        }
        return m;
    };
    ComplexMatrix re = read("real", true);
    ComplexMatrix im = read("imag", false);
    return re + Complex{0.0, 1.0} * im;
}

InitialStateSpec parse_initial(const json& node) {
    if (!node.is_object()) throw ConfigError("\"initial\" must be an object");
    const std::string kind = text(node, "kind", "initial");
    if (kind == "BellPhi" || kind == "BellPsi") {
        reject_unknown(node, "initial", {"kind", "alpha"});
        const double alpha = number(node, "alpha", "initial");
        if (kind == "BellPhi") return BellPhi{alpha};
        return BellPsi{alpha};
    }
    if (kind == "WernerPhi" || kind == "WernerPsi") {
        reject_unknown(node, "initial", {"kind", "alpha", "r"});
        const double alpha = number(node, "alpha", "initial");
        const double r = number(node, "r", "initial");
        if (kind == "WernerPhi") return WernerPhi{r, alpha};
        return WernerPsi{r, alpha};
    }
    if (kind == "Custom") {
        reject_unknown(node, "initial", {"kind", "rho"});
        if (!node.contains("rho")) throw ConfigError("missing key \"initial.rho\"");
        return CustomState{parse_matrix(node.at("rho"))};
    }
    throw ConfigError("initial.kind must be one of BellPhi, BellPsi, WernerPhi, WernerPsi, Custom; got \"" + kind +
                      "\"");
}

}  // namespace

ScenarioConfig parse_config(const json& tree) {
    reject_unknown(tree, "", {"comment", "topology", "solver", "system", "bath", "initial", "time", "truncation",
                              "pseudomode", "output", "entropy_units"});
    ScenarioConfig cfg;
    if (tree.contains("comment")) cfg.comment = text(tree, "comment", "");
    cfg.topology = topology_from_string(text(tree, "topology", ""));

    const std::string solver = text(tree, "solver", "");
    if (solver == "heom")
        cfg.solver = Solver::Heom;
    else if (solver == "rwa")
        cfg.solver = Solver::Rwa;
    else if (solver == "pseudomode")
        cfg.solver = Solver::Pseudomode;
    else
        throw ConfigError("solver must be heom, rwa or pseudomode; got \"" + solver + "\"");

    if (tree.contains("system")) {
        const json& sys = tree.at("system");
        reject_unknown(sys, "system", {"omega_a", "omega_b"});
        cfg.system.omega_a = number_or(sys, "omega_a", "system", 1.0);
        cfg.system.omega_b = number_or(sys, "omega_b", "system", 1.0);
    }
    cfg.system.validate();

    if (!tree.contains("bath")) throw ConfigError("missing key \"bath\"");
    const json& bath = tree.at("bath");
    reject_unknown(bath, "bath", {"lambda", "f", "gamma", "omega_c"});
    cfg.bath.topology = cfg.topology;
    cfg.bath.lambda = number(bath, "lambda", "bath");
    cfg.bath.omega_c = number_or(bath, "omega_c", "bath", 1.0);
    const bool has_f = bath.contains("f");
    const bool has_gamma = bath.contains("gamma");
    if (has_f == has_gamma) throw ConfigError("bath: give exactly one of \"bath.f\" or \"bath.gamma\"");
    if (has_f) {
        cfg.f = number(bath, "f", "bath");
        if (!(*cfg.f > 0.0)) throw ConfigError("\"bath.f\" must be > 0");
        cfg.bath.gamma = *cfg.f * cfg.bath.lambda;
    } else {
        cfg.bath.gamma = number(bath, "gamma", "bath");
    }
    cfg.bath.validate();

    if (!tree.contains("initial")) throw ConfigError("missing key \"initial\"");
    cfg.initial = parse_initial(tree.at("initial"));

    if (tree.contains("time")) {
        const json& time = tree.at("time");
        reject_unknown(time, "time", {"t_max", "n_samples", "dt"});
        cfg.time.t_max = number_or(time, "t_max", "time", cfg.time.t_max);
        cfg.time.n_samples = count(time, "n_samples", "time", cfg.time.n_samples);
        cfg.time.dt = number_or(time, "dt", "time", cfg.time.dt);
    }
    if (!(cfg.time.t_max > 0.0)) throw ConfigError("\"time.t_max\" must be > 0");
    if (!(cfg.time.dt > 0.0)) throw ConfigError("\"time.dt\" must be > 0");

    if (tree.contains("truncation")) {
        const json& trunc = tree.at("truncation");
        reject_unknown(trunc, "truncation", {"depth", "auto", "tolerance"});
        if (trunc.contains("auto")) {
            if (!trunc.at("auto").is_boolean()) throw ConfigError("\"truncation.auto\" must be true or false");
            cfg.truncation.automatic = trunc.at("auto").get<bool>();
        }
        if (trunc.contains("depth")) {
            if (cfg.truncation.automatic) throw ConfigError("truncation: give \"depth\" or \"auto\", not both");
            cfg.truncation.depth = static_cast<int>(count(trunc, "depth", "truncation", 4));
        }
        cfg.truncation.tolerance = number_or(trunc, "tolerance", "truncation", cfg.truncation.tolerance);
        if (!(cfg.truncation.tolerance > 0.0)) throw ConfigError("\"truncation.tolerance\" must be > 0");
    }

    if (tree.contains("pseudomode")) {
        const json& pm = tree.at("pseudomode");
        reject_unknown(pm, "pseudomode", {"n_ph"});
        cfg.n_ph = static_cast<int>(count(pm, "n_ph", "pseudomode", 32));
        if (cfg.n_ph < 2) throw ConfigError("\"pseudomode.n_ph\" must be >= 2");
    }
    if (tree.contains("output")) cfg.output = text(tree, "output", "");
    if (tree.contains("entropy_units")) {
        const std::string units = text(tree, "entropy_units", "");
        if (units != "nats" && units != "bits") throw ConfigError("\"entropy_units\" must be \"nats\" or \"bits\"");
        cfg.entropy_in_bits = units == "bits";
    }

    const DensityMatrix rho0 = build_initial(cfg.initial);
    if (cfg.solver == Solver::Rwa) {
        if (cfg.topology != Topology::Independent) throw ConfigError("solver \"rwa\" requires topology \"independent\"");
        if (!is_x_form(rho0.matrix())) throw ConfigError("solver \"rwa\" requires an X-form initial state");
    }
    if (cfg.solver == Solver::Pseudomode && cfg.topology != Topology::Common) {
        throw ConfigError("solver \"pseudomode\" requires topology \"common\"");
    }
    // The sample count is fixed, so dt is shortened to the nearest step that
    // lands on every sample.
    const double spacing = cfg.time.t_max / static_cast<double>(cfg.time.n_samples);
    if (cfg.time.dt > spacing * (1 + 1e-12)) throw ConfigError("\"time.dt\" exceeds the sample spacing t_max / n_samples");
    cfg.time.dt = spacing / std::ceil(spacing / cfg.time.dt - 1e-9);
    steps_between_samples(cfg.time_grid(), cfg.time.dt);
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json tree;
    try {
        tree = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(tree);
}

TimeSeries measure_trajectory(const Trajectory& traj, bool entropy_in_bits) {
    const double unit = entropy_in_bits ? 1.0 / measures::kLn2 : 1.0;
    TimeSeries series;
    series.rows.resize(traj.states.size());
    const long n = static_cast<long>(traj.states.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        const auto& rho = traj.states[i];
        const auto d = measures::discord(rho);
        series.rows[i] = TimeSeriesRow{traj.times[i],
                                       measures::concurrence(rho),
                                       unit * d.discord,
                                       unit * d.mutual_information,
                                       unit * d.classical_correlation,
                                       traj.diagnostics[i].trace_error,
                                       traj.diagnostics[i].min_eigenvalue};
    }
    return series;
}

SolverRun run_solver(const ScenarioConfig& config) {
    const DensityMatrix rho0 = build_initial(config.initial);
    const std::vector<double> grid = config.time_grid();
    SolverRun run;
    run.dt = config.time.dt;
    switch (config.solver) {
        case Solver::Heom: {
            run.depth = config.truncation.depth;
            if (config.truncation.automatic) {
                const auto report = run_converge(config, config.truncation.tolerance);
                run.depth = report.depth;
                run.dt = report.dt;
            }
            const auto h = heom::make_hierarchy(config.system, config.bath, heom::TruncationPolicy{run.depth});
            run.trajectory = heom::integrate(h, rho0, grid, run.dt);
            break;
        }
        case Solver::Rwa:
            if (std::abs(config.system.omega_a - config.system.omega_b) > 1e-12 ||
                std::abs(config.bath.omega_c - config.system.omega_a) > 1e-12) {
                throw ConfigError("solver \"rwa\" requires resonant identical qubits (omega_a = omega_b = omega_c)");
            }
            run.trajectory =
                rwa::rwa_trajectory(rho0, grid, rwa::PFunctionParams{config.bath.lambda, config.bath.gamma});
            run.dt = 0.0;
            break;
        case Solver::Pseudomode: {
            rwa::PseudomodeOptions options;
            options.n_ph = config.n_ph;
            options.dt = run.dt;
            run.trajectory = rwa::pseudomode_evolve_auto(rho0, config.system, config.bath, grid, options);
            break;
        }
    }
    return run;
}

TimeSeries run_scenario(const ScenarioConfig& config) {
    const SolverRun run = run_solver(config);
    TimeSeries series = measure_trajectory(run.trajectory, config.entropy_in_bits);
    series.depth = run.depth;
    series.dt = run.dt;
    return series;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

std::string time_series_csv(const TimeSeries& series) {
    std::string out =
        "t,concurrence,discord,mutual_information,classical_correlation,trace_error,min_eigenvalue\n";
    for (const auto& r : series.rows) {
        out += format_number(r.t) + ',' + format_number(r.concurrence) + ',' + format_number(r.discord) + ',' +
               format_number(r.mutual_information) + ',' + format_number(r.classical_correlation) + ',' +
               format_number(r.trace_error) + ',' + format_number(r.min_eigenvalue) + '\n';
    }
    return out;
}

std::vector<SweepPoint> run_sweep(const ScenarioConfig& config, const std::vector<double>& lambdas) {
    if (lambdas.empty()) throw ConfigError("sweep: empty lambda grid");
    auto run_point = [&config](double lambda) {
        SweepPoint point{lambda, std::nullopt, {}, 0};
        try {
            ScenarioConfig c = config;
            c.bath.lambda = lambda;
            if (c.f) c.bath.gamma = *c.f * lambda;
            c.bath.validate();
            point.series = run_scenario(c);
        } catch (const ConfigError& e) {
            point.error = e.what();
            point.exit_code = 1;
        } catch (const std::exception& e) {
            point.error = e.what();
            point.exit_code = 2;
        }
        return point;
    };

    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<SweepPoint> points;
    points.reserve(lambdas.size());
    for (std::size_t begin = 0; begin < lambdas.size(); begin += workers) {
        const std::size_t end = std::min(lambdas.size(), begin + workers);
        std::vector<std::future<SweepPoint>> batch;
        for (std::size_t i = begin; i < end; ++i) batch.push_back(std::async(std::launch::async, run_point, lambdas[i]));
        for (auto& f : batch) points.push_back(f.get());
    }
    return points;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
    std::string out = "lambda,t,concurrence,discord\n";
    for (const auto& p : points) {
        if (!p.series) continue;
        for (const auto& r : p.series->rows) {
            out += format_number(p.lambda) + ',' + format_number(r.t) + ',' + format_number(r.concurrence) + ',' +
                   format_number(r.discord) + '\n';
        }
    }
    return out;
}

heom::ConvergenceReport run_converge(const ScenarioConfig& config, double tolerance) {
    if (config.solver != Solver::Heom) throw ConfigError("converge requires solver \"heom\"");
    heom::ConvergenceScenario scenario{to_string(config.topology) + " lambda=" + format_number(config.bath.lambda),
                                       config.system, config.bath, build_initial(config.initial),
                                       config.time_grid()};
    // Start from the largest step <= 0.05 that divides the sample spacing.
    heom::ConvergenceOptions options;
    const double spacing = config.time.t_max / static_cast<double>(config.time.n_samples);
    options.initial_dt = spacing / std::ceil(spacing / options.initial_dt - 1e-9);
    return heom::converge(scenario, tolerance, options);
}

std::string converge_csv(const heom::ConvergenceReport& report) {
    std::string out = "N,dt,max_delta_concurrence,max_delta_discord,ado_count,wall_time\n";
    for (const auto& r : report.rows) {
        out += std::to_string(r.depth) + ',' + format_number(r.dt) + ',' + format_number(r.max_delta_concurrence) +
               ',' + format_number(r.max_delta_discord) + ',' + std::to_string(r.ado_count) + ',' +
               format_number(r.wall_time) + '\n';
    }
    return out;
}

}  // namespace heomcorr::scenario
