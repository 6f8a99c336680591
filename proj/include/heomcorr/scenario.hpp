#pragma once

// Scenario runner behind the command-line tool: config parsing, solver
// dispatch, measure evaluation and CSV output.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "heomcorr/heom.hpp"
#include "heomcorr/model.hpp"
#include "json.hpp"

namespace heomcorr::scenario {

enum class Solver { Heom, Rwa, Pseudomode };

std::string to_string(Solver s);

struct TimeSpec {
    double t_max = 30.0;
    std::size_t n_samples = 600;
    double dt = 0.01;
};

struct TruncationSpec {
    int depth = 4;
    bool automatic = false;
    double tolerance = 1e-3;
};

struct ScenarioConfig {
    std::string comment;
    Topology topology = Topology::Independent;
    Solver solver = Solver::Heom;
    SystemSpec system;
    BathSpec bath;
    std::optional<double> f;  // gamma / lambda when the config gives f
    InitialStateSpec initial = BellPhi{0.7071067811865476};
    TimeSpec time;
    TruncationSpec truncation;
    int n_ph = 32;
    std::string output;
    bool entropy_in_bits = false;

    std::vector<double> time_grid() const { return uniform_time_grid_for(time); }
    static std::vector<double> uniform_time_grid_for(const TimeSpec& t);
};

/// Parses and validates a config tree. Unknown keys, missing keys and
/// inconsistent combinations throw ConfigError naming the key.
ScenarioConfig parse_config(const nlohmann::json& tree);
ScenarioConfig load_config(const std::filesystem::path& path);

struct TimeSeriesRow {
    double t;
    double concurrence;
    double discord;
    double mutual_information;
    double classical_correlation;
    double trace_error;
    double min_eigenvalue;
};

struct TimeSeries {
    std::vector<TimeSeriesRow> rows;
    int depth = 0;    // hierarchy depth used (heom only)
    double dt = 0.0;  // integrator step used
};

/// Evaluates every measure on each sampled state.
TimeSeries measure_trajectory(const Trajectory& traj, bool entropy_in_bits = false);

/// Trajectory from the configured solver, before measures are applied.
struct SolverRun {
    Trajectory trajectory;
    int depth = 0;
    double dt = 0.0;
};
SolverRun run_solver(const ScenarioConfig& config);

/// Runs the configured solver and returns the measured series.
TimeSeries run_scenario(const ScenarioConfig& config);

/// Writes `content` to `path` through a temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Header plus one "%.12e" row per sample.
std::string time_series_csv(const TimeSeries& series);

struct SweepPoint {
    double lambda;
    std::optional<TimeSeries> series;
    std::string error;  // set when the point failed
    int exit_code = 0;
};

/// Runs the config once per lambda (gamma follows f when the config gives
/// f). Points run concurrently; results keep the grid order.
std::vector<SweepPoint> run_sweep(const ScenarioConfig& config, const std::vector<double>& lambdas);

/// Long-form CSV: lambda,t,concurrence,discord for every successful point.
std::string sweep_csv(const std::vector<SweepPoint>& points);

heom::ConvergenceReport run_converge(const ScenarioConfig& config, double tolerance);

/// N,dt,max_delta_concurrence,max_delta_discord,ado_count,wall_time.
std::string converge_csv(const heom::ConvergenceReport& report);

/// "%.12e".
std::string format_number(double v);

}  // namespace heomcorr::scenario
