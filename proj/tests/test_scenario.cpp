#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "heomcorr/measures.hpp"
#include "heomcorr/scenario.hpp"

using namespace heomcorr;
using namespace heomcorr::scenario;
using nlohmann::json;

namespace {

json base() {
    return json::parse(R"({
        "topology": "independent",
        "solver": "heom",
        "bath": {"lambda": 0.02, "f": 0.1, "omega_c": 1.0},
        "initial": {"kind": "BellPhi", "alpha": 0.7071067811865476},
        "time": {"t_max": 2.0, "n_samples": 20, "dt": 0.01},
        "truncation": {"depth": 2}
    })");
}

std::string error_of(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("config: defaults and derived gamma") {
    const auto cfg = parse_config(base());
    CHECK(cfg.topology == Topology::Independent);
    CHECK(cfg.solver == Solver::Heom);
    CHECK(cfg.bath.gamma == doctest::Approx(0.002));
    CHECK(cfg.system.omega_a == 1.0);
    CHECK(cfg.truncation.depth == 2);
    CHECK(cfg.time_grid().size() == 21);
    CHECK(cfg.time_grid().back() == doctest::Approx(2.0));
    CHECK_FALSE(cfg.entropy_in_bits);

    json j = base();
    j["bath"].erase("f");
    j["bath"]["gamma"] = 0.3;
    CHECK(parse_config(j).bath.gamma == 0.3);
    CHECK_FALSE(parse_config(j).f.has_value());

    json d = base();
    d.erase("time");
    const auto defaults = parse_config(d);
    CHECK(defaults.time.t_max == 30.0);
    CHECK(defaults.time.n_samples == 600);
    CHECK(defaults.time.dt == 0.01);

    // dt shrinks to land on every sample
    json o = base();
    o["time"]["dt"] = 0.03;
    CHECK(parse_config(o).time.dt == doctest::Approx(0.025));
    json l = base();
    l["time"] = json::parse(R"({"t_max": 50.0, "n_samples": 600, "dt": 0.01})");
    CHECK(parse_config(l).time.dt == doctest::Approx(50.0 / 600 / 9));
}

TEST_CASE("config: errors name the offending key") {
    json j = base();
    j["bath"]["lamda"] = 1.0;
    CHECK(error_of(j).find("bath.lamda") != std::string::npos);

    j = base();
    j["extra"] = 1;
    CHECK(error_of(j).find("extra") != std::string::npos);

    j = base();
    j["bath"]["gamma"] = 0.1;
    CHECK(error_of(j).find("bath.f") != std::string::npos);

    j = base();
    j["bath"].erase("f");
    CHECK(error_of(j).find("bath.gamma") != std::string::npos);

    j = base();
    j["bath"].erase("lambda");
    CHECK(error_of(j).find("bath.lambda") != std::string::npos);

    j = base();
    j["topology"] = "both";
    CHECK_FALSE(error_of(j).empty());

    j = base();
    j["initial"]["alpha"] = 1.5;
    CHECK_FALSE(error_of(j).empty());

    j = base();
    j["initial"]["kind"] = "GHZ";
    CHECK(error_of(j).find("initial.kind") != std::string::npos);

    j = base();
    j["time"]["dt"] = 0.2;  // coarser than the sample spacing
    CHECK(error_of(j).find("time.dt") != std::string::npos);

    j = base();
    j["truncation"]["depth"] = 0;
    CHECK(error_of(j).find("truncation.depth") != std::string::npos);

    j = base();
    j["entropy_units"] = "dits";
    CHECK(error_of(j).find("entropy_units") != std::string::npos);
}

TEST_CASE("config: solver and topology constraints") {
    json j = base();
    j["solver"] = "rwa";
    CHECK_NOTHROW(parse_config(j));
    j["topology"] = "common";
    CHECK(error_of(j).find("rwa") != std::string::npos);

    j = base();
    j["solver"] = "rwa";
    j["initial"] = json::parse(R"({"kind": "Custom", "rho": {"real": [[0.25,0.25,0,0],[0.25,0.25,0,0],[0,0,0.25,0.25],[0,0,0.25,0.25]]}})");
    CHECK(error_of(j).find("X-form") != std::string::npos);

    j = base();
    j["solver"] = "pseudomode";
    CHECK(error_of(j).find("pseudomode") != std::string::npos);
    j["topology"] = "common";
    CHECK_NOTHROW(parse_config(j));
}

TEST_CASE("config: custom initial state") {
    json j = base();
    j["initial"] = json::parse(
        R"({"kind": "Custom", "rho": {"real": [[0.5,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0.5]], "imag": [[0,0,0,0.1],[0,0,0,0],[0,0,0,0],[-0.1,0,0,0]]}})");
    const auto cfg = parse_config(j);
    const auto rho = build_initial(cfg.initial);
    CHECK(rho(0, 3) == Complex{0.0, 0.1});

    j["initial"]["rho"]["real"][0][0] = 0.9;  // trace 1.4
    CHECK_FALSE(error_of(j).empty());
}

TEST_CASE("zero coupling gives constant concurrence and discord") {
    json j = base();
    j["bath"] = json::parse(R"({"lambda": 0.0, "gamma": 0.1})");
    const auto series = run_scenario(parse_config(j));
    for (const auto& r : series.rows) {
        CHECK(r.concurrence == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(r.discord == doctest::Approx(measures::kLn2).epsilon(1e-9));
    }
}

TEST_CASE("row 0 reproduces the initial state's measures") {
    for (const char* solver : {"heom", "rwa"}) {
        json j = base();
        j["solver"] = solver;
        j["initial"] = json::parse(R"({"kind": "WernerPsi", "r": 0.8, "alpha": 0.6})");
        const auto cfg = parse_config(j);
        const auto series = run_scenario(cfg);
        const auto rho0 = build_initial(cfg.initial);
        const auto d = measures::discord(rho0);
        const auto& r0 = series.rows.front();
        CHECK(r0.t == 0.0);
        CHECK(std::abs(r0.concurrence - measures::concurrence(rho0)) <= 1e-12);
        CHECK(std::abs(r0.discord - d.discord) <= 1e-12);
        CHECK(std::abs(r0.mutual_information - d.mutual_information) <= 1e-12);
        CHECK(std::abs(r0.classical_correlation - d.classical_correlation) <= 1e-12);
        for (std::size_t i = 1; i < series.rows.size(); ++i) CHECK(series.rows[i].t > series.rows[i - 1].t);
    }
}

TEST_CASE("entropy units") {
    json j = base();
    j["entropy_units"] = "bits";
    const auto series = run_scenario(parse_config(j));
    CHECK(series.rows.front().discord == doctest::Approx(1.0));
    CHECK(series.rows.front().mutual_information == doctest::Approx(2.0));
}

TEST_CASE("csv format and byte reproducibility") {
    const auto cfg = parse_config(base());
    const std::string a = time_series_csv(run_scenario(cfg));
    const std::string b = time_series_csv(run_scenario(cfg));
    CHECK(a == b);
    std::istringstream in(a);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header == "t,concurrence,discord,mutual_information,classical_correlation,trace_error,min_eigenvalue");
    CHECK(first.rfind("0.000000000000e+00,1.000000000000e+00,", 0) == 0);
    CHECK(format_number(0.5) == "5.000000000000e-01");
    CHECK(format_number(-1.25e-7) == "-1.250000000000e-07");
}

TEST_CASE("atomic write replaces the whole file") {
    const auto dir = std::filesystem::temp_directory_path() / "heomcorr_atomic_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.csv";
    write_atomic(path, "first\n");
    write_atomic(path, "second\n");
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "second\n");
    CHECK_FALSE(std::filesystem::exists(dir / "out.csv.tmp"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("sweep of one lambda equals the single run") {
    const auto cfg = parse_config(base());
    const auto points = run_sweep(cfg, {0.02});
    REQUIRE(points.size() == 1);
    REQUIRE(points[0].series.has_value());
    const auto single = run_scenario(cfg);
    REQUIRE(points[0].series->rows.size() == single.rows.size());
    for (std::size_t i = 0; i < single.rows.size(); ++i) {
        CHECK(points[0].series->rows[i].concurrence == single.rows[i].concurrence);
        CHECK(points[0].series->rows[i].discord == single.rows[i].discord);
    }
    const std::string csv = sweep_csv(points);
    CHECK(csv.rfind("lambda,t,concurrence,discord\n2.000000000000e-02,0.000000000000e+00,", 0) == 0);
}

TEST_CASE("sweep keeps order and reports failed points without aborting") {
    const auto cfg = parse_config(base());
    const auto points = run_sweep(cfg, {0.04, -1.0, 0.01});
    REQUIRE(points.size() == 3);
    CHECK(points[0].lambda == 0.04);
    CHECK(points[0].series.has_value());
    CHECK_FALSE(points[1].series.has_value());
    CHECK(points[1].exit_code == 1);
    CHECK_FALSE(points[1].error.empty());
    CHECK(points[2].series.has_value());
}

TEST_CASE("converge through the scenario layer") {
    json j = base();
    j["time"] = json::parse(R"({"t_max": 10.0, "n_samples": 10, "dt": 0.01})");
    const auto report = run_converge(parse_config(j), 1e-3);
    CHECK(report.depth <= 4);
    const std::string csv = converge_csv(report);
    CHECK(csv.rfind("N,dt,max_delta_concurrence,max_delta_discord,ado_count,wall_time\n", 0) == 0);

    json r = base();
    r["solver"] = "rwa";
    CHECK_THROWS_AS(run_converge(parse_config(r), 1e-3), ConfigError);
}

TEST_CASE("automatic truncation") {
    json j = base();
    j["truncation"] = json::parse(R"({"auto": true, "tolerance": 1e-3})");
    j["time"] = json::parse(R"({"t_max": 5.0, "n_samples": 10, "dt": 0.01})");
    const auto series = run_scenario(parse_config(j));
    CHECK(series.depth >= 1);
    CHECK(series.depth <= 4);
    CHECK(series.rows.size() == 11);
}
