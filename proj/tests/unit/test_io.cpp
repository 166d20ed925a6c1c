#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "qfilter/io.hpp"

using namespace qfilter;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("qfilter_io_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("doubles round-trip through text") {
    for (double x : {0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::numeric_limits<double>::min(),
                     std::numeric_limits<double>::max()}) {
        CHECK(parse_double(format_double(x), "x") == x);
    }
    CHECK(format_double(0.001) == "0.001");
    CHECK_THROWS_AS(parse_double("1.5x", "x"), ValidationError);
    CHECK_THROWS_AS(parse_double("", "x"), ValidationError);
}

TEST_CASE("record round trip is exact") {
    MeasurementRecord r{MeasurementKind::quadrature, TimeGrid{0.0, 1e-3, 4}, {0.1, -1.0 / 3.0, 2e-17, 0.0}};
    std::stringstream s;
    write_record(s, r);
    CHECK(s.str().rfind("kind,dt,steps\nquadrature,0.001,4\n", 0) == 0);
    const auto back = read_record(s);
    CHECK(back.kind == r.kind);
    CHECK(back.grid.dt == r.grid.dt);
    CHECK(back.grid.steps == r.grid.steps);
    CHECK(back.increments == r.increments);
}

TEST_CASE("counting records are written as integers") {
    MeasurementRecord r{MeasurementKind::counting, TimeGrid{0.0, 0.5, 3}, {0.0, 1.0, 0.0}};
    std::stringstream s;
    write_record(s, r);
    CHECK(s.str() == "kind,dt,steps\ncounting,0.5,3\n0\n1\n0\n");
    CHECK(read_record(s).increments == r.increments);
}

TEST_CASE("record reader rejects malformed input") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_record(in);
    };
    CHECK_THROWS_AS(parse(""), ValidationError);
    CHECK_THROWS_AS(parse("kind,dt\n"), ValidationError);
    CHECK_THROWS_AS(parse("kind,dt,steps\nquadrature,0.1\n"), ValidationError);
    CHECK_THROWS_AS(parse("kind,dt,steps\nheterodyne,0.1,1\n0\n"), ValidationError);
    CHECK_THROWS_AS(parse("kind,dt,steps\nquadrature,0.1,2\n0\n"), ValidationError);
    CHECK_THROWS_AS(parse("kind,dt,steps\ncounting,0.1,1\n0.5\n"), ValidationError);
    CHECK_THROWS_AS(parse("kind,dt,steps\nquadrature,0.1,1.5\n0\n"), ValidationError);
    CHECK_THROWS_AS(parse("kind,dt,steps\nquadrature,abc,1\n0\n"), ValidationError);
    CHECK_NOTHROW(parse("kind,dt,steps\r\nquadrature,0.1,1\r\n0.25\r\n"));
    CHECK_THROWS_AS(read_record_file("/nonexistent/record.csv"), ValidationError);
}

TEST_CASE("records must start at zero") {
    MeasurementRecord r{MeasurementKind::quadrature, TimeGrid{1.0, 0.1, 1}, {0.0}};
    std::ostringstream s;
    CHECK_THROWS_AS(write_record(s, r), ValidationError);
}

TEST_CASE("state CSV layout") {
    const TimeGrid grid{0.0, 0.5, 1};
    const std::vector<ComplexMatrix> states{DensityMatrix::basis(2, 0).matrix(), DensityMatrix::maximally_mixed(2).matrix()};
    const std::vector<NamedObservable> obs{{"P_e", pauli::projector_excited()}, {"sigma_x", pauli::sigma_x()}};
    std::ostringstream plain;
    write_state_csv(plain, grid, states, obs);
    CHECK(plain.str() == "t,P_e,sigma_x,trace,purity\n0,1,0,1,1\n0.5,0.5,0,1,0.5\n");
    std::ostringstream with_innovations;
    write_state_csv(with_innovations, grid, states, obs, {0.0, 0.25});
    CHECK(with_innovations.str() == "t,P_e,sigma_x,trace,purity,innovation\n0,1,0,1,1,0\n0.5,0.5,0,1,0.5,0.25\n");
    CHECK_THROWS_AS(write_state_csv(plain, grid, {states[0]}, obs), DimensionError);
    CHECK_THROWS_AS(write_state_csv(plain, grid, states, obs, {0.0}), DimensionError);
}

TEST_CASE("ensemble CSV layout") {
    EnsembleReport report;
    report.grid = TimeGrid{0.0, 1.0, 1};
    report.trajectories = 2;
    report.mean_states = {identity(2) / 2.0, identity(2) / 2.0};
    report.observable_names = {"P_e"};
    report.observable_mean = {{1.0, 0.5}};
    report.observable_stderr = {{0.0, 0.1}};
    report.innovation_mean = {0.0, 0.2};
    report.innovation_stderr = {0.0, 0.3};
    report.record_mean = {0.0, 1.0};
    report.record_stderr = {0.0, 0.4};
    std::ostringstream without;
    write_ensemble_csv(without, report);
    CHECK(without.str() ==
          "t,P_e_mean,P_e_stderr,innovation_mean,innovation_stderr,record_mean,record_stderr\n"
          "0,1,0,0,0,0,0\n1,0.5,0.1,0.2,0.3,1,0.4\n");
    report.trace_distance = {0.0, 0.05};
    std::ostringstream with;
    write_ensemble_csv(with, report);
    CHECK(with.str().find("record_stderr,trace_distance\n") != std::string::npos);
    CHECK(with.str().find("1,0.4,0.05\n") != std::string::npos);
}

TEST_CASE("atomic writes leave no partial file") {
    const auto dir = scratch_dir("atomic");
    const auto target = dir / "out.csv";
    write_file_atomically(target, "a,b\n1,2\n");
    CHECK(slurp(target) == "a,b\n1,2\n");
    write_file_atomically(target, "replaced\n");
    CHECK(slurp(target) == "replaced\n");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& entry : std::filesystem::directory_iterator(dir)) ++files;
    CHECK(files == 1);
    CHECK_THROWS_AS(write_file_atomically(dir / "missing" / "out.csv", "x"), std::filesystem::filesystem_error);
    std::filesystem::remove_all(dir);
}
