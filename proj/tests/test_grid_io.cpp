#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "hcma/error.hpp"
#include "hcma/grid_io.hpp"

using namespace hcma;

namespace {

GridFunction ramp(const GridSpec& G) {
    GridFunction u(G, 1.25);
    for (std::size_t p = 0; p < u.values.size(); ++p) u.values[p] = std::sin(0.37 * p) / 3.0 + 1e-17 * p;
    return u;
}

}  // namespace

TEST_SUITE("grid_io") {

TEST_CASE("shortest round-trip doubles") {
    for (double v : {0.0, -0.0, 1.0 / 3.0, 1e-300, -2.5e17, 0.1, std::numeric_limits<double>::denorm_min(),
                     std::numeric_limits<double>::max()}) {
        const double back = parse_double(format_double(v));
        CHECK(back == v);
        CHECK(std::signbit(back) == std::signbit(v));
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK_THROWS_AS(parse_double("1.0x"), ValidationError);
    CHECK_THROWS_AS(parse_double(""), ValidationError);
}

TEST_CASE("CSV round trip is bit exact for torus and patch") {
    for (const GridSpec& G : {GridSpec::torus(6, 4), GridSpec::centred_patch(8, 3, 3)}) {
        GridFunction u = ramp(G);
        u.symmetric = true;
        std::stringstream ss;
        write_grid_csv(ss, u);
        const GridFunction v = read_grid_csv(ss);
        CHECK(v.grid == G);
        CHECK(v.omega11 == u.omega11);
        CHECK(v.symmetric);
        CHECK(v.values == u.values);
    }
}

TEST_CASE("JSON round trip") {
    const GridFunction u = ramp(GridSpec::torus(4, 3));
    const GridFunction v = grid_from_json(grid_to_json(u));
    CHECK(v.grid == u.grid);
    CHECK(v.values == u.values);
}

TEST_CASE("malformed CSV is rejected") {
    const GridFunction u = ramp(GridSpec::torus(4, 2));
    std::stringstream ss;
    write_grid_csv(ss, u);
    const std::string text = ss.str();

    SUBCASE("unknown header key") {
        std::string t = text;
        t.replace(t.find("{") + 1, 0, "\"extra\":1,");
        std::istringstream is(t);
        CHECK_THROWS_AS(read_grid_csv(is), ValidationError);
    }
    SUBCASE("truncated rows") {
        std::istringstream is(text.substr(0, text.size() / 2));
        CHECK_THROWS_AS(read_grid_csv(is), ValidationError);
    }
    SUBCASE("missing header") {
        std::istringstream is(text.substr(text.find('\n') + 1));
        CHECK_THROWS_AS(read_grid_csv(is), ValidationError);
    }
}

TEST_CASE("atomic file write and load") {
    const auto dir = std::filesystem::temp_directory_path() / "hcma_grid_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "u.csv").string();
    const GridFunction u = ramp(GridSpec::centred_patch(6, 4, 2));
    save_grid_csv(path, u);
    CHECK(load_grid_csv(path).values == u.values);
    write_file_atomic(path, "replaced\n");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "replaced");
    for (const auto& e : std::filesystem::directory_iterator(dir))
        CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(load_grid_csv((dir / "missing.csv").string()), ValidationError);
}

}
