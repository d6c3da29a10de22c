#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "geomk/io.hpp"

#include <sstream>

using namespace geomk;

TEST_CASE("point files parse with comments, commas and blank lines") {
    std::istringstream in(
        "# header comment\n"
        "0.5 0.25\n"
        "\n"
        "1,2  # trailing comment\n"
        "-3e-1\t0.0\n");
    auto s = read_points_stream(in, "mem");
    REQUIRE(s.size() == 3);
    CHECK(s.dim == 2);
    CHECK(s[1][0] == 1.0);
    CHECK(s[1][1] == 2.0);
    CHECK(s[2][0] == doctest::Approx(-0.3));
}

TEST_CASE("halfspace files carry d+1 values and normalize on ingest") {
    std::istringstream in(
        "2 0 0.6\n"
        "-2 0 0.6\n"
        "0 2 0.6\n"
        "0 -2 0.6\n");
    auto p = read_halfspaces_stream(in, "mem", true);
    CHECK(p.dim() == 2);
    REQUIRE(p.size() == 4);
    for (const auto& f : p.faces()) {
        CHECK(f.normal.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f.offset == doctest::Approx(0.3));
    }
}

TEST_CASE("ragged and malformed rows are rejected with line numbers") {
    {
        std::istringstream in("1 2\n3 4 5\n");
        CHECK_THROWS_WITH_AS(read_points_stream(in, "mem"), doctest::Contains("mem:2"),
                             GeomError);
    }
    {
        std::istringstream in("1 x\n");
        CHECK_THROWS_WITH_AS(read_points_stream(in, "mem"), doctest::Contains("bad number"),
                             GeomError);
    }
    {
        std::istringstream in("# only comments\n");
        CHECK_THROWS_AS(read_points_stream(in, "mem"), GeomError);
    }
}

TEST_CASE("unbounded halfspace file fails the boundedness certificate") {
    std::istringstream in("1 0 1\n-1 0 1\n");
    CHECK_THROWS_AS(read_halfspaces_stream(in, "mem", true), GeomError);
}

TEST_CASE("round trip through temp files") {
    Rng rng(71);
    std::vector<Vec> pts;
    for (int i = 0; i < 50; ++i) pts.push_back(random_unit(rng, 3) * 0.4);
    PointSet s(pts, 3);
    write_points("io_pts.tmp", s);
    auto back = read_points("io_pts.tmp");
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK((back[i] - s[i]).norm() == 0.0);

    auto p = HPolytope::cube(3, 0.4);
    write_halfspaces("io_hs.tmp", p);
    auto pb = read_halfspaces("io_hs.tmp");
    REQUIRE(pb.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK((pb.faces()[i].normal - p.faces()[i].normal).norm() == 0.0);
        CHECK(pb.faces()[i].offset == p.faces()[i].offset);
    }
}
