#include <doctest.h>

#include "negeo/data_io.hpp"
#include "negeo/error.hpp"
#include "negeo/synthetic.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <string>

using namespace negeo;
namespace fs = std::filesystem;

namespace {

const fs::path fixtures{NEGEO_FIXTURES};

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "negeo_data_io_test";
    fs::create_directories(dir);
    return dir / name;
}

std::string message_of(auto&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("five-region fixture") {
    const Panel p = io::load_panel(fixtures / "panel5.csv", fixtures / "distances5.csv");
    CHECK(p.regions() == 5);
    CHECK(p.years() == 5);
    CHECK(p.has_housing());
    CHECK_FALSE(p.has_transport());
    CHECK(p.region_ids[0] == "north");
    CHECK(p.region_ids[4] == "west");
    CHECK(p.slices[0].year == 2001);
    CHECK(p.slices[4].w(2) == 0.96);
    CHECK(p.geography.distance(0, 2) == 2.0);
    CHECK(p.geography.distance(2, 0) == 2.0);
    CHECK(io::flagged_rows(p).empty());
}

TEST_CASE("asymmetric distances name the pair") {
    const auto msg = message_of([] {
        io::load_panel(fixtures / "panel5.csv", fixtures / "distances5_asym.csv");
    });
    CHECK(msg.find("north") != std::string::npos);
    CHECK(msg.find("centre") != std::string::npos);
    CHECK_THROWS_AS(io::load_panel(fixtures / "panel5.csv", fixtures / "distances5_asym.csv"),
                    ValidationError);
}

TEST_CASE("gaps are listed") {
    const auto msg = message_of([] {
        io::load_panel(fixtures / "panel5_gap.csv", fixtures / "distances5.csv");
    });
    CHECK(msg.find("centre") != std::string::npos);
    CHECK(msg.find("2002") != std::string::npos);
}

TEST_CASE("nonpositive rows are kept and flagged") {
    const Panel p = io::load_panel(fixtures / "panel5_flagged.csv", fixtures / "distances5.csv");
    const auto flagged = io::flagged_rows(p);
    REQUIRE(flagged.size() == 1);
    CHECK(flagged[0] == "centre@2002");
    CHECK(p.slices[1].w(1) == 0.0);
}

TEST_CASE("single region") {
    const Panel p = io::load_panel(fixtures / "single_panel.csv", fixtures / "single_distances.csv");
    CHECK(p.regions() == 1);
    const auto out = scratch("single_out.csv");
    const auto dist = scratch("single_out_d.csv");
    io::write_panel(p, out, dist);
    const Panel q = io::load_panel(out, dist);
    CHECK(q.slices[1].w(0) == 1.1);
}

TEST_CASE("missing files and bad headers") {
    CHECK_THROWS_AS(io::load_panel(fixtures / "nope.csv", fixtures / "distances5.csv"), IoError);
    const auto bad = scratch("bad_header.csv");
    io::write_file_atomic(bad, "year,region,w,Y\n1,a,1,1\n");
    CHECK_THROWS_AS(io::load_panel(bad, fixtures / "distances5.csv"), UsageError);
    const auto junk = scratch("junk.csv");
    io::write_file_atomic(junk, "region,year,w,Y\nnorth,2001,abc,1\n");
    CHECK_THROWS_AS(io::load_panel(junk, fixtures / "distances5.csv"), ValidationError);
}

TEST_CASE("generated panel round trip is exact") {
    synthetic::SyntheticSpec spec;
    spec.noise_sd = 0.003;
    const Panel p = synthetic::generate(spec);
    const auto a = scratch("rt_panel.csv"), b = scratch("rt_dist.csv"), c = scratch("rt_T.csv");
    io::write_panel(p, a, b, c);
    const Panel q = io::load_panel(a, b, c);
    REQUIRE(q.years() == p.years());
    CHECK(q.region_ids == p.region_ids);
    CHECK(q.geography.distance == p.geography.distance);
    for (std::size_t t = 0; t < p.years(); ++t) {
        CHECK(q.slices[t].year == p.slices[t].year);
        CHECK(q.slices[t].w == p.slices[t].w);
        CHECK(q.slices[t].Y == p.slices[t].Y);
        CHECK(*q.slices[t].H == *p.slices[t].H);
        CHECK(*q.slices[t].T == *p.slices[t].T);
    }
}

TEST_CASE("number formatting round trips") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> e(-300.0, 300.0);
    for (int k = 0; k < 1000; ++k) {
        const double v = std::pow(10.0, e(rng)) * (k % 2 ? -1.0 : 1.0);
        CHECK(io::parse_double(io::format_double(v)) == v);
    }
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(std::isnan(io::parse_double(io::format_double(std::numeric_limits<double>::quiet_NaN()))));
    CHECK(io::parse_double("-inf") == -std::numeric_limits<double>::infinity());
    CHECK_THROWS(io::parse_double("1,5"));
    CHECK_THROWS(io::parse_double("1.5x"));
}

TEST_CASE("atomic write leaves no temporary behind") {
    const auto target = scratch("atomic.txt");
    io::write_file_atomic(target, "first");
    io::write_file_atomic(target, "second");
    CHECK(io::read_file(target) == "second");
    int files = 0;
    for (const auto& entry : fs::directory_iterator(target.parent_path()))
        if (entry.path().filename().string().find("atomic") != std::string::npos) ++files;
    CHECK(files == 1);
    CHECK_THROWS_AS(io::write_file_atomic(scratch("no/such/dir/x.txt"), "x"), IoError);
}
