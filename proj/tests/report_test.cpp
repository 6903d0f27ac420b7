#include <doctest.h>

#include "negeo/error.hpp"
#include "negeo/model.hpp"
#include "negeo/report.hpp"

#include <cmath>
#include <limits>
#include <string>

using namespace negeo;
using estimation::FitResult;

namespace {

FitResult sample_fit() {
    FitResult f;
    f.variant = Variant::Krugman;
    f.sigma = {5.110, 5.110 / 3.611, 3.611, true};
    f.mu = {1.262, 0.2, 6.31, true};
    f.tau = {0.0123456789, 0.01, 1.23456789, true};
    f.se_available = true;
    f.r2 = 0.111;
    f.dw = 1.943;
    f.see = 0.196;
    f.objective = 0.123456789012345;
    f.observations = 60;
    f.dropped = 2;
    f.iterations = 17;
    f.converged = true;
    f.returns_index = model::returns_index(5.110);
    f.blackhole_index = model::blackhole_index(5.110, 1.262);
    f.warn_mu_above_one = true;
    f.start_objectives = {0.5, 0.25, std::numeric_limits<double>::infinity()};
    return f;
}

}  // namespace

TEST_CASE("table rows") {
    const std::string t = report::write_fit_report(sample_fit(), report::Format::Table);
    CHECK(t.find("σ 5.110 (3.611)") != std::string::npos);
    CHECK(t.find("R² 0.111") != std::string::npos);
    CHECK(t.find("DW 1.943") != std::string::npos);
    CHECK(t.find("SEE 0.196") != std::string::npos);
    CHECK(t.find("60") != std::string::npos);
    CHECK(t.find("σ/(σ−1) 1.243") != std::string::npos);
    CHECK(t.find(model::kMuAboveOneMarker) != std::string::npos);
    CHECK(t.find("σ(1−μ)") == std::string::npos);

    FitResult low = sample_fit();
    low.mu = {0.902, 0.1, 9.02, true};
    low.sigma.value = 18.668;
    low.blackhole_index = model::blackhole_index(18.668, 0.902);
    low.warn_mu_above_one = false;
    const std::string t2 = report::write_fit_report(low, report::Format::Table);
    CHECK(t2.find("σ(1−μ) 1.829") != std::string::npos);
    CHECK(t2.find(model::kMuAboveOneMarker) == std::string::npos);
}

TEST_CASE("records round trip at full precision") {
    const FitResult f = sample_fit();
    const std::string rec = report::write_fit_report(f, report::Format::Records);
    const FitResult g = report::parse_fit_records(rec);
    CHECK(report::same_fit(f, g));
    CHECK(g.tau.value == 0.0123456789);
    CHECK(report::write_fit_report(g, report::Format::Records) == rec);

    FitResult fujita = f;
    fujita.variant = Variant::Fujita;
    fujita.has_tau = false;
    fujita.tau = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                  std::numeric_limits<double>::quiet_NaN(), false};
    fujita.mu.estimated = false;
    CHECK(report::same_fit(fujita, report::parse_fit_records(
                                       report::write_fit_report(fujita, report::Format::Records))));
    const std::string table = report::write_fit_report(fujita, report::Format::Table);
    CHECK(table.find("τ") == std::string::npos);
    CHECK(table.find("(fixed)") != std::string::npos);
}

TEST_CASE("malformed records are rejected") {
    const std::string rec = report::write_fit_report(sample_fit(), report::Format::Records);
    CHECK_THROWS_AS(report::parse_fit_records("format=negeo-fit-1\nbogus=1\n"), ValidationError);
    CHECK_THROWS_AS(report::parse_fit_records(rec + "extra=2\n"), ValidationError);
    std::string broken = rec;
    broken.replace(broken.find("sigma="), 6, "sigma=x");
    CHECK_THROWS_AS(report::parse_fit_records(broken), ValidationError);
    CHECK_THROWS_AS(report::parse_fit_records(""), ValidationError);
}

TEST_CASE("format names") {
    CHECK(report::parse_format("table") == report::Format::Table);
    CHECK(report::parse_format("records") == report::Format::Records);
    CHECK_THROWS_AS(report::parse_format("json"), UsageError);
}
