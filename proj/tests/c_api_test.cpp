#include <doctest.h>

#include "negeo/negeo.h"

#include <cmath>
#include <cstring>
#include <string>

namespace {

const std::string fixtures = NEGEO_FIXTURES;

}  // namespace

TEST_CASE("version and parsing") {
    CHECK(std::string(negeo_version()) == "0.1.0");
    negeo_variant v;
    CHECK(negeo_variant_parse("thomas-agri", &v) == NEGEO_OK);
    CHECK(v == NEGEO_THOMAS_AGRI);
    CHECK(negeo_variant_parse("nope", &v) == NEGEO_ERR_USAGE);
    CHECK(std::string(negeo_last_error()).find("nope") != std::string::npos);
    negeo_format f;
    CHECK(negeo_format_parse("records", &f) == NEGEO_OK);
    CHECK(f == NEGEO_FORMAT_RECORDS);
}

TEST_CASE("derived indices") {
    double r = 0.0;
    CHECK(negeo_returns_index(5.110, &r) == NEGEO_OK);
    CHECK(r == doctest::Approx(1.243).epsilon(1e-3));
    CHECK(negeo_returns_index(1.0, &r) == NEGEO_ERR_DOMAIN);
    CHECK(negeo_blackhole_index(18.668, 0.902) == doctest::Approx(1.830).epsilon(1e-3));
}

TEST_CASE("solve through handles") {
    negeo_geography* geo = nullptr;
    REQUIRE(negeo_geography_line(2, 1.0, &geo) == NEGEO_OK);
    CHECK(negeo_geography_size(geo) == 2);
    negeo_params p{5.0, 0.4, 0.1};
    negeo_solver_options so;
    negeo_solver_options_default(&so);
    CHECK(so.tol == 1e-12);
    const double lambda[] = {0.5, 0.5}, phi[] = {0.5, 0.5};
    negeo_equilibrium* eq = nullptr;
    REQUIRE(negeo_solve(NEGEO_KRUGMAN, &p, geo, lambda, phi, nullptr, 1.0, &so, 0, 0, &eq) == NEGEO_OK);
    CHECK(negeo_equilibrium_converged(eq));
    double w[2];
    CHECK(negeo_equilibrium_get(eq, NEGEO_FIELD_W, w, 2) == NEGEO_OK);
    CHECK(w[0] == doctest::Approx(w[1]).epsilon(1e-12));
    CHECK(negeo_equilibrium_get(eq, NEGEO_FIELD_W, w, 1) == NEGEO_ERR_USAGE);
    negeo_equilibrium_free(eq);

    negeo_equilibrium* missing = reinterpret_cast<negeo_equilibrium*>(0x1);
    CHECK(negeo_solve(NEGEO_KRUGMAN, &p, geo, lambda, nullptr, nullptr, 1.0, &so, 0, 0, &missing) ==
          NEGEO_ERR_USAGE);
    CHECK(missing == nullptr);
    CHECK(std::strlen(negeo_last_error()) > 0);
    negeo_geography_free(geo);
}

TEST_CASE("simulate and sweep") {
    negeo_geography* geo = nullptr;
    REQUIRE(negeo_geography_line(2, 1.0, &geo) == NEGEO_OK);
    negeo_params p{4.0, 0.8, 1.0};
    negeo_dynamics_options dyn;
    negeo_dynamics_options_default(&dyn);
    negeo_solver_options so;
    negeo_solver_options_default(&so);
    const double l0[] = {0.51, 0.49}, phi[] = {0.5, 0.5};
    negeo_trajectory* t = nullptr;
    REQUIRE(negeo_simulate(NEGEO_KRUGMAN, &p, geo, l0, phi, nullptr, 1.0, &dyn, &so, &t) == NEGEO_OK);
    CHECK(negeo_trajectory_concentration(t) >= 0.99);
    CHECK(negeo_trajectory_samples(t) >= 2);
    double lam[2];
    CHECK(negeo_trajectory_lambda(t, 0, lam, 2) == NEGEO_OK);
    CHECK(lam[0] == 0.51);
    negeo_trajectory_free(t);

    const double grid[] = {0.0, 1.0};
    so.max_iter = 2;
    negeo_sweep* s = nullptr;
    negeo_params weak{5.0, 0.3, 0.0};
    REQUIRE(negeo_tau_sweep(NEGEO_KRUGMAN, &weak, geo, grid, 2, 0.01, phi, nullptr, 1.0, &dyn, &so, 2,
                            &s) == NEGEO_OK);
    CHECK(negeo_sweep_size(s) == 2);
    CHECK(negeo_sweep_ok(s, 0));
    CHECK_FALSE(negeo_sweep_ok(s, 1));
    CHECK(std::strlen(negeo_sweep_error(s, 1)) > 0);
    CHECK_FALSE(negeo_sweep_acceptable(s));
    negeo_sweep_free(s);
    negeo_geography_free(geo);
}

TEST_CASE("panel, fit and reports") {
    negeo_synthetic_spec spec;
    negeo_synthetic_spec_default(&spec);
    negeo_panel* panel = nullptr;
    REQUIRE(negeo_panel_generate(&spec, &panel) == NEGEO_OK);
    CHECK(negeo_panel_regions(panel) == 10);
    CHECK(negeo_panel_years(panel) == 8);
    negeo_fit_options fo;
    negeo_fit_options_default(&fo);
    CHECK(fo.multistart == 5);
    negeo_fit* fit = nullptr;
    REQUIRE(negeo_fit_run(NEGEO_KRUGMAN, panel, &fo, &fit) == NEGEO_OK);
    negeo_fit_summary sum;
    negeo_fit_get_summary(fit, &sum);
    CHECK(sum.sigma == doctest::Approx(6.0).epsilon(1e-3));
    CHECK(sum.converged);
    CHECK(sum.observations == 70);

    char* rec = nullptr;
    REQUIRE(negeo_fit_report(fit, NEGEO_FORMAT_RECORDS, &rec) == NEGEO_OK);
    negeo_fit* back = nullptr;
    REQUIRE(negeo_fit_parse_records(rec, &back) == NEGEO_OK);
    char* rec2 = nullptr;
    REQUIRE(negeo_fit_report(back, NEGEO_FORMAT_RECORDS, &rec2) == NEGEO_OK);
    CHECK(std::string(rec) == std::string(rec2));
    negeo_string_free(rec);
    negeo_string_free(rec2);
    negeo_fit_free(back);
    negeo_fit_free(fit);

    fit = nullptr;
    CHECK(negeo_fit_run(NEGEO_FUJITA, panel, nullptr, &fit) == NEGEO_OK);
    negeo_fit_free(fit);
    negeo_panel_free(panel);

    negeo_panel* loaded = nullptr;
    REQUIRE(negeo_panel_load((fixtures + "/panel5.csv").c_str(), (fixtures + "/distances5.csv").c_str(),
                             nullptr, &loaded) == NEGEO_OK);
    CHECK(negeo_panel_has_housing(loaded));
    CHECK_FALSE(negeo_panel_has_transport(loaded));
    negeo_fit* fj = nullptr;
    CHECK(negeo_fit_run(NEGEO_FUJITA, loaded, nullptr, &fj) == NEGEO_ERR_USAGE);
    negeo_panel_free(loaded);

    negeo_panel* bad = nullptr;
    CHECK(negeo_panel_load((fixtures + "/panel5.csv").c_str(),
                           (fixtures + "/distances5_asym.csv").c_str(), nullptr,
                           &bad) == NEGEO_ERR_VALIDATION);
    CHECK(negeo_panel_load("/nonexistent/p.csv", "/nonexistent/d.csv", nullptr, &bad) == NEGEO_ERR_IO);
}

TEST_CASE("degenerate panel maps to the estimation status") {
    negeo_panel* panel = nullptr;
    REQUIRE(negeo_panel_load((fixtures + "/panel_constant.csv").c_str(),
                             (fixtures + "/distances_ab.csv").c_str(), nullptr, &panel) == NEGEO_OK);
    negeo_fit* fit = nullptr;
    CHECK(negeo_fit_run(NEGEO_KRUGMAN, panel, nullptr, &fit) == NEGEO_ERR_ESTIMATION);
    CHECK(fit == nullptr);
    CHECK(std::string(negeo_last_error()).find("variance") != std::string::npos);
    negeo_panel_free(panel);
}

TEST_CASE("free functions accept null") {
    negeo_geography_free(nullptr);
    negeo_equilibrium_free(nullptr);
    negeo_trajectory_free(nullptr);
    negeo_sweep_free(nullptr);
    negeo_panel_free(nullptr);
    negeo_fit_free(nullptr);
    negeo_string_free(nullptr);
}
