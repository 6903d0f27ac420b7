#include <doctest.h>

#include "negeo/error.hpp"
#include "negeo/estimation.hpp"
#include "negeo/levenberg_marquardt.hpp"
#include "negeo/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace negeo;
using estimation::FitOptions;
using estimation::nls_fit;

namespace {

const Panel& clean_panel() {
    static const Panel p = synthetic::generate({});
    return p;
}

PanelSlice flat_slice(int year, const Vector& Y, const Vector& w) {
    PanelSlice s;
    s.year = year;
    s.Y = Y;
    s.w = w;
    return s;
}

}  // namespace

TEST_CASE("single-region residual by hand") {
    Panel p;
    p.geography = Geography::line(1);
    p.region_ids = {"a"};
    p.slices = {flat_slice(1, Vector::Constant(1, 2.0), Vector::Constant(1, 1.0)),
                flat_slice(2, Vector::Constant(1, 2.4), Vector::Constant(1, 1.1))};
    const ModelParams th{4.0, 0.75, 0.3};
    const auto rs = estimation::residuals(Variant::Krugman, th, p);
    REQUIRE(rs.residual.size() == 1);
    const double obs = std::log(1.1);
    const double pred = (std::log(2.4 / 2.0) + (3.0 / 0.75) * std::log(1.1)) / 4.0;
    CHECK(rs.observed(0) == doctest::Approx(obs).epsilon(1e-15));
    CHECK(rs.residual(0) == doctest::Approx(obs - pred).epsilon(1e-13));
}

TEST_CASE("constant panel has zero residuals and is degenerate for fitting") {
    Panel p;
    p.geography = Geography::line(3);
    p.region_ids = {"a", "b", "c"};
    const Vector Y(Vector({{1.0, 2.0, 3.0}}));
    const Vector w(Vector({{1.0, 1.1, 0.9}}));
    for (int t = 0; t < 4; ++t) p.slices.push_back(flat_slice(t, Y, w));
    for (const ModelParams th : {ModelParams{5.0, 0.4, 0.1}, ModelParams{12.0, 1.3, 0.9}})
        CHECK(estimation::residuals(Variant::Krugman, th, p).residual.cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(nls_fit(Variant::Krugman, p), EstimationError);
}

TEST_CASE("residual ordering is region-major and drops unusable rows") {
    Panel p = clean_panel();
    p.slices[2].w(1) = 0.0;
    const auto rs = estimation::residuals(Variant::Krugman, {6.0, 0.9, 0.05}, p);
    CHECK(rs.dropped == 2);
    CHECK(rs.residual.size() == 68);
    CHECK(rs.segments[0] == 7);
    CHECK(rs.segments[1] == 5);
    CHECK(rs.index[0] == std::pair<int, int>{0, 2});
    CHECK(rs.index[7] == std::pair<int, int>{1, 2});
    CHECK(rs.index[8] == std::pair<int, int>{1, 5});
}

TEST_CASE("noiseless recovery") {
    const auto fit = nls_fit(Variant::Krugman, clean_panel());
    CHECK(fit.converged);
    CHECK(fit.sigma.value == doctest::Approx(6.0).epsilon(1e-3));
    CHECK(fit.mu.value == doctest::Approx(0.9).epsilon(1e-3));
    CHECK(fit.tau.value == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(fit.objective < 1e-15);
    CHECK(fit.observations == 70);
    CHECK(fit.r2 == doctest::Approx(1.0));
    CHECK(fit.returns_index == doctest::Approx(1.2).epsilon(1e-3));
    CHECK(fit.blackhole_index == doctest::Approx(0.6).epsilon(1e-2));
    CHECK_FALSE(fit.warn_mu_above_one);
    for (double s : fit.start_objectives) CHECK(fit.objective <= s);
}

TEST_CASE("reparameterization does not move the argmin") {
    FitOptions soft;
    soft.transform = estimation::Transform::Softplus;
    const auto a = nls_fit(Variant::Krugman, clean_panel());
    const auto b = nls_fit(Variant::Krugman, clean_panel(), soft);
    CHECK(std::abs(a.sigma.value - b.sigma.value) <= 1e-6);
    CHECK(std::abs(a.mu.value - b.mu.value) <= 1e-6);
    CHECK(std::abs(a.tau.value - b.tau.value) <= 1e-6);
}

TEST_CASE("objective never exceeds any starting SSR") {
    synthetic::SyntheticSpec spec;
    spec.noise_sd = 0.02;
    spec.seed = 11;
    const Panel p = synthetic::generate(spec);
    FitOptions o;
    o.multistart = 4;
    o.max_iter = 60;
    const auto fit = nls_fit(Variant::Krugman, p, o);
    REQUIRE(fit.start_objectives.size() == 4);
    for (double s : fit.start_objectives) CHECK(fit.objective <= s);
    CHECK(fit.r2 <= 1.0);
}

TEST_CASE("finite-difference Jacobian matches half-step central differences") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const estimation::Objective obj{Variant::Krugman, &clean_panel(), std::nullopt,
                                    estimation::Transform::Exp};
    for (int trial = 0; trial < 10; ++trial) {
        ModelParams th{6.0 * std::exp(u(rng)), 0.9 * std::exp(u(rng)), 0.05 * std::exp(u(rng))};
        const Vector x = obj.to_coordinates(th);
        const Matrix J = lm::forward_jacobian(obj, x, obj(x), 1e-6);
        const Matrix C = lm::central_jacobian(obj, x, 0.5e-6);
        for (Eigen::Index k = 0; k < J.cols(); ++k)
            CHECK((J.col(k) - C.col(k)).norm() <= 1e-4 * C.col(k).norm());
    }
}

TEST_CASE("Thomas at unit mu coincides with Krugman at unit mu") {
    synthetic::SyntheticSpec spec;
    spec.noise_sd = 0.01;
    const Panel p = synthetic::generate(spec);
    FitOptions o;
    o.fixed_mu = 1.0;
    const auto k = nls_fit(Variant::Krugman, p, o);
    const auto t = nls_fit(Variant::ThomasHousing, p, o);
    CHECK(std::abs(k.sigma.value - t.sigma.value) <= 1e-6 * k.sigma.value);
    CHECK(std::abs(k.tau.value - t.tau.value) <= 1e-6 * k.tau.value);
    CHECK(std::isnan(k.mu.se));
    CHECK_FALSE(k.mu.estimated);
}

TEST_CASE("Fujita estimates sigma and mu only") {
    const auto fit = nls_fit(Variant::Fujita, clean_panel());
    CHECK_FALSE(fit.has_tau);
    CHECK(std::isnan(fit.tau.value));
    CHECK(fit.sigma.value == doctest::Approx(6.0).epsilon(1e-3));
    CHECK(fit.mu.value == doctest::Approx(0.9).epsilon(1e-3));
}

TEST_CASE("variant series are required") {
    Panel p = clean_panel();
    for (auto& s : p.slices) {
        s.H.reset();
        s.T.reset();
    }
    CHECK_THROWS_AS(nls_fit(Variant::ThomasHousing, p), UsageError);
    CHECK_THROWS_AS(nls_fit(Variant::Fujita, p), UsageError);
    CHECK_NOTHROW(estimation::residuals(Variant::Krugman, {6.0, 0.9, 0.05}, p));
}

TEST_CASE("too few observations") {
    Panel p;
    p.geography = Geography::line(1);
    p.region_ids = {"a"};
    p.slices = {flat_slice(1, Vector::Constant(1, 2.0), Vector::Constant(1, 1.0)),
                flat_slice(2, Vector::Constant(1, 2.4), Vector::Constant(1, 1.1)),
                flat_slice(3, Vector::Constant(1, 2.3), Vector::Constant(1, 1.0))};
    CHECK_THROWS_AS(nls_fit(Variant::Krugman, p), EstimationError);
}
