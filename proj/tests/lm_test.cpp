#include <doctest.h>

#include "negeo/error.hpp"
#include "negeo/levenberg_marquardt.hpp"

#include <cmath>
#include <limits>

using namespace negeo;

TEST_CASE("Rosenbrock") {
    lm::ResidualFn f = [](const Vector& x) {
        Vector r(2);
        r << 10.0 * (x(1) - x(0) * x(0)), 1.0 - x(0);
        return r;
    };
    const auto r = lm::minimize(f, Vector({{-1.2, 1.0}}));
    CHECK(r.converged);
    CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.objective < 1e-20);
}

TEST_CASE("exponential decay fit") {
    const double t[] = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
    lm::ResidualFn f = [&](const Vector& x) {
        Vector r(7);
        for (int k = 0; k < 7; ++k) r(k) = 2.5 * std::exp(-1.3 * t[k]) - x(0) * std::exp(-x(1) * t[k]);
        return r;
    };
    const auto r = lm::minimize(f, Vector({{1.0, 0.5}}));
    CHECK(r.x(0) == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(r.x(1) == doctest::Approx(1.3).epsilon(1e-9));
}

TEST_CASE("never accepts an uphill step") {
    lm::ResidualFn f = [](const Vector& x) {
        Vector r(1);
        r << std::sin(3.0 * x(0)) + 0.1 * x(0);
        return r;
    };
    for (double x0 : {-2.0, -0.3, 0.4, 1.7}) {
        const Vector start = Vector::Constant(1, x0);
        const auto r = lm::minimize(f, start);
        CHECK(r.objective <= f(start).squaredNorm());
    }
}

TEST_CASE("non-finite trial points are rejected") {
    lm::ResidualFn f = [](const Vector& x) {
        if (x(0) < 0.5) throw DomainError("outside");
        Vector r(1);
        r << std::log(x(0));
        return r;
    };
    const auto r = lm::minimize(f, Vector::Constant(1, 3.0));
    CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-8));

    lm::ResidualFn bad = [](const Vector&) {
        return Vector::Constant(1, std::numeric_limits<double>::quiet_NaN());
    };
    CHECK_THROWS_AS(lm::minimize(bad, Vector::Zero(1)), NumericalError);
}

TEST_CASE("forward and central Jacobians agree on a smooth map") {
    lm::ResidualFn f = [](const Vector& x) {
        Vector r(3);
        r << std::exp(x(0)) * x(1), std::sin(x(0) + x(1)), x(0) * x(0) * x(1) * x(1);
        return r;
    };
    const Vector x(Vector({{0.7, -1.3}}));
    const Matrix J = lm::forward_jacobian(f, x, f(x), 1e-6);
    const Matrix C = lm::central_jacobian(f, x, 0.5e-6);
    Matrix exact(3, 2);
    exact << std::exp(0.7) * -1.3, std::exp(0.7), std::cos(-0.6), std::cos(-0.6),
        2 * 0.7 * 1.69, 2 * 0.49 * -1.3;
    CHECK((J - exact).cwiseAbs().maxCoeff() < 1e-5);
    CHECK((C - exact).cwiseAbs().maxCoeff() < 1e-8);
}
