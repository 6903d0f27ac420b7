#include <doctest.h>

#include "negeo/error.hpp"
#include "negeo/reduced_form.hpp"

#include <cmath>
#include <random>

using namespace negeo;
using reduced_form::log_market_access;
using reduced_form::predict_dlogw;

namespace {

PanelSlice slice(int year, Vector Y, Vector w, std::optional<Vector> H = std::nullopt) {
    PanelSlice s;
    s.year = year;
    s.Y = std::move(Y);
    s.w = std::move(w);
    s.H = std::move(H);
    return s;
}

PanelSlice random_slice(std::mt19937_64& rng, Eigen::Index n, int year) {
    std::uniform_real_distribution<double> u(0.3, 3.0);
    Vector Y(n), w(n), H(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Y(i) = u(rng);
        w(i) = u(rng);
        H(i) = u(rng);
    }
    return slice(year, Y, w, H);
}

}  // namespace

TEST_CASE("market access trivial cases") {
    ModelParams p{5.0, 0.4, 0.1};
    Geography one = Geography::line(1);
    CHECK(log_market_access(Variant::Krugman, p, slice(1, Vector::Ones(1), Vector::Ones(1)), one)(0) ==
          0.0);
    ModelParams free_trade{5.0, 0.4, 0.0};
    const Vector lma = log_market_access(Variant::Krugman, free_trade,
                                         slice(1, Vector::Constant(2, 0.5), Vector::Ones(2)),
                                         Geography::line(2));
    CHECK(std::abs(lma(0)) < 1e-15);
    CHECK(std::abs(lma(1)) < 1e-15);
}

TEST_CASE("scalar prediction oracle") {
    // Direct evaluation of both sums at 30 digits.
    ModelParams p{6.0, 0.9, 0.1};
    const PanelSlice now = slice(2, Vector({{1.1, 1.0}}), Vector::Ones(2));
    const PanelSlice before = slice(1, Vector::Ones(2), Vector::Ones(2));
    const Vector d = predict_dlogw(Variant::Krugman, p, now, before, Geography::line(2));
    CHECK(d(0) == doctest::Approx(0.0100642452421714912087357632818).epsilon(1e-13));
    CHECK(d(1) == doctest::Approx(0.00617647114719463438344838414459).epsilon(1e-13));
}

TEST_CASE("prediction identities") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = 1 + trial % 6;
        Geography g = Geography::line(n, 0.5 + u(rng));
        ModelParams p{1.5 + 10.0 * u(rng), 0.3 + 0.9 * u(rng), u(rng)};
        PanelSlice a = random_slice(rng, n, 1);
        PanelSlice b = random_slice(rng, n, 2);

        for (Variant v : {Variant::Krugman, Variant::ThomasHousing}) {
            CHECK(predict_dlogw(v, p, a, a, g).cwiseAbs().maxCoeff() == 0.0);
            const Vector fwd = predict_dlogw(v, p, b, a, g);
            const Vector bwd = predict_dlogw(v, p, a, b, g);
            CHECK((fwd + bwd).cwiseAbs().maxCoeff() <= 1e-14);
        }

        const double c = 0.1 + 5.0 * u(rng);
        PanelSlice ac = a, bc = b;
        ac.Y *= c;
        bc.Y *= c;
        CHECK((predict_dlogw(Variant::Krugman, p, bc, ac, g) - predict_dlogw(Variant::Krugman, p, b, a, g))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-13);

        ModelParams unit_mu = p;
        unit_mu.mu = 1.0;
        CHECK((log_market_access(Variant::ThomasHousing, unit_mu, a, g) -
               log_market_access(Variant::Krugman, unit_mu, a, g))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-12);

        PanelSlice af = a;
        af.T = (p.tau * g.distance).array().exp().matrix();
        CHECK((log_market_access(Variant::Fujita, p, af, g) - log_market_access(Variant::Krugman, p, a, g))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-12);
    }
}

TEST_CASE("extreme exponents stay finite") {
    ModelParams p{20.0, 0.4, 0.3};
    const PanelSlice s = slice(1, Vector({{1e-3, 1.0, 1e3}}), Vector({{1e-3, 1.0, 1e3}}), Vector::Ones(3));
    for (Variant v : {Variant::Krugman, Variant::ThomasHousing})
        CHECK(log_market_access(v, p, s, Geography::line(3)).allFinite());
}

TEST_CASE("series requirements and domain errors") {
    ModelParams p{5.0, 0.8, 0.1};
    Geography g = Geography::line(2);
    const PanelSlice s = slice(1, Vector::Ones(2), Vector::Ones(2));
    CHECK_THROWS_AS(log_market_access(Variant::Fujita, p, s, g), UsageError);
    CHECK_THROWS_AS(log_market_access(Variant::ThomasHousing, p, s, g), UsageError);
    const PanelSlice neg = slice(1, Vector({{1.0, -1.0}}), Vector::Ones(2));
    CHECK_THROWS_AS(log_market_access(Variant::Krugman, p, neg, g), DomainError);
    std::vector<bool> mask{true, false};
    CHECK(log_market_access(Variant::Krugman, p, neg, g, &mask).allFinite());
}
