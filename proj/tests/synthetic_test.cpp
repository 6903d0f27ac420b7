#include <doctest.h>

#include "negeo/error.hpp"
#include "negeo/estimation.hpp"
#include "negeo/synthetic.hpp"

#include <cmath>

using namespace negeo;

TEST_CASE("noiseless panel satisfies the differenced equation at the truth") {
    synthetic::SyntheticSpec spec;
    const Panel panel = synthetic::generate(spec);
    CHECK(panel.regions() == 10);
    CHECK(panel.years() == 8);
    const auto rs = estimation::residuals(Variant::Krugman, spec.truth, panel);
    CHECK(rs.residual.size() == 70);
    CHECK(rs.residual.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(rs.residual.squaredNorm() < 1e-18);

    const PanelSlice& s = panel.slices[0];
    REQUIRE(s.T);
    CHECK((*s.T - (spec.truth.tau * panel.geography.distance).array().exp().matrix())
              .cwiseAbs()
              .maxCoeff() < 1e-14);
    CHECK(estimation::residuals(Variant::Fujita, spec.truth, panel).residual.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("same seed, same panel; different seed, different panel") {
    synthetic::SyntheticSpec spec;
    spec.noise_sd = 0.005;
    const Panel a = synthetic::generate(spec);
    const Panel b = synthetic::generate(spec);
    for (std::size_t t = 0; t < a.years(); ++t) {
        CHECK(a.slices[t].w == b.slices[t].w);
        CHECK(a.slices[t].Y == b.slices[t].Y);
        CHECK(*a.slices[t].H == *b.slices[t].H);
    }
    spec.seed += 1;
    const Panel c = synthetic::generate(spec);
    CHECK(a.slices[1].w != c.slices[1].w);
}

TEST_CASE("noise moves wages but not incomes") {
    synthetic::SyntheticSpec spec;
    const Panel clean = synthetic::generate(spec);
    spec.noise_sd = 0.01;
    const Panel noisy = synthetic::generate(spec);
    CHECK(clean.slices[0].w == noisy.slices[0].w);
    for (std::size_t t = 0; t < clean.years(); ++t) CHECK(clean.slices[t].Y == noisy.slices[t].Y);
    const Vector dv = (noisy.slices[3].w.array().log() - clean.slices[3].w.array().log()).matrix();
    CHECK(dv.cwiseAbs().maxCoeff() > 0.0);
    CHECK(dv.cwiseAbs().maxCoeff() < 0.2);
}

TEST_CASE("constant incomes give constant wages") {
    synthetic::SyntheticSpec spec;
    spec.innovation_sd = 0.0;
    spec.drift_mean = 0.0;
    spec.drift_sd = 0.0;
    const Panel p = synthetic::generate(spec);
    for (std::size_t t = 1; t < p.years(); ++t)
        CHECK((p.slices[t].w - p.slices[0].w).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("generator settings are validated") {
    synthetic::SyntheticSpec spec;
    spec.years = 1;
    CHECK_THROWS_AS(synthetic::generate(spec), UsageError);
    spec.years = 3;
    spec.noise_sd = -1.0;
    CHECK_THROWS_AS(synthetic::generate(spec), UsageError);
}
