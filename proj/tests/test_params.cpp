#include "sqt/params.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

using namespace sqt;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

TEST_CASE("derive evaluates the dimensionless groups", "[params]")
{
    SystemParams p;
    p.gamma = 1.0;
    p.kappa = 2.0;
    p.tau = 1.0;
    p.n_atoms = 800.0;
    p.g = 1.0; // g^2 N = 800
    p.omega = 3.0;
    p.gamma0 = 0.01;

    const auto d = derive(p);
    CHECK_THAT(d.cooperativity, WithinRel(200.0, 1e-14));
    CHECK_THAT(d.mirror_T, WithinRel(4.0, 1e-14));
    CHECK_THAT(d.gamma_E_rate, WithinRel(9.0, 1e-14));
    CHECK_THAT(d.rho, WithinRel(0.5, 1e-14));
    CHECK_THAT(d.sigma, WithinRel(0.01, 1e-14));
    CHECK_THAT(d.coupling_freq, WithinRel(std::sqrt(800.0), 1e-14));
    CHECK_FALSE(d.gamma_R_rate.has_value());
    CHECK_FALSE(d.gamma_tilde0_raman.has_value());
}

TEST_CASE("zero pump leaves only the bare ground-state decay", "[params]")
{
    SystemParams p;
    p.gamma0 = 0.003;
    p.g = 0.1;
    p.omega = 0.0;
    const auto d = derive(p);
    CHECK(d.gamma_E_rate == 0.0);
    CHECK(d.gamma_tilde0_eit == 0.003);
}

TEST_CASE("effective EIT decay for the pumping-curve parameter set", "[params]")
{
    // 0.001 + 15/201
    const auto d = derive(from_dimensionless({100.0, 0.5, 1e-3, 15.0, 0.0, 0.0, 0.0, 0.0}));
    CHECK_THAT(d.gamma_tilde0_eit, WithinRel(0.07562686567164179, 1e-12));
}

TEST_CASE("Raman rates exist only off resonance", "[params]")
{
    auto p = from_dimensionless({100.0, 0.5, 1e-3, 400.0, 20.0, 0.0, 0.0, 0.0});
    const auto d = derive(p);
    REQUIRE(d.gamma_R_rate.has_value());
    CHECK_THAT(*d.gamma_R_rate, WithinRel(1.0, 1e-12));
    CHECK_THAT(*d.gamma_tilde0_raman, WithinRel(1e-3 + 201.0, 1e-12));
}

TEST_CASE("cooperativity convention fixes the resonant denominator", "[params]")
{
    auto p = from_dimensionless({37.0, 0.3, 1e-3, 2.0, 0.0, 0.0, 0.0, 0.0});
    const auto d = derive(p);
    const std::complex<double> den =
        std::complex<double>(p.kappa, p.delta_c) * std::complex<double>(p.gamma, p.delta_1)
        + p.g * p.g * p.n_atoms / p.tau;
    CHECK_THAT(den.real(), WithinRel(p.kappa * p.gamma * (1.0 + 2.0 * d.cooperativity), 1e-13));
    CHECK(den.imag() == 0.0);
}

TEST_CASE("validation names the offending field", "[params]")
{
    SystemParams p;
    p.kappa = 0.0;
    CHECK_THROWS_WITH(validate(p), ContainsSubstring("kappa"));
    p = {};
    p.gamma = std::nan("");
    CHECK_THROWS_WITH(derive(p), ContainsSubstring("gamma"));
    p = {};
    p.n_atoms = -1.0;
    CHECK_THROWS_AS(validate(p), ValidationError);
    p = {};
    p.r_squeeze = -0.1;
    CHECK_THROWS_WITH(validate(p), ContainsSubstring("r_squeeze"));
}

TEST_CASE("large ground-state decay is a warning, not an error", "[params]")
{
    SystemParams p;
    p.gamma0 = 2.0;
    const auto w = validate(p);
    REQUIRE(w.size() == 1);
    CHECK_THAT(w.front(), ContainsSubstring("gamma0"));
}

TEST_CASE("from_dimensionless builds concrete systems", "[params]")
{
    const auto p = from_dimensionless({100.0, 0.5, 1e-3, 15.0, 0.0, 0.0, 0.0, 0.3});
    CHECK(p.gamma == 1.0);
    CHECK(p.tau == 1.0);
    CHECK(p.kappa == 2.0);
    CHECK(p.gamma0 == 1e-3);
    CHECK(p.n_atoms == kDefaultAtomNumber);
    CHECK_THAT(p.omega * p.omega, WithinRel(15.0, 1e-14));
    CHECK_THAT(derive(p).cooperativity, WithinRel(100.0, 1e-13));

    const auto q = from_dimensionless({0.0, 0.5, 1e-3, 15.0, 0.0, 0.0, 0.0, 0.0});
    CHECK(q.g == 0.0);

    CHECK_THROWS_WITH(from_dimensionless({1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}), ContainsSubstring("rho"));
}

TEST_CASE("derive inverts from_dimensionless", "[params][property]")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto logu = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
    for (int i = 0; i < 200; ++i) {
        const DimensionlessParams x{logu(1e-2, 1e4), logu(1e-2, 1e2), logu(1e-6, 1e-1), logu(1e-3, 1e3),
                                    20.0 * u(rng) - 10.0, 20.0 * u(rng) - 10.0, u(rng) - 0.5, 2.0 * u(rng)};
        const double n = logu(1e2, 1e10);
        const auto y = to_dimensionless(from_dimensionless(x, n));
        CHECK_THAT(y.C, WithinRel(x.C, 1e-12));
        CHECK_THAT(y.rho, WithinRel(x.rho, 1e-12));
        CHECK_THAT(y.sigma, WithinRel(x.sigma, 1e-12));
        CHECK_THAT(y.gamma_E, WithinRel(x.gamma_E, 1e-12));
        CHECK_THAT(y.delta_bar, WithinRel(x.delta_bar, 1e-12));
        CHECK_THAT(y.delta_c_bar, WithinRel(x.delta_c_bar, 1e-12));
        CHECK_THAT(y.delta_2ph_bar, WithinRel(x.delta_2ph_bar, 1e-12));
        CHECK_THAT(y.r, WithinRel(x.r, 1e-12));
    }
}
