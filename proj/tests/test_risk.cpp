#include <doctest.h>

#include <cmath>
#include <random>

#include "capreq/instances.hpp"
#include "capreq/risk.hpp"
#include "capreq/rng.hpp"

using namespace capreq;

namespace {

Market b1()
{
    FiniteFilteredSpace space = build_space({0.5, 0.5}, {{{0, 1}}, {{0}, {1}}});
    PriceProcess price;
    price.values = {{0.0}, {1.0, -1.0}};
    return make_market(std::move(space), std::move(price));
}

RiskSpec b1_spec(const Market& m, RandomVariable claim)
{
    return make_risk_spec(m.space, {{2.0, 0.0}, {0.0, 2.0}}, {0.0, 0.0}, std::move(claim));
}

} // namespace

TEST_SUITE("risk")
{
    TEST_CASE("worst-case penalized loss on the binomial")
    {
        Market m = b1();
        RiskSpec spec = b1_spec(m, {0.0, 0.0});
        CHECK(rho({1.0, 0.0}, spec, m.space) == doctest::Approx(0.0));
        CHECK(rho({0.0, 0.0}, spec, m.space) == doctest::Approx(0.0));
        CHECK(rho({2.5, 2.5}, spec, m.space) == doctest::Approx(-2.5));
        CHECK_THROWS_AS(rho({0.0, 0.0}, RiskSpec{}, m.space), Error);
    }

    TEST_CASE("hedging lowers the risk to the balanced value")
    {
        Market m = b1();
        RiskSpec spec = b1_spec(m, {0.0, 0.0});
        RhoGResult r = rho_g({1.0, 0.0}, spec, m);
        REQUIRE(!r.unbounded);
        CHECK(r.value == doctest::Approx(-0.5).epsilon(1e-10));
        REQUIRE(r.hedge.has_value());
        CHECK(r.hedge->positions[0][0] == doctest::Approx(0.5).epsilon(1e-9));

        CHECK(rho_g({0.0, 0.0}, spec, m).value == doctest::Approx(0.0));
        CHECK(rho_g({1.5, 1.5}, spec, m).value == doctest::Approx(-1.5));
    }

    TEST_CASE("capital identity on the binomial")
    {
        Market m = b1();
        for (RandomVariable claim : {RandomVariable{1.0, 0.0}, RandomVariable{0.0, 0.0},
                                     RandomVariable{2.0, 2.0}}) {
            IdentityCheck chk = capital_identity_check(b1_spec(m, claim), m);
            REQUIRE(chk.lhs.has_value());
            REQUIRE(chk.rhs.has_value());
            CHECK(chk.pass);
        }
        IdentityCheck chk = capital_identity_check(b1_spec(m, {1.0, 0.0}), m);
        CHECK(*chk.lhs == doctest::Approx(-0.5).epsilon(1e-10));
        CHECK(*chk.rhs == doctest::Approx(-0.5).epsilon(1e-10));
    }

    TEST_CASE("cash invariance is exact")
    {
        Market m = b1();
        RiskSpec spec = b1_spec(m, {0.0, 0.0});
        auto rng = item_rng(0xCA54ULL, 0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int rep = 0; rep < 20; ++rep) {
            RandomVariable x{gauss(rng), gauss(rng)};
            double c = gauss(rng);
            RandomVariable xc{x[0] + c, x[1] + c};
            CHECK(rho(xc, spec, m.space) == doctest::Approx(rho(x, spec, m.space) - c).epsilon(1e-13));
        }
    }

    TEST_CASE("convexity on random pairs")
    {
        Market m = b1();
        RiskSpec spec = b1_spec(m, {0.0, 0.0});
        auto rng = item_rng(0xC0CULL, 1);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> ud(0.0, 1.0);
        for (int rep = 0; rep < 50; ++rep) {
            RandomVariable x{gauss(rng), gauss(rng)}, y{gauss(rng), gauss(rng)};
            double lam = ud(rng);
            RandomVariable mix{lam * x[0] + (1 - lam) * y[0], lam * x[1] + (1 - lam) * y[1]};
            CHECK(rho(mix, spec, m.space) <=
                  lam * rho(x, spec, m.space) + (1 - lam) * rho(y, spec, m.space) + 1e-10);
        }
    }

    TEST_CASE("hedged risk never exceeds the plain risk; equal without instruments")
    {
        Market m = b1();
        RiskSpec spec = b1_spec(m, {0.0, 0.0});
        auto rng = item_rng(0xD0ULL, 2);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int rep = 0; rep < 20; ++rep) {
            RandomVariable x{gauss(rng), gauss(rng)};
            CHECK(rho_g(x, spec, m).value <= rho(x, spec, m.space) + 1e-12);
        }

        // constant price: G = {0}, hedging cannot help
        FiniteFilteredSpace s = build_space({0.5, 0.5}, {{{0, 1}}, {{0}, {1}}});
        PriceProcess flat;
        flat.values = {{1.0}, {1.0, 1.0}};
        Market trivial = make_market(std::move(s), std::move(flat));
        RiskSpec spec2 = make_risk_spec(trivial.space, {{2.0, 0.0}, {0.0, 2.0}}, {0.1, -0.3},
                                        {0.0, 0.0});
        for (int rep = 0; rep < 10; ++rep) {
            RandomVariable x{gauss(rng), gauss(rng)};
            CHECK(rho_g(x, spec2, trivial).value ==
                  doctest::Approx(rho(x, spec2, trivial.space)).epsilon(1e-12));
        }
    }

    TEST_CASE("identity holds with penalties and random claims")
    {
        for (std::uint64_t seed : {91ULL, 92ULL, 93ULL, 94ULL}) {
            RandomInstance inst = random_instance(seed);
            auto rng = item_rng(seed, 3);
            std::normal_distribution<double> gauss(0.0, 1.0);
            std::vector<RandomVariable> dens;
            std::vector<double> pen;
            for (const auto& g : inst.scen.generators) {
                dens.push_back(g.density);
                pen.push_back(gauss(rng));
            }
            RandomVariable claim(inst.market.space.probs.size());
            for (double& v : claim) v = gauss(rng);
            RiskSpec spec = make_risk_spec(inst.market.space, dens, pen, claim);
            IdentityCheck chk = capital_identity_check(spec, inst.market);
            CHECK(chk.pass);
            CHECK(chk.difference <= 1e-8);
        }
    }

    TEST_CASE("unbounded propagates to both sides of the identity")
    {
        for (std::uint64_t seed : {96ULL, 97ULL}) {
            RandomInstance inst = random_empty_z_instance(seed);
            auto rng = item_rng(seed, 4);
            std::normal_distribution<double> gauss(0.0, 1.0);
            std::vector<RandomVariable> dens;
            std::vector<double> pen;
            for (const auto& g : inst.scen.generators) {
                dens.push_back(g.density);
                pen.push_back(gauss(rng));
            }
            RandomVariable claim(inst.market.space.probs.size());
            for (double& v : claim) v = gauss(rng);
            RiskSpec spec = make_risk_spec(inst.market.space, dens, pen, claim);
            IdentityCheck chk = capital_identity_check(spec, inst.market);
            CHECK(!chk.lhs.has_value());
            CHECK(!chk.rhs.has_value());
            CHECK(chk.pass);
        }
    }
}
