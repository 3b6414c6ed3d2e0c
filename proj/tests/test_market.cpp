#include <doctest.h>

#include <random>

#include "capreq/geometry.hpp"
#include "capreq/instances.hpp"
#include "capreq/market.hpp"
#include "capreq/rng.hpp"

using namespace capreq;

namespace {

Market b1()
{
    FiniteFilteredSpace space = build_space({0.5, 0.5}, {{{0, 1}}, {{0}, {1}}}, {"u", "d"});
    PriceProcess price;
    price.values = {{0.0}, {1.0, -1.0}};
    price.normalized = true;
    return make_market(std::move(space), std::move(price));
}

} // namespace

TEST_SUITE("market")
{
    TEST_CASE("build_space accepts the minimal binomial")
    {
        FiniteFilteredSpace s = build_space({0.5, 0.5}, {{{0, 1}}, {{0}, {1}}});
        CHECK(s.num_outcomes() == 2);
        CHECK(s.horizon() == 1);
        CHECK(s.atom_of[1][1] == 1);
    }

    TEST_CASE("build_space accepts a two-step refinement")
    {
        FiniteFilteredSpace s = build_space({0.25, 0.25, 0.25, 0.25},
                                            {{{0, 1, 2, 3}}, {{0, 1}, {2, 3}}, {{0}, {1}, {2}, {3}}});
        CHECK(s.horizon() == 2);
        CHECK(s.num_atoms(1) == 2);
    }

    TEST_CASE("build_space rejects a non-singleton terminal partition")
    {
        CHECK_THROWS_WITH_AS(build_space({0.5, 0.5}, {{{0, 1}}, {{0, 1}}}),
                             doctest::Contains("singleton"), Error);
        try {
            build_space({0.5, 0.5}, {{{0, 1}}, {{0, 1}}});
        } catch (const Error& e) {
            CHECK(e.code == Errc::FinalPartitionNotSingletons);
        }
    }

    TEST_CASE("build_space rejects zero probabilities and bad sums")
    {
        CHECK_THROWS_AS(build_space({1.0, 0.0}, {{{0, 1}}, {{0}, {1}}}), Error);
        CHECK_THROWS_AS(build_space({0.5, 0.4}, {{{0, 1}}, {{0}, {1}}}), Error);
    }

    TEST_CASE("build_space rejects non-refining partitions")
    {
        try {
            build_space({0.25, 0.25, 0.25, 0.25},
                        {{{0, 1, 2, 3}}, {{0, 1}, {2, 3}}, {{0, 2}, {1}, {3}}, {{0}, {1}, {2}, {3}}});
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code == Errc::NonRefiningFiltration);
        }
    }

    TEST_CASE("terminal wealth on the binomial")
    {
        Market m = b1();
        TradingStrategy zero{{{0.0}}};
        CHECK(terminal_wealth(0.0, zero, m.price, m.space) == RandomVariable{0.0, 0.0});

        TradingStrategy half{{{0.5}}};
        RandomVariable w = terminal_wealth(0.5, half, m.price, m.space);
        CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(w[1] == doctest::Approx(0.0).epsilon(1e-14));

        TradingStrategy minus{{{-1.0}}};
        RandomVariable w2 = terminal_wealth(1.0, minus, m.price, m.space);
        CHECK(w2[0] == doctest::Approx(0.0));
        CHECK(w2[1] == doctest::Approx(2.0));
    }

    TEST_CASE("terminal wealth rejects mismatched shapes")
    {
        Market m = b1();
        TradingStrategy bad{{{0.5, 0.5}}};
        CHECK_THROWS_AS(terminal_wealth(0.0, bad, m.price, m.space), Error);
    }

    TEST_CASE("attainable basis dimensions")
    {
        CHECK(b1().subspace.dimension() == 1);
        CHECK(b1().subspace.basis[0] == RandomVariable{1.0, -1.0});

        // constant price: nothing attainable
        FiniteFilteredSpace s = build_space({0.5, 0.5}, {{{0, 1}}, {{0}, {1}}});
        PriceProcess flat;
        flat.values = {{3.0}, {3.0, 3.0}};
        CHECK(attainable_basis(s, flat).dimension() == 0);

        // two periods, increments at both steps: 1 + 2 independent claims
        FiniteFilteredSpace s2 = build_space({0.25, 0.25, 0.25, 0.25},
                                             {{{0, 1, 2, 3}}, {{0, 1}, {2, 3}}, {{0}, {1}, {2}, {3}}});
        PriceProcess p2;
        p2.values = {{0.0}, {1.0, -1.0}, {2.0, 0.5, -0.5, -2.0}};
        CHECK(attainable_basis(s2, p2).dimension() == 3);
    }

    TEST_CASE("is_martingale on the binomial")
    {
        Market m = b1();
        CHECK(is_martingale(m.price, {1.0, 1.0}, m.space));
        CHECK(!is_martingale(m.price, {2.0, 0.0}, m.space));

        FiniteFilteredSpace s = build_space({0.5, 0.5}, {{{0, 1}}, {{0}, {1}}});
        PriceProcess flat;
        flat.values = {{3.0}, {3.0, 3.0}};
        CHECK(is_martingale(flat, {2.0, 0.0}, s));
    }

    TEST_CASE("is_martingale validates the density")
    {
        Market m = b1();
        CHECK_THROWS_AS(is_martingale(m.price, {-0.5, 2.5}, m.space), Error);
        CHECK_THROWS_AS(is_martingale(m.price, {0.5, 0.5}, m.space), Error);
    }

    TEST_CASE("martingale densities annihilate zero-capital wealth")
    {
        for (std::uint64_t seed : {11ULL, 12ULL, 13ULL, 14ULL}) {
            RandomInstance inst = random_instance(seed);
            auto rng = item_rng(seed, 99);
            std::normal_distribution<double> gauss(0.0, 1.0);
            // a random predictable strategy
            TradingStrategy strat;
            strat.positions.resize(inst.market.space.horizon());
            for (int t = 0; t < inst.market.space.horizon(); ++t) {
                strat.positions[t].resize(inst.market.space.filtration[t].size());
                for (double& v : strat.positions[t]) v = gauss(rng);
            }
            RandomVariable wealth = terminal_wealth(0.0, strat, inst.market.price, inst.market.space);
            for (const auto& g : inst.scen.generators) {
                if (!is_martingale(inst.market.price, g.density, inst.market.space)) continue;
                CHECK(std::fabs(inner(g.density, wealth, inst.market.space)) <= 1e-10);
            }
        }
    }

    TEST_CASE("terminal wealth is affine in the initial capital")
    {
        RandomInstance inst = random_instance(21);
        auto rng = item_rng(21, 5);
        std::normal_distribution<double> gauss(0.0, 1.0);
        TradingStrategy strat;
        strat.positions.resize(inst.market.space.horizon());
        for (int t = 0; t < inst.market.space.horizon(); ++t) {
            strat.positions[t].resize(inst.market.space.filtration[t].size());
            for (double& v : strat.positions[t]) v = gauss(rng);
        }
        RandomVariable w0 = terminal_wealth(0.0, strat, inst.market.price, inst.market.space);
        RandomVariable w3 = terminal_wealth(3.0, strat, inst.market.price, inst.market.space);
        for (std::size_t i = 0; i < w0.size(); ++i)
            CHECK(w3[i] == doctest::Approx(w0[i] + 3.0).epsilon(1e-14));
    }

    TEST_CASE("basis span does not depend on generation order")
    {
        // projecting each raw increment claim onto the span built from the
        // kept basis leaves no residual
        for (std::uint64_t seed : {31ULL, 32ULL, 33ULL}) {
            RandomInstance inst = random_instance(seed);
            const auto& m = inst.market;
            for (int t = 0; t < m.space.horizon(); ++t)
                for (int a = 0; a < m.space.num_atoms(t); ++a) {
                    RandomVariable g(m.space.probs.size(), 0.0);
                    for (int w : m.space.filtration[t][a])
                        g[w] = price_at(m.price, m.space, t + 1, w) - m.price.values[t][a];
                    RandomVariable resid = m.projection.complement(g);
                    CHECK(l2_norm(resid, m.space) <= 1e-10);
                }
        }
    }
}
