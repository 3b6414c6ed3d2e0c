#include <doctest.h>

#include <cmath>

#include "capreq/instances.hpp"
#include "capreq/market.hpp"
#include "capreq/scenario.hpp"

using namespace capreq;

namespace {

Market b1()
{
    FiniteFilteredSpace space = build_space({0.5, 0.5}, {{{0, 1}}, {{0}, {1}}});
    PriceProcess price;
    price.values = {{0.0}, {1.0, -1.0}};
    return make_market(std::move(space), std::move(price));
}

} // namespace

TEST_SUITE("scenario")
{
    TEST_CASE("scenario set validation")
    {
        Market m = b1();
        CHECK_THROWS_AS(make_scenario_set(m.space, {{{3.0, 0.0}, 0.0}}), Error);   // mass 1.5
        CHECK_THROWS_AS(make_scenario_set(m.space, {{{-1.0, 3.0}, 0.0}}), Error);  // negative
        CHECK_THROWS_AS(make_scenario_set(m.space, {{{2.0, 0.0}, 0.0}}, 1.0), Error); // cap
        ScenarioSet ok = make_scenario_set(m.space, {{{2.0, 0.0}, 1.0}}, 2.0);
        CHECK(ok.size() == 1);
    }

    TEST_CASE("f_tilde on the binomial hull")
    {
        Market m = b1();
        ScenarioSet scen = make_scenario_set(m.space, {{{2.0, 0.0}, 1.0}, {{0.0, 2.0}, 0.0}});
        CHECK(f_tilde({1.0, 1.0}, scen, m.space) == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(f_tilde({2.0, 0.0}, scen, m.space) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK_THROWS_AS(f_tilde({5.0, 5.0}, scen, m.space), Error); // outside the hull
    }

    TEST_CASE("f_tilde takes the best representation of a duplicated generator")
    {
        Market m = b1();
        ScenarioSet scen =
            make_scenario_set(m.space, {{{2.0, 0.0}, 1.0}, {{2.0, 0.0}, 2.0}});
        CHECK(f_tilde({2.0, 0.0}, scen, m.space) == doctest::Approx(2.0).epsilon(1e-10));
    }

    TEST_CASE("martingale polytope of the binomial")
    {
        Market m = b1();
        ScenarioSet both = make_scenario_set(m.space, {{{2.0, 0.0}, 1.0}, {{0.0, 2.0}, 0.0}});
        MartingalePolytope poly = martingale_polytope(both, m.subspace, m.space);
        auto fp = polytope_feasible_point(poly);
        REQUIRE(fp.has_value());
        CHECK((*fp)[0] == doctest::Approx(0.5).epsilon(1e-9));
        RandomVariable z = poly.density_of(*fp);
        CHECK(z[0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(is_martingale(m.price, z, m.space));

        ScenarioSet lone = make_scenario_set(m.space, {{{2.0, 0.0}, 1.0}});
        CHECK(!polytope_feasible_point(martingale_polytope(lone, m.subspace, m.space)));

        ScenarioSet with_p = make_scenario_set(
            m.space, {{{2.0, 0.0}, 1.0}, {{1.0, 1.0}, 0.3}});
        auto fp2 = polytope_feasible_point(martingale_polytope(with_p, m.subspace, m.space));
        REQUIRE(fp2.has_value());
        CHECK((*fp2)[1] == doctest::Approx(1.0).epsilon(1e-9)); // point mass on P itself
    }

    TEST_CASE("sup of floors over the polytope")
    {
        Market m = b1();
        ScenarioSet both = make_scenario_set(m.space, {{{2.0, 0.0}, 1.0}, {{0.0, 2.0}, 0.0}});
        SupFloorResult r = sup_f_tilde_over_Z(martingale_polytope(both, m.subspace, m.space));
        REQUIRE(!r.empty);
        CHECK(r.value == doctest::Approx(0.5).epsilon(1e-10));

        ScenarioSet lone = make_scenario_set(m.space, {{{2.0, 0.0}, 5.0}});
        CHECK(sup_f_tilde_over_Z(martingale_polytope(lone, m.subspace, m.space)).empty);

        ScenarioSet fixed = make_scenario_set(m.space, {{{1.0, 1.0}, 3.0}});
        SupFloorResult r3 = sup_f_tilde_over_Z(martingale_polytope(fixed, m.subspace, m.space));
        REQUIRE(!r3.empty);
        CHECK(r3.value == doctest::Approx(3.0));
    }

    TEST_CASE("every feasible weight vector is a martingale density")
    {
        for (std::uint64_t seed : {41ULL, 42ULL, 43ULL, 44ULL, 45ULL}) {
            RandomInstance inst = random_instance(seed);
            MartingalePolytope poly =
                martingale_polytope(inst.scen, inst.market.subspace, inst.market.space);
            auto fp = polytope_feasible_point(poly);
            REQUIRE(fp.has_value()); // instance generator guarantees one
            RandomVariable z = poly.density_of(*fp);
            CHECK(martingale_violation(inst.market.price, z, inst.market.space) <= 1e-9);
        }
    }

    TEST_CASE("sup matches brute-force vertex enumeration on small instances")
    {
        for (std::uint64_t seed : {51ULL, 52ULL, 53ULL, 54ULL}) {
            InstanceOptions opts;
            opts.max_outcomes = 5;
            opts.max_horizon = 2;
            opts.max_generators = 3;
            RandomInstance inst = random_instance(seed, opts);
            MartingalePolytope poly =
                martingale_polytope(inst.scen, inst.market.subspace, inst.market.space);
            SupFloorResult lp_val = sup_f_tilde_over_Z(poly);
            std::vector<std::vector<double>> verts = polytope_vertices(poly);
            if (lp_val.empty) {
                CHECK(verts.empty());
                continue;
            }
            REQUIRE(!verts.empty());
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& v : verts) {
                double val = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i)
                    val += v[i] * poly.generators[i].floor;
                best = std::max(best, val);
            }
            CHECK(lp_val.value == doctest::Approx(best).epsilon(1e-8));
        }
    }

    TEST_CASE("vertex enumeration rejects oversized problems")
    {
        Market m = b1();
        ScenarioSet both = make_scenario_set(m.space, {{{2.0, 0.0}, 1.0}, {{0.0, 2.0}, 0.0}});
        MartingalePolytope poly = martingale_polytope(both, m.subspace, m.space);
        CHECK_THROWS_AS(polytope_vertices(poly, 0), Error);
    }
}
