#include <doctest.h>

#include <cmath>
#include <random>

#include "capreq/hedging.hpp"
#include "capreq/rng.hpp"

using namespace capreq;

namespace {

TwoFactorModel example_model(int steps = 1)
{
    TwoFactorModel model;
    model.mu = 0.1;
    model.sigma1 = 0.3;
    model.sigma2 = 0.4;
    model.steps = steps;
    model.horizon = 1.0;
    model.s0 = 1.0;
    return model;
}

Market b1()
{
    FiniteFilteredSpace space = build_space({0.5, 0.5}, {{{0, 1}}, {{0}, {1}}});
    PriceProcess price;
    price.values = {{0.0}, {1.0, -1.0}};
    return make_market(std::move(space), std::move(price));
}

} // namespace

TEST_SUITE("hedging")
{
    TEST_CASE("one-step tree prices and layout")
    {
        Market m = build_two_factor_tree(example_model());
        CHECK(m.space.num_outcomes() == 4);
        CHECK(example_model().sigma_star() == doctest::Approx(0.5));
        const auto& s1 = m.price.values[1];
        CHECK(s1[0] == doctest::Approx(1.6));
        CHECK(s1[1] == doctest::Approx(1.6));
        CHECK(s1[2] == doctest::Approx(0.6));
        CHECK(s1[3] == doctest::Approx(0.6));
        CHECK(m.space.outcomes[0] == "uu");
        CHECK(m.space.outcomes[3] == "dd");
    }

    TEST_CASE("zero drift makes the reference measure a martingale measure")
    {
        TwoFactorModel model = example_model();
        model.mu = 0.0;
        Market m = build_two_factor_tree(model);
        RandomVariable ones(m.space.probs.size(), 1.0);
        CHECK(is_martingale(m.price, ones, m.space));
    }

    TEST_CASE("two-step tree: price depends only on the first driver")
    {
        Market m = build_two_factor_tree(example_model(2));
        CHECK(m.space.num_outcomes() == 16);
        // outcomes uu.* and ud.* share every price level
        for (int tail = 0; tail < 4; ++tail) {
            int w_uu = 0 * 4 + tail, w_ud = 1 * 4 + tail;
            CHECK(price_at(m.price, m.space, 2, w_uu) ==
                  doctest::Approx(price_at(m.price, m.space, 2, w_ud)));
        }
        // up-up path value
        CHECK(price_at(m.price, m.space, 2, 0) ==
              doctest::Approx(std::pow(1.0 + 0.1 * 0.5 + 0.5 * std::sqrt(0.5), 2)));
    }

    TEST_CASE("step positivity guards")
    {
        TwoFactorModel bad = example_model();
        bad.mu = 0.9; // |mu/sigma*| sqrt(dt) = 1.8 >= 1
        CHECK_THROWS_AS(build_two_factor_tree(bad), Error);
        TwoFactorModel bad2 = example_model();
        bad2.sigma1 = 0.0;
        CHECK_THROWS_AS(build_two_factor_tree(bad2), Error);
    }

    TEST_CASE("tilt density matches the hand computation")
    {
        TwoFactorModel model = example_model();
        RandomVariable z = girsanov_density(model, {{0.0}});
        CHECK(z[0] == doctest::Approx(0.8).epsilon(1e-14));
        CHECK(z[1] == doctest::Approx(0.8).epsilon(1e-14));
        CHECK(z[2] == doctest::Approx(1.2).epsilon(1e-14));
        CHECK(z[3] == doctest::Approx(1.2).epsilon(1e-14));
        Market m = build_two_factor_tree(model);
        CHECK(is_martingale(m.price, z, m.space));

        TwoFactorModel flat = example_model();
        flat.mu = 0.0;
        RandomVariable unit = girsanov_density(flat, {{0.0}});
        for (double v : unit) CHECK(v == doctest::Approx(1.0));

        CHECK_THROWS_AS(girsanov_density(model, {{5.0}}), Error);
        CHECK_THROWS_AS(girsanov_density(model, {{0.0}, {0.0}}), Error); // wrong shape
    }

    TEST_CASE("random admissible loadings stay martingale")
    {
        for (std::uint64_t seed = 0; seed < 12; ++seed) {
            auto rng = item_rng(0x9155ULL, seed);
            TwoFactorModel model = example_model(1 + static_cast<int>(seed % 3));
            Market m = build_two_factor_tree(model);
            const double sdt = std::sqrt(model.dt());
            const double ymax = 0.999 * (1.0 / sdt - std::fabs(model.z_tilt()));
            std::uniform_real_distribution<double> yd(-ymax, ymax);
            std::vector<std::vector<double>> y(model.steps);
            long atoms = 1;
            for (int t = 0; t < model.steps; ++t) {
                y[t].resize(atoms);
                for (double& v : y[t]) v = yd(rng);
                atoms *= 4;
            }
            RandomVariable density = girsanov_density(model, y);
            CHECK(martingale_violation(m.price, density, m.space) <= 1e-10);
        }
    }

    TEST_CASE("superhedge values")
    {
        Market m = build_two_factor_tree(example_model());
        RandomVariable call = call_payoff(m, 1.0);
        CHECK(superhedge_price(call, m) == doctest::Approx(0.24).epsilon(1e-9));

        RandomVariable constant(m.space.probs.size(), 0.7);
        CHECK(superhedge_price(constant, m) == doctest::Approx(0.7).epsilon(1e-9));

        RandomVariable forward(m.space.probs.size());
        for (int w = 0; w < m.space.num_outcomes(); ++w)
            forward[w] = price_at(m.price, m.space, 1, w) - 1.0;
        CHECK(superhedge_price(forward, m) == doctest::Approx(0.0).epsilon(1e-9));
    }

    TEST_CASE("efficient price closed form on the binomial")
    {
        Market m = b1();
        for (double alpha : {0.0, 0.02, 0.08}) {
            HedgeProblem prob = make_hedge_problem({1.0, 0.0}, 2.0, alpha, 10.0);
            HedgePriceResult r = efficient_hedge_price(prob, m);
            CHECK(r.price == doctest::Approx(0.5 - std::sqrt(2.0 * alpha)).epsilon(1e-9));
            CHECK(!r.within_guarantee); // q = 2 sits outside the continuous theory
        }
        HedgeProblem q3 = make_hedge_problem({1.0, 0.0}, 3.0, 0.01, 10.0);
        CHECK(efficient_hedge_price(q3, m).within_guarantee);
    }

    TEST_CASE("efficient price on the two-driver tree")
    {
        Market m = build_two_factor_tree(example_model());
        RandomVariable call = call_payoff(m, 1.0);
        for (double alpha : {0.0, 0.02, 0.08}) {
            HedgeProblem prob = make_hedge_problem(call, 2.0, alpha, 10.0);
            HedgePriceResult r = efficient_hedge_price(prob, m);
            CHECK(r.price ==
                  doctest::Approx(0.24 - std::sqrt(2.0 * alpha) * std::sqrt(1.04)).epsilon(1e-4));
        }
    }

    TEST_CASE("hedge problem validation and conjugate exponent")
    {
        CHECK_THROWS_AS(make_hedge_problem({1.0, 0.0}, 0.5, 0.0, 1.0), Error);
        CHECK_THROWS_AS(make_hedge_problem({1.0, 0.0}, 2.0, -0.1, 1.0), Error);
        CHECK_THROWS_AS(make_hedge_problem({1.0, 0.0}, 2.0, 0.0, 0.0), Error);
        CHECK(make_hedge_problem({1.0, 0.0}, 3.0, 0.0, 1.0).p == doctest::Approx(1.5));
        CHECK(std::isinf(make_hedge_problem({1.0, 0.0}, 1.0, 0.0, 1.0).p));
        HedgeProblem q4 = make_hedge_problem({1.0, 0.0}, 4.0, 0.0, 1.0);
        CHECK(std::fabs(1.0 / q4.p + 1.0 / q4.q - 1.0) <= 1e-12);
    }

    TEST_CASE("cap saturation")
    {
        Market m = build_two_factor_tree(example_model());
        RandomVariable call = call_payoff(m, 1.0);
        // minimal feasible density norm is sqrt(1.04): a lower cap is infeasible
        CHECK_THROWS_AS(
            efficient_hedge_price(make_hedge_problem(call, 2.0, 0.02, 1.0), m), Error);
        // a huge cap does not change an interior optimum
        double p10 = efficient_hedge_price(make_hedge_problem(call, 2.0, 0.02, 10.0), m).price;
        double p1e3 = efficient_hedge_price(make_hedge_problem(call, 2.0, 0.02, 1000.0), m).price;
        CHECK(p10 == doctest::Approx(p1e3).epsilon(1e-9));
    }

    TEST_CASE("binding cap is enforced within tolerance")
    {
        Market m = build_two_factor_tree(example_model());
        // maximize <Z, C'> with claim rewarding an expensive density: push
        // toward a vertex, then cap the norm below that vertex's norm
        RandomVariable skew(m.space.probs.size(), 0.0);
        skew[0] = 1.0;
        HedgeProblem prob = make_hedge_problem(skew, 2.0, 0.0, 1.1);
        HedgePriceResult r = efficient_hedge_price(prob, m);
        CHECK(r.cap_active);
        CHECK(l2_norm(r.density, m.space) <= 1.1 + 1e-6);
        CHECK(l2_norm(r.density, m.space) >= 1.1 - 1e-4);
        // tighter cap can only lower the value
        HedgePriceResult loose =
            efficient_hedge_price(make_hedge_problem(skew, 2.0, 0.0, 10.0), m);
        CHECK(r.price <= loose.price + 1e-9);
    }

    TEST_CASE("alpha sweep rows")
    {
        Market m = b1();
        HedgeProblem base = make_hedge_problem({1.0, 0.0}, 2.0, 0.0, 10.0);
        std::vector<SweepRow> rows = alpha_sweep(base, m, {0.0, 0.02, 0.08});
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].price == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(rows[1].price == doctest::Approx(0.3).epsilon(1e-9));
        CHECK(rows[2].price == doctest::Approx(0.1).epsilon(1e-9));
        for (const auto& r : rows) CHECK(r.status == "ok");
        for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].price <= rows[i - 1].price + 1e-12);

        CHECK(alpha_sweep(base, m, {}).empty());

        std::vector<SweepRow> dup = alpha_sweep(base, m, {0.02, 0.02});
        CHECK(dup[0].price == doctest::Approx(dup[1].price));

        // serial and parallel sweeps agree exactly
        std::vector<SweepRow> ser = alpha_sweep(base, m, {0.0, 0.01, 0.03}, Exec::Serial);
        std::vector<SweepRow> par = alpha_sweep(base, m, {0.0, 0.01, 0.03}, Exec::Parallel);
        for (std::size_t i = 0; i < ser.size(); ++i) CHECK(ser[i].price == par[i].price);
    }

    TEST_CASE("sweep rows carry per-row failures")
    {
        Market m = build_two_factor_tree(example_model());
        RandomVariable call = call_payoff(m, 1.0);
        HedgeProblem base = make_hedge_problem(call, 2.0, 0.0, 1.0); // infeasible cap
        std::vector<SweepRow> rows = alpha_sweep(base, m, {0.0, 0.02});
        for (const auto& r : rows) CHECK(r.status == "Infeasible");
    }

    TEST_CASE("hedging functional is Lipschitz in the density")
    {
        // |f(X) - f(Y)| <= (||C||_q + (q alpha)^{1/q}) ||X - Y||_p
        Market m = build_two_factor_tree(example_model());
        RandomVariable call = call_payoff(m, 1.0);
        const double q = 2.0, alpha = 0.03;
        const double coef = std::sqrt(2.0 * alpha);
        const double lip = lp_norm(call, q, m.space) + coef;
        auto f = [&](const RandomVariable& z) {
            return inner(z, call, m.space) - coef * lp_norm(z, 2.0, m.space);
        };
        auto rng = item_rng(0x11BULL, 0);
        std::uniform_real_distribution<double> ud(0.0, 1.0);
        TwoFactorModel model = example_model();
        const double ymax = 0.999 * (1.0 / 1.0 - std::fabs(model.z_tilt()));
        for (int rep = 0; rep < 40; ++rep) {
            RandomVariable zx = girsanov_density(model, {{ud(rng) * 2.0 * ymax - ymax}});
            RandomVariable zy = girsanov_density(model, {{ud(rng) * 2.0 * ymax - ymax}});
            RandomVariable diff(zx.size());
            for (std::size_t i = 0; i < zx.size(); ++i) diff[i] = zx[i] - zy[i];
            CHECK(std::fabs(f(zx) - f(zy)) <= lip * lp_norm(diff, 2.0, m.space) + 1e-8);
        }
    }

    TEST_CASE("claim monotonicity")
    {
        Market m = build_two_factor_tree(example_model());
        RandomVariable call = call_payoff(m, 1.0);
        RandomVariable bigger = call;
        for (double& v : bigger) v += 0.25;
        double lo = efficient_hedge_price(make_hedge_problem(call, 2.0, 0.02, 10.0), m).price;
        double hi = efficient_hedge_price(make_hedge_problem(bigger, 2.0, 0.02, 10.0), m).price;
        CHECK(hi >= lo - 1e-6);
    }
}
