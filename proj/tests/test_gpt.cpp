#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gptc/gpt.hpp"
#include "gptc/sampling.hpp"

using namespace gptc;

TEST_CASE("model constructors produce the advertised descriptions") {
    auto cm = make_classical<double>(3);
    CHECK(cm.dim == 3);
    CHECK(cm.state_generators().size() == 3);

    auto hc = make_hypercube<double>(2);
    CHECK(hc.dim == 3);
    CHECK(hc.state_generators().size() == 4);  // 2^n lifted square vertices
    CHECK(hc.dual_generators().size() == 4);   // 2n facets
    for (const auto& g : hc.state_generators()) {
        CHECK(g[0] == 1.0);
        CHECK(std::fabs(g[1]) == 1.0);
        CHECK(std::fabs(g[2]) == 1.0);
    }

    auto cp = make_crosspolytope<double>(2);
    CHECK(cp.state_generators().size() == 4);  // 2n vertices (1, +-e_i)
    CHECK(cp.dual_generators().size() == 4);   // 2^n facets
    for (const auto& g : cp.state_generators())
        CHECK(one_norm(Vec<double>(g.begin() + 1, g.end())) == doctest::Approx(1.0));

    CHECK_THROWS_AS(make_hypercube<double>(0), DegenerateCone);
    CHECK_FALSE(make_ball<double>(3).polyhedral());
}

TEST_CASE("classical state space is the probability simplex") {
    auto cm = make_classical<double>(3);
    Rng rng(5);
    for (int t = 0; t < 32; ++t) {
        auto x = random_state(cm, rng);
        double sum = 0;
        for (double v : x) {
            CHECK(v >= -1e-12);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0));
    }
}

TEST_CASE("base and order unit norms: classical closed forms") {
    auto cm = make_classical<double>(4);
    Vec<double> x = {0.3, -1.2, 0.0, 2.5};
    CHECK(base_norm(cm, x) == doctest::Approx(one_norm(x)));
    CHECK(order_unit_norm(cm, x) == doctest::Approx(inf_norm(x)));
}

TEST_CASE("base and order unit norms: hypercube closed forms") {
    auto hc = make_hypercube<double>(2);
    Vec<double> x = {0.5, -1.25, 0.75};
    CHECK(base_norm(hc, x) == doctest::Approx(inf_norm(x)));
    CHECK(order_unit_norm(hc, x) == doctest::Approx(one_norm(x)));
}

TEST_CASE("LP norms agree with centrally symmetric closed forms") {
    // Strip the cs tag so that base_norm takes the LP route, then compare.
    for (int n : {2, 3}) {
        auto hc = make_hypercube<double>(n);
        auto lp_only = hc;
        lp_only.cs.reset();
        Rng rng(71 + n);
        for (int t = 0; t < 50; ++t) {
            Vec<double> x(hc.dim), a(hc.dim);
            for (auto& v : x) v = rng.uniform(-1, 1);
            for (auto& v : a) v = rng.uniform(-1, 1);
            CHECK(base_norm(lp_only, x) == doctest::Approx(base_norm(hc, x)).epsilon(1e-9));
            CHECK(order_unit_norm(lp_only, a) ==
                  doctest::Approx(order_unit_norm(hc, a)).epsilon(1e-9));
        }
    }
}

TEST_CASE("norm duality on random vectors") {
    // ||x||_V = sup_{||a||_A <= 1} <a, x>: the supremum is itself an LP over
    // the order interval, and must meet the base-norm LP within 1e-7.
    auto models = std::vector<Gpt<double>>{make_classical<double>(3),
                                           make_hypercube<double>(2),
                                           make_crosspolytope<double>(3)};
    Rng rng(2024);
    for (const auto& g : models) {
        auto dual_ball_max = [&](const Vec<double>& x) {
            LpProblem<double> p;
            p.add_vars(g.dim, VarSign::Free);
            for (const auto& v : g.state_generators()) {
                double uv = dot(g.unit, v);
                Vec<double> row(g.dim);
                for (int i = 0; i < g.dim; ++i) row[i] = v[i];
                p.add_row(row, Rel::Le, uv);   // <1 - a, v> >= 0
                p.add_row(row, Rel::Ge, -uv);  // <1 + a, v> >= 0
            }
            p.objective = x;
            return lp_maximize(p).value;
        };
        for (int t = 0; t < 1000; ++t) {
            Vec<double> x(g.dim);
            for (auto& v : x) v = rng.uniform(-1, 1);
            double bn = base_norm(g, x);
            CHECK(dual_ball_max(x) == doctest::Approx(bn).epsilon(1e-7));
        }
    }
}

TEST_CASE("positivity characterization via the base norm") {
    auto hc = make_hypercube<double>(2);
    Rng rng(31);
    int positives = 0;
    for (int t = 0; t < 200; ++t) {
        Vec<double> x(hc.dim);
        for (auto& v : x) v = rng.uniform(-1, 1);
        bool member = hc.cone->contains(x);
        bool norm_char = std::fabs(base_norm(hc, x) - dot(hc.unit, x)) <= 1e-9;
        CHECK(member == norm_char);
        positives += member;
    }
    for (int t = 0; t < 50; ++t) {
        auto x = random_state(hc, rng);
        CHECK(std::fabs(base_norm(hc, x) - dot(hc.unit, x)) <= 1e-9);
        ++positives;
    }
    CHECK(positives > 0);
}

TEST_CASE("effect validation") {
    auto hc = make_hypercube<double>(2);
    CHECK(validate_effect(hc, scaled(hc.unit, 0.5)));
    CHECK_FALSE(validate_effect(hc, scaled(hc.unit, 2.0)));

    // cs criterion: (alpha, fbar) is an effect iff ||fbar||_1 <= min(alpha, 1-alpha).
    Rng rng(8);
    for (int t = 0; t < 200; ++t) {
        Vec<double> f = {rng.uniform(-0.2, 1.2), rng.uniform(-0.8, 0.8),
                         rng.uniform(-0.8, 0.8)};
        bool cs_ok = std::fabs(f[1]) + std::fabs(f[2]) <=
                     std::min(f[0], 1.0 - f[0]) + 1e-12;
        CHECK(validate_effect(hc, f) == cs_ok);
    }

    auto ball = make_ball<double>(3);
    CHECK(validate_effect(ball, {0.5, 0.25, 0.25, 0.25}));
    CHECK_FALSE(validate_effect(ball, {0.5, 0.5, 0.5, 0.0}));
}

TEST_CASE("random measurements validate and noise preserves validity") {
    auto models = std::vector<Gpt<double>>{make_classical<double>(2),
                                           make_hypercube<double>(3),
                                           make_crosspolytope<double>(2)};
    Rng rng(99);
    for (const auto& g : models) {
        for (int t = 0; t < 60; ++t) {
            int k = 2 + rng.below(3);
            auto m = random_measurement(g, k, rng);
            REQUIRE(validate_measurement(g, m, 1e-8));
            auto noisy = add_noise(g, m, rng.uniform01());
            CHECK(validate_measurement(g, noisy, 1e-8));
        }
    }
}

TEST_CASE("noise endpoints") {
    auto hc = make_hypercube<double>(2);
    Rng rng(17);
    auto m = random_measurement(hc, 3, rng);
    auto same = add_noise(hc, m, 1.0);
    for (int j = 0; j < 3; ++j)
        CHECK(inf_norm(sub(same.effects[j], m.effects[j])) <= 1e-15);
    auto trivial = add_noise(hc, m, 0.0);
    for (int j = 0; j < 3; ++j)
        CHECK(inf_norm(sub(trivial.effects[j], scaled(hc.unit, 1.0 / 3.0))) <= 1e-15);
    CHECK_THROWS_AS(add_noise(hc, m, 1.5), Error);
}

TEST_CASE("measurements sum exactly to the unit in rational mode") {
    auto cp = make_crosspolytope<Rational>(2);
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
        auto m = random_measurement(cp, 3, rng);
        Vec<Rational> total(cp.dim, Rational(0));
        for (const auto& f : m.effects) total = add(total, f);
        CHECK(total == cp.unit);
        CHECK(validate_measurement(cp, m, Rational(0)));
    }
}

TEST_CASE("extreme effects are valid and include the sharp unbiased ones") {
    auto hc = make_hypercube<double>(2);
    auto ext = extreme_effects(hc);
    CHECK(ext.size() == 2 + 4);
    for (const auto& f : ext) CHECK(validate_effect(hc, f));

    auto cp = make_crosspolytope<double>(2);
    auto extc = extreme_effects(cp);
    CHECK(extc.size() == 2 + 4);
    for (const auto& f : extc) CHECK(validate_effect(cp, f));

    auto cm = make_classical<double>(2);
    CHECK(extreme_effects(cm).size() == 4);
}

TEST_CASE("ball models reject LP-based operations distinctly") {
    auto ball = make_ball<double>(3);
    CHECK_THROWS_AS(ball.require_cone(), NonPolyhedralModel);
    CHECK_THROWS_AS(base_norm(ball, {1.0, 0.0, 0.0}), DimensionMismatch);
    CHECK(base_norm(ball, {1.0, 0.0, 0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(order_unit_norm(ball, {0.5, 0.5, 0.0, 0.0}) == doctest::Approx(1.0));
}
