#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gptc/lp.hpp"

using namespace gptc;

namespace {

template <class S>
LpProblem<S> single_var_eq(double rhs) {
    LpProblem<S> p;
    p.add_var(VarSign::NonNeg);
    p.add_row({S(1)}, Rel::Eq, scalar_traits<S>::from_double(rhs));
    return p;
}

}  // namespace

TEST_CASE("x >= 0, x = 1 is feasible with x = 1") {
    auto cert = lp_feasible(single_var_eq<double>(1.0));
    REQUIRE(cert.feasible);
    CHECK(cert.x[0] == doctest::Approx(1.0));
}

TEST_CASE("x >= 0, x = -1 yields a verified Farkas certificate") {
    auto cert = lp_feasible(single_var_eq<double>(-1.0));
    REQUIRE_FALSE(cert.feasible);
    REQUIRE(cert.farkas.has_value());
    LpProblem<double> p = single_var_eq<double>(-1.0);
    CHECK(farkas_verifies(p, *cert.farkas, 1e-8));
}

TEST_CASE("exact mode certifies infeasibility with zero tolerance") {
    auto cert = lp_feasible(single_var_eq<Rational>(-1.0));
    REQUIRE_FALSE(cert.feasible);
    REQUIRE(cert.farkas.has_value());
    LpProblem<Rational> p = single_var_eq<Rational>(-1.0);
    CHECK(farkas_verifies(p, *cert.farkas, Rational(0)));
}

TEST_CASE("small maximization with mixed rows") {
    // max x + y  s.t.  x + 2y <= 4, 3x + y <= 6, x,y >= 0  -> (8/5, 6/5), value 14/5
    LpProblem<double> p;
    p.add_vars(2, VarSign::NonNeg);
    p.add_row({1, 2}, Rel::Le, 4);
    p.add_row({3, 1}, Rel::Le, 6);
    p.objective = {1, 1};
    auto r = lp_maximize(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == doctest::Approx(14.0 / 5.0));
    CHECK(r.x[0] == doctest::Approx(8.0 / 5.0));
    CHECK(r.x[1] == doctest::Approx(6.0 / 5.0));
}

TEST_CASE("free variables and Ge rows") {
    // max -t s.t. t >= x, t >= -x, x = 3, t free  -> t = 3
    LpProblem<double> p;
    int t = p.add_var(VarSign::Free);
    int x = p.add_var(VarSign::Free);
    (void)t;
    (void)x;
    p.add_row({1, -1}, Rel::Ge, 0);
    p.add_row({1, 1}, Rel::Ge, 0);
    p.add_row({0, 1}, Rel::Eq, 3);
    p.objective = {-1, 0};
    auto r = lp_maximize(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.x[0] == doctest::Approx(3.0));
}

TEST_CASE("unbounded objective is reported") {
    LpProblem<double> p;
    p.add_var(VarSign::NonNeg);
    p.objective = {1};
    typename SimplexSolver<double>::Options opt;
    SimplexSolver<double> solver(opt);
    auto r = solver.solve(p);
    CHECK(r.status == LpStatus::Unbounded);
}

TEST_CASE("degenerate and redundant rows are handled") {
    // x + y = 1 stated twice, x - y = 0 -> x = y = 1/2
    LpProblem<Rational> p;
    p.add_vars(2, VarSign::NonNeg);
    p.add_row({Rational(1), Rational(1)}, Rel::Eq, Rational(1));
    p.add_row({Rational(1), Rational(1)}, Rel::Eq, Rational(1));
    p.add_row({Rational(1), Rational(-1)}, Rel::Eq, Rational(0));
    p.objective = {Rational(1), Rational(0)};
    auto r = lp_maximize(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.x[0] == Rational(1) / 2);
    CHECK(r.x[1] == Rational(1) / 2);
}

TEST_CASE("rational optimum is exact") {
    // max 2x + 3y s.t. x + 3y <= 1, 2x + y <= 1 -> x = 2/5, y = 1/5, value 7/5
    LpProblem<Rational> p;
    p.add_vars(2, VarSign::NonNeg);
    p.add_row({Rational(1), Rational(3)}, Rel::Le, Rational(1));
    p.add_row({Rational(2), Rational(1)}, Rel::Le, Rational(1));
    p.objective = {Rational(2), Rational(3)};
    auto r = lp_maximize(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == Rational(7) / 5);
}

TEST_CASE("random feasibility problems always return a verified certificate") {
    std::mt19937_64 rng(20240517u);
    auto u = [&]() { return (rng() >> 11) * 0x1p-53 * 2.0 - 1.0; };
    int farkas_seen = 0, feas_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng() % 4);
        int m = 1 + static_cast<int>(rng() % 5);
        LpProblem<double> p;
        for (int j = 0; j < n; ++j)
            p.add_var(rng() % 3 == 0 ? VarSign::Free : VarSign::NonNeg);
        for (int i = 0; i < m; ++i) {
            Vec<double> a(n);
            for (auto& v : a) v = u();
            Rel rel = static_cast<Rel>(rng() % 3);
            p.add_row(a, rel, u());
        }
        auto cert = lp_feasible(p);
        if (cert.feasible) {
            ++feas_seen;
            CHECK(lp_residual(p, cert.x) <= 1e-7);
        } else {
            ++farkas_seen;
            REQUIRE(cert.farkas.has_value());
            CHECK(farkas_verifies(p, *cert.farkas, 1e-7));
        }
    }
    CHECK(feas_seen > 0);
    CHECK(farkas_seen > 0);
}

TEST_CASE("float and exact mode agree on random instances") {
    std::mt19937_64 rng(987654u);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        int m = 1 + static_cast<int>(rng() % 4);
        LpProblem<double> pd;
        LpProblem<Rational> pq;
        for (int j = 0; j < n; ++j) {
            pd.add_var(VarSign::NonNeg);
            pq.add_var(VarSign::NonNeg);
        }
        for (int i = 0; i < m; ++i) {
            Vec<double> a(n);
            Vec<Rational> aq(n);
            for (int j = 0; j < n; ++j) {
                int c = static_cast<int>(rng() % 11) - 5;
                a[j] = c;
                aq[j] = Rational(c);
            }
            int b = static_cast<int>(rng() % 9) - 4;
            Rel rel = static_cast<Rel>(rng() % 3);
            pd.add_row(a, rel, b);
            pq.add_row(aq, rel, Rational(b));
        }
        auto cd = lp_feasible(pd);
        auto cq = lp_feasible(pq);
        CHECK(cd.feasible == cq.feasible);
    }
}
