#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "gptc/cone.hpp"
#include "gptc/random.hpp"

using namespace gptc;

namespace {

Vec<double> random_conic_combo(const PolyCone<double>& c, Rng& rng) {
    Vec<double> x(c.dim, 0.0);
    for (const auto& g : c.generators)
        if (rng.below(2) == 0) axpy(rng.uniform01(), g, x);
    return x;
}

bool same_ray_set(std::vector<Vec<double>> a, std::vector<Vec<double>> b) {
    // Equality up to positive scaling and permutation.
    if (a.size() != b.size()) return false;
    auto normalize = [](Vec<double> v) {
        double n = inf_norm(v);
        for (auto& x : v) x /= n;
        return v;
    };
    for (auto& v : a) v = normalize(v);
    for (auto& v : b) v = normalize(v);
    std::vector<bool> used(b.size(), false);
    for (const auto& v : a) {
        bool found = false;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            double diff = 0;
            for (std::size_t i = 0; i < v.size(); ++i)
                diff = std::max(diff, std::fabs(v[i] - b[j][i]));
            if (diff < 1e-12) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("positive orthant membership") {
    auto c = orthant<double>(2);
    CHECK(c.contains({1.0, 2.0}));
    CHECK_FALSE(c.contains({1.0, -0.1}));
}

TEST_CASE("l_inf ball cone boundary membership") {
    auto c2 = linf_ball_cone<double>(2);
    CHECK(c2.contains({1.0, 1.0, 1.0}));        // on the boundary
    CHECK_FALSE(c2.contains({1.0, 1.5, 0.0}));  // violates x0 >= |x1|
}

TEST_CASE("orthant is self-dual") {
    auto c = orthant<double>(3);
    auto d = dual_cone(c);
    CHECK(same_ray_set(d.generators, c.generators));
}

TEST_CASE("dual of the l_inf ball cone is the l_1 ball cone") {
    auto d = dual_cone(linf_ball_cone<double>(3));
    auto l1 = l1_ball_cone<double>(3);
    CHECK(same_ray_set(d.generators, l1.generators));
    // Every dual generator a satisfies ||(a_1..a_n)||_1 <= a_0.
    for (const auto& a : d.generators) {
        double tail = 0;
        for (std::size_t i = 1; i < a.size(); ++i) tail += std::fabs(a[i]);
        CHECK(tail <= a[0] + 1e-12);
    }
}

TEST_CASE("bipolar: dual of dual returns the original description") {
    auto c3 = linf_ball_cone<double>(3);
    auto dd = dual_cone(dual_cone(c3));
    CHECK(same_ray_set(dd.generators, c3.generators));
    CHECK(same_ray_set(dd.facets, c3.facets));
}

TEST_CASE("min tensor of simplicial cones is the big orthant") {
    auto c = min_tensor(orthant<double>(2), orthant<double>(2));
    CHECK(c.dim == 4);
    CHECK(same_ray_set(c.generators, orthant<double>(4).generators));
}

TEST_CASE("canonical tensor lies in the min tensor cone for simplicial factors") {
    CanonicalTensor<double> chi(3);
    auto mt = min_tensor(orthant<double>(3), orthant<double>(3));
    CHECK(conic_decomposition(mt.generators, chi.flat()).feasible);
    // chi pairs as evaluation.
    Rng rng(7);
    for (int t = 0; t < 16; ++t) {
        Vec<double> alpha(3), v(3);
        for (auto& x : alpha) x = rng.uniform(-1, 1);
        for (auto& x : v) x = rng.uniform(-1, 1);
        CHECK(chi.pair(alpha, v) == doctest::Approx(dot(alpha, v)));
    }
}

TEST_CASE("canonical tensor is max-tensor positive against the dual cone") {
    auto c2 = linf_ball_cone<double>(2);
    auto dual = dual_cone(c2);
    CanonicalTensor<double> chi(3);
    CHECK(max_tensor_member(c2, dual, chi.flat()));
}

TEST_CASE("an entangled element of max(C2,C2) that is not in min(C2,C2)") {
    auto c2 = linf_ball_cone<double>(2);
    // Rotate the dual-cone leg of the evaluation tensor back into C2: the
    // map (a0,a1,a2) -> (a0, a1+a2, a1-a2) carries dual generators onto
    // generators of C2, so the image of chi lies in max(C2,C2).
    Mat<double> theta(3, 3);
    theta(0, 0) = 1;
    theta(1, 1) = 1;
    theta(1, 2) = 1;
    theta(2, 1) = 1;
    theta(2, 2) = -1;
    auto dual = dual_cone(c2);
    for (const auto& a : dual.generators) CHECK(c2.contains(theta.apply(a)));

    CanonicalTensor<double> chi(3);
    Vec<double> y(9, 0.0);
    for (int i = 0; i < 3; ++i) {
        Vec<double> alpha(3, 0.0);
        alpha[i] = 1.0;  // chi = sum_i e_i (x) alpha_i with alpha_i = e_i
        auto mapped = theta.apply(alpha);
        for (int j = 0; j < 3; ++j) y[3 * i + j] += mapped[j];
    }
    CHECK(max_tensor_member(c2, c2, y));
    auto mt = min_tensor(c2, c2);
    auto cert = conic_decomposition(mt.generators, y);
    REQUIRE_FALSE(cert.feasible);
    REQUIRE(cert.farkas.has_value());

    // The same element in exact arithmetic, certified with zero tolerance.
    auto c2q = linf_ball_cone<Rational>(2);
    Vec<Rational> yq(9);
    for (int i = 0; i < 9; ++i) yq[i] = Rational(y[i]);
    CHECK(max_tensor_member(c2q, c2q, yq, Rational(0)));
    auto mtq = min_tensor(c2q, c2q);
    auto certq = conic_decomposition(mtq.generators, yq, Rational(0));
    CHECK_FALSE(certq.feasible);
}

TEST_CASE("min tensor elements pass the max membership test") {
    Rng rng(123);
    std::vector<std::pair<PolyCone<double>, PolyCone<double>>> pairs;
    pairs.push_back({linf_ball_cone<double>(2), l1_ball_cone<double>(3)});
    pairs.push_back({linf_ball_cone<double>(2), linf_ball_cone<double>(2)});
    pairs.push_back({l1_ball_cone<double>(2), orthant<double>(3)});
    for (const auto& [c1, c2] : pairs) {
        auto mt = min_tensor(c1, c2);
        for (int t = 0; t < 1000; ++t) {
            Vec<double> y(mt.dim, 0.0);
            for (const auto& g : mt.generators)
                if (rng.below(3) == 0) axpy(rng.uniform01(), g, y);
            CHECK(max_tensor_member(c1, c2, y, 1e-9));
        }
    }
}

TEST_CASE("simplicial factor collapses min and max membership") {
    Rng rng(321);
    auto r3 = orthant<double>(3);
    auto c2 = linf_ball_cone<double>(2);
    auto mt = min_tensor(r3, c2);
    int inside = 0;
    for (int t = 0; t < 200; ++t) {
        Vec<double> y(mt.dim);
        for (auto& v : y) v = rng.uniform(-0.4, 1.0);
        bool in_max = max_tensor_member(r3, c2, y, 1e-9);
        bool in_min = conic_decomposition(mt.generators, y, 1e-9).feasible;
        CHECK(in_max == in_min);
        inside += in_min;
    }
    // Also on points constructed inside the cone.
    for (int t = 0; t < 100; ++t) {
        auto y = random_conic_combo(mt, rng);
        CHECK(max_tensor_member(r3, c2, y, 1e-8));
        CHECK(conic_decomposition(mt.generators, y, 1e-8).feasible);
        ++inside;
    }
    CHECK(inside > 0);
}

TEST_CASE("degenerate cones are rejected at construction") {
    CHECK_THROWS_AS(PolyCone<double>::checked(2, {}), DegenerateCone);
    CHECK_THROWS_AS(PolyCone<double>::checked(2, {{0.0, 0.0}}), DegenerateCone);
    // A line: contains g and -g.
    CHECK_THROWS_AS(
        PolyCone<double>::checked(2, {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}}),
        DegenerateCone);
    // Generators that do not span.
    CHECK_THROWS_AS(PolyCone<double>::checked(2, {{1.0, 0.0}}), DegenerateCone);
    // Facet description wider than the generator cone.
    CHECK_THROWS_AS(PolyCone<double>::checked(
                        2, {{1.0, 0.0}, {1.0, 1.0}}, {{0.0, 1.0}}),
                    DegenerateCone);
    // Generator outside the facet description.
    CHECK_THROWS_AS(PolyCone<double>::checked(
                        2, {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 2.0}},
                        {{1.0, 0.0}, {0.0, 1.0}}),
                    DegenerateCone);
    CHECK_NOTHROW(PolyCone<double>::checked(
        2, {{1.0, 0.0}, {0.0, 1.0}}, {{1.0, 0.0}, {0.0, 1.0}}));
}

TEST_CASE("map tensor matches the canonical tensor identity") {
    // phi^Phi = (Phi^* (x) id)(chi_L) coefficient-wise.
    Rng rng(99);
    const int dm = 3, dl = 2;
    MapTensor<double> phi(dm, dl);
    for (int i = 0; i < dl; ++i)
        for (int j = 0; j < dm; ++j) phi.coeffs(i, j) = rng.uniform(-1, 1);
    // (Phi^* (x) id)(chi_L): chi_L = sum_i v_i (x) alpha_i in L (x) L^*.
    Vec<double> viaChi(static_cast<std::size_t>(dm) * dl, 0.0);
    for (int i = 0; i < dl; ++i) {
        auto pulled = phi.apply_adjoint(unit_vec<double>(dl, i));  // Phi^*(v_i) in M^*
        for (int j = 0; j < dm; ++j) viaChi[static_cast<std::size_t>(j) * dl + i] += pulled[j];
    }
    auto direct = phi.as_tensor();
    for (std::size_t i = 0; i < direct.size(); ++i)
        CHECK(direct[i] == doctest::Approx(viaChi[i]));
    // Pairing contract: <phi^Phi, w (x) v> = <Phi(w), v>.
    for (int t = 0; t < 8; ++t) {
        Vec<double> w(dm), v(dl);
        for (auto& x : w) x = rng.uniform(-1, 1);
        for (auto& x : v) x = rng.uniform(-1, 1);
        CHECK(dot(phi.as_tensor(), kron(w, v)) == doctest::Approx(dot(phi.apply(w), v)));
    }
}
