#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gptc/outcome_space.hpp"
#include "gptc/sampling.hpp"

using namespace gptc;

namespace {

Vec<double> random_distribution(std::size_t n, Rng& rng) {
    Vec<double> p(n);
    double total = 0;
    for (auto& v : p) {
        v = rng.uniform01() + 1e-3;
        total += v;
    }
    for (auto& v : p) v /= total;
    return p;
}

Vec<double> marginal(const std::vector<int>& k, const Vec<double>& p, int factor) {
    Vec<double> m(k[factor], 0.0);
    std::size_t row = 0;
    for_each_multi_index(k, [&](const std::vector<int>& kappa) {
        m[kappa[factor]] += p[row];
        ++row;
    });
    return m;
}

}  // namespace

TEST_CASE("dichotomic pair: w basis is {1, c1, c2} in the fixed ordering") {
    auto os = OutcomeSpace<double>::build({2, 2});
    CHECK(os.dim_e == 3);
    CHECK(os.w_basis.col(0) == Vec<double>{1, 1, 1, 1});
    CHECK(os.w_basis.col(1) == Vec<double>{1, 1, -1, -1});  // c1: first factor slowest
    CHECK(os.w_basis.col(2) == Vec<double>{1, -1, 1, -1});
}

TEST_CASE("single dichotomic factor spans the whole plane") {
    auto os = OutcomeSpace<double>::build({2});
    CHECK(os.dim_e == 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(os.projection(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
}

TEST_CASE("dimension formula 1 - g + sum k_i") {
    CHECK(OutcomeSpace<double>::build({3, 2}).dim_e == 4);
    CHECK(OutcomeSpace<double>::build({3, 3, 2}).dim_e == 6);
    CHECK_THROWS_AS(OutcomeSpace<double>::build({1, 2}), Error);
    CHECK_THROWS_AS(OutcomeSpace<double>::build({64, 64, 64}), SizeLimitExceeded);
}

TEST_CASE("coefficient identity w_j^i(kappa) = -2/k_i + 2 delta") {
    auto os = OutcomeSpace<double>::build({3, 2});
    std::size_t row = 0;
    for_each_multi_index(os.k, [&](const std::vector<int>& kappa) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j + 1 < os.k[i]; ++j) {
                double expect = -2.0 / os.k[i] + (kappa[i] == j ? 2.0 : 0.0);
                CHECK(os.w_basis(row, os.w_index(i, j)) == doctest::Approx(expect));
            }
        ++row;
    });
}

TEST_CASE("projection depends only on the marginals") {
    Rng rng(42);
    for (auto k : std::vector<std::vector<int>>{{2, 2}, {3, 2}, {2, 2, 2}}) {
        auto os = OutcomeSpace<double>::build(k);
        for (int t = 0; t < 25; ++t) {
            auto p = random_distribution(os.total, rng);
            // Product of the marginals of p.
            Vec<double> q = {1.0};
            for (std::size_t i = 0; i < k.size(); ++i) q = kron(q, marginal(k, p, i));
            auto jp = os.projection.apply(p);
            auto jq = os.projection.apply(q);
            for (std::size_t r = 0; r < os.total; ++r)
                CHECK(jp[r] == doctest::Approx(jq[r]).epsilon(1e-12));
            // Pairing against eta recovers the marginals.
            for (std::size_t i = 0; i < k.size(); ++i)
                for (int j = 0; j < k[i]; ++j) {
                    Vec<double> e = os.eta(i, j);
                    CHECK(dot(e, jp) == doctest::Approx(marginal(k, p, i)[j]));
                }
        }
    }
}

TEST_CASE("projector is exact for rational scalars") {
    auto os = OutcomeSpace<Rational>::build({3, 2});
    auto J2 = mat_mul(os.projection, os.projection);
    CHECK(J2.data == os.projection.data);
}

TEST_CASE("phi map: trivial family maps the w vectors to zero") {
    auto hc = make_hypercube<double>(2);
    MeasurementFamily<double> fam;
    fam.measurements = {trivial_measurement(hc, 2), trivial_measurement(hc, 3)};
    auto phi = phi_map(hc, fam);
    auto os = OutcomeSpace<double>::build({2, 3});
    for (int r = 0; r < hc.dim; ++r) {
        CHECK(phi.coeffs(r, 0) == doctest::Approx(hc.unit[r]));
        for (int c = 1; c < os.dim_e; ++c) CHECK(phi.coeffs(r, c) == doctest::Approx(0.0));
    }
}

TEST_CASE("phi map: eta vectors are sent to the effects") {
    auto hc = make_hypercube<double>(2);
    Rng rng(11);
    auto fam = random_family(hc, {3, 2}, rng);
    auto phi = phi_map(hc, fam);
    auto os = OutcomeSpace<double>::build({3, 2});
    // eta_j^{(i)} = (1/k_i) 1 + (1/2) w_j for j < k_i - 1,
    //             = (1/k_i) 1 - (1/2) sum_j w_j for the last outcome.
    for (int i = 0; i < 2; ++i) {
        int ki = os.k[i];
        for (int j = 0; j < ki; ++j) {
            Vec<double> coords(os.dim_e, 0.0);
            coords[0] = 1.0 / ki;
            if (j + 1 < ki)
                coords[os.w_index(i, j)] = 0.5;
            else
                for (int l = 0; l + 1 < ki; ++l) coords[os.w_index(i, l)] = -0.5;
            auto image = phi.apply(coords);
            for (int r = 0; r < hc.dim; ++r)
                CHECK(image[r] == doctest::Approx(fam.measurements[i].effects[j][r]));
        }
    }
}

TEST_CASE("adjoint of phi evaluates the outcome probabilities") {
    auto cp = make_crosspolytope<double>(2);
    Rng rng(12);
    auto fam = random_family(cp, {2, 3}, rng);
    auto phi = phi_map(cp, fam);
    auto os = OutcomeSpace<double>::build({2, 3});
    for (int t = 0; t < 20; ++t) {
        auto rho = random_state(cp, rng);
        auto pulled = phi.apply_adjoint(rho);  // w^* coordinates on E_k
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < os.k[i]; ++j) {
                Vec<double> coords(os.dim_e, 0.0);
                coords[0] = 1.0 / os.k[i];
                if (j + 1 < os.k[i])
                    coords[os.w_index(i, j)] = 0.5;
                else
                    for (int l = 0; l + 1 < os.k[i]; ++l) coords[os.w_index(i, l)] = -0.5;
                CHECK(dot(pulled, coords) ==
                      doctest::Approx(dot(fam.measurements[i].effects[j], rho)));
            }
    }
}

TEST_CASE("effect tensor coefficients and the full array") {
    auto hc = make_hypercube<double>(2);
    Rng rng(13);
    auto fam = random_family(hc, {2, 3}, rng);
    auto t = effect_tensor(hc, fam);
    CHECK(t.p0 == hc.unit);
    auto full = t.full();
    auto os = OutcomeSpace<double>::build(t.k);
    // <phi^(f), eta_j^{(i)} (x) v> = <f_j^{(i)}, v> for every state generator.
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < os.k[i]; ++j)
            for (const auto& v : hc.state_generators())
                CHECK(pair_eta(os, full, hc.dim, i, j, v) ==
                      doctest::Approx(dot(fam.measurements[i].effects[j], v)));
}

TEST_CASE("dichotomic tensor: trivial effect gives the zero reduced block") {
    auto hc = make_hypercube<double>(2);
    auto t = effect_tensor_dichotomic(hc, {scaled(hc.unit, 0.5)});
    CHECK(inf_norm(t.dichotomic_blocks()[0]) <= 1e-15);
}

TEST_CASE("cs split: unbiased effects have vanishing bias part") {
    auto hc = make_hypercube<double>(2);
    Vec<double> f1 = {0.5, 0.5, 0.0}, f2 = {0.5, 0.0, -0.25};
    auto t = effect_tensor_dichotomic(hc, {f1, f2});
    auto s = cs_split(hc, t);
    CHECK(inf_norm(s.y) <= 1e-15);
    CHECK(s.xi_bar[0] == Vec<double>{1.0, 0.0});
    CHECK(s.xi_bar[1] == Vec<double>{0.0, -0.5});
    // Biased tuple.
    auto t2 = effect_tensor_dichotomic(hc, {Vec<double>{0.7, 0.1, 0.0}, f2});
    CHECK(cs_split(hc, t2).y[0] == doctest::Approx(0.4));
}

TEST_CASE("relabeling a factor matches the tensor of the relabeled family") {
    auto hc = make_hypercube<double>(2);
    Rng rng(14);
    auto fam = random_family(hc, {2, 2}, rng);
    auto full = effect_tensor(hc, fam).full();
    // Swap the outcomes of measurement 0.
    auto swapped = relabel_factor({2, 2}, full, hc.dim, 0, {1, 0});
    MeasurementFamily<double> fam2 = fam;
    std::swap(fam2.measurements[0].effects[0], fam2.measurements[0].effects[1]);
    auto full2 = effect_tensor(hc, fam2).full();
    for (std::size_t i = 0; i < full.size(); ++i)
        CHECK(swapped[i] == doctest::Approx(full2[i]));
}

TEST_CASE("family validity matches max-cone membership of the tensor") {
    auto hc = make_hypercube<double>(2);
    auto os = OutcomeSpace<double>::build({2, 2});
    Rng rng(15);
    int valid_seen = 0, invalid_seen = 0;
    for (int t = 0; t < 120; ++t) {
        MeasurementFamily<double> fam;
        bool valid = t % 2 == 0;
        if (valid) {
            fam = random_family(hc, {2, 2}, rng);
        } else {
            // Deliberately invalid: an effect pushed outside [0, 1].
            fam = random_family(hc, {2, 2}, rng);
            fam.measurements[0].effects[0][1] += 2.0;
            fam.measurements[0].effects[1][1] -= 2.0;
        }
        auto full = effect_tensor(hc, fam).full();
        bool pu = tensor_in_max_dual(hc, os, full, 1e-9);
        CHECK(pu == validate_family(hc, fam, 1e-9));
        (valid ? valid_seen : invalid_seen) += 1;
    }
    CHECK(valid_seen > 0);
    CHECK(invalid_seen > 0);
}

TEST_CASE("sign maps preserve max-cone membership of effect tensors") {
    auto hc = make_hypercube<double>(2);
    Rng rng(16);
    for (int g = 1; g <= 3; ++g) {
        std::vector<int> k(g, 2);
        auto os = OutcomeSpace<double>::build(k);
        auto fam = random_family(hc, k, rng);
        auto full = effect_tensor(hc, fam).full();
        bool base = tensor_in_max_dual(hc, os, full, 1e-9);
        for_each_sign_vector(g, [&](const std::vector<int>& eps) {
            Vec<double> cur = full;
            for (int i = 0; i < g; ++i)
                if (eps[i] < 0) cur = relabel_factor(k, cur, hc.dim, i, {1, 0});
            CHECK(tensor_in_max_dual(hc, os, cur, 1e-9) == base);
        });
    }
}
