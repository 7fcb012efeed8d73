#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gptc/error.hpp"
#include "gptc/linalg.hpp"
#include "gptc/lp.hpp"

namespace gptc {

/// Decide x in cone{generators} by LP; the certificate carries either the
/// conic coefficients or a separating Farkas covector.
template <class S>
LpCertificate<S> conic_decomposition(const std::vector<Vec<S>>& generators, const Vec<S>& x,
                                     const S& tol = scalar_traits<S>::default_tol()) {
    if (generators.empty()) throw DegenerateCone("conic_decomposition: no generators");
    const std::size_t d = x.size();
    LpProblem<S> p;
    p.add_vars(static_cast<int>(generators.size()), VarSign::NonNeg);
    for (std::size_t i = 0; i < d; ++i) {
        Vec<S> row(generators.size());
        for (std::size_t m = 0; m < generators.size(); ++m) {
            if (generators[m].size() != d)
                throw DimensionMismatch("conic_decomposition: generator dimension");
            row[m] = generators[m][i];
        }
        p.add_row(std::move(row), Rel::Eq, x[i]);
    }
    return lp_feasible(p, tol);
}

/*
 * A closed convex cone carried jointly by generators (V-description) and
 * supporting inequalities (H-description).  The H-description may be absent;
 * membership then falls back to an LP over the generators.  Facet
 * enumeration for arbitrary cones is deliberately not implemented, so
 * operations that need the H-description require it to be present.
 */
template <class S>
struct PolyCone {
    int dim = 0;
    std::vector<Vec<S>> generators;
    std::vector<Vec<S>> facets;  // empty: H-description unknown

    bool has_facets() const { return !facets.empty(); }

    /// No validation; for internal constructions whose properness is implied.
    static PolyCone trusted(int dim, std::vector<Vec<S>> generators,
                            std::vector<Vec<S>> facets = {}) {
        PolyCone c;
        c.dim = dim;
        c.generators = std::move(generators);
        c.facets = std::move(facets);
        return c;
    }

    static PolyCone checked(int dim, std::vector<Vec<S>> generators,
                            std::vector<Vec<S>> facets = {},
                            const S& tol = scalar_traits<S>::default_tol()) {
        PolyCone c = trusted(dim, std::move(generators), std::move(facets));
        c.validate(tol);
        return c;
    }

    /// Properness and description-consistency checks.  Degenerate cones
    /// ({0}, full space, non-spanning, non-pointed) raise DegenerateCone.
    void validate(const S& tol = scalar_traits<S>::default_tol()) const {
        if (dim <= 0) throw DegenerateCone("cone: ambient dimension must be positive");
        if (generators.empty()) throw DegenerateCone("cone: no generators (the zero cone)");
        for (const auto& g : generators) {
            if (static_cast<int>(g.size()) != dim)
                throw DimensionMismatch("cone: generator dimension");
            if (inf_norm(g) == S{}) throw DegenerateCone("cone: zero generator");
        }
        for (const auto& h : facets)
            if (static_cast<int>(h.size()) != dim)
                throw DimensionMismatch("cone: facet dimension");

        for (const auto& h : facets)
            for (const auto& g : generators)
                if (dot(h, g) < -tol)
                    throw DegenerateCone("cone: generator violates a facet inequality");

        Mat<S> gm(generators.size(), dim);
        for (std::size_t i = 0; i < generators.size(); ++i)
            for (int j = 0; j < dim; ++j) gm(i, j) = generators[i][j];
        if (rank(gm, tol) != static_cast<std::size_t>(dim))
            throw DegenerateCone("cone: generators do not span the ambient space");

        for (const auto& g : generators)
            if (contains(negated(g), tol))
                throw DegenerateCone("cone: not pointed (contains a line)");

        cross_check(tol);
    }

    /// Membership: facet residuals when available, otherwise a generator LP.
    bool contains(const Vec<S>& x, const S& tol = scalar_traits<S>::default_tol()) const {
        if (static_cast<int>(x.size()) != dim)
            throw DimensionMismatch("cone: point dimension");
        if (has_facets()) {
            for (const auto& h : facets)
                if (dot(h, x) < -tol) return false;
            return true;
        }
        return conic_decomposition(generators, x, tol).feasible;
    }

private:
    // The two descriptions must carve out the same set.  Generators living
    // inside the facet cone is checked above; here sampled points of the
    // facet cone are run through the generator LP.
    void cross_check(const S& tol) const {
        if (!has_facets()) return;
        std::uint64_t state = 0x9e3779b97f4a7c15ull ^ (generators.size() * 0x100000001b3ull);
        auto next = [&]() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return state;
        };
        auto urand = [&]() { return static_cast<double>(next() >> 11) * 0x1p-53; };
        const int samples = 24;
        for (int t = 0; t < samples; ++t) {
            Vec<S> x(dim, S{});
            for (const auto& g : generators)
                if (next() % 2 == 0)
                    axpy(scalar_traits<S>::from_double(urand()), g, x);
            // Small rational perturbation, kept only when still facet-feasible.
            Vec<S> pert(x);
            for (auto& v : pert)
                v += scalar_traits<S>::from_double((urand() - 0.5) / 64.0);
            bool pert_in = true;
            for (const auto& h : facets)
                if (dot(h, pert) < S{}) {
                    pert_in = false;
                    break;
                }
            const Vec<S>& probe = pert_in ? pert : x;
            if (!conic_decomposition(generators, probe, tol).feasible)
                throw DegenerateCone("cone: facet description exceeds the generator cone");
        }
    }
};

/// Positive orthant of dimension d (self-dual).
template <class S>
PolyCone<S> orthant(int d) {
    std::vector<Vec<S>> gens;
    gens.reserve(d);
    for (int i = 0; i < d; ++i) gens.push_back(unit_vec<S>(d, i));
    return PolyCone<S>::trusted(d, gens, gens);
}

/// Cone over the unit ball of l_inf^n, lifted to dimension n+1:
/// {x : x_0 >= max_i |x_i|}.  2^n generators (1, eps), 2n facets (1, +-e_i).
template <class S>
PolyCone<S> linf_ball_cone(int n) {
    if (n < 1) throw DegenerateCone("linf_ball_cone: n must be >= 1");
    std::vector<Vec<S>> gens, facets;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        Vec<S> g(n + 1, S(1));
        for (int i = 0; i < n; ++i) g[i + 1] = (mask >> i) & 1 ? S(-1) : S(1);
        gens.push_back(std::move(g));
    }
    for (int i = 0; i < n; ++i)
        for (int s : {1, -1}) {
            Vec<S> h(n + 1, S{});
            h[0] = S(1);
            h[i + 1] = S(s);
            facets.push_back(std::move(h));
        }
    return PolyCone<S>::trusted(n + 1, std::move(gens), std::move(facets));
}

/// Cone over the unit ball of l_1^n: {x : x_0 >= ||(x_1..x_n)||_1}.
/// 2n generators (1, +-e_i), 2^n facets (1, eps).  Dual to linf_ball_cone.
template <class S>
PolyCone<S> l1_ball_cone(int n) {
    PolyCone<S> c = linf_ball_cone<S>(n);
    return PolyCone<S>::trusted(n + 1, std::move(c.facets), std::move(c.generators));
}

/// Swap of descriptions; the bipolar theorem makes this an involution.
template <class S>
PolyCone<S> dual_cone(const PolyCone<S>& c) {
    if (!c.has_facets())
        throw Error("dual_cone: H-description required (facet enumeration not implemented)");
    return PolyCone<S>::trusted(c.dim, c.facets, c.generators);
}

/// conv{x (x) y} over the generator products; facets stay implicit.
template <class S>
PolyCone<S> min_tensor(const PolyCone<S>& c1, const PolyCone<S>& c2,
                       std::size_t gen_cap = 4096) {
    const std::size_t count = c1.generators.size() * c2.generators.size();
    if (count > gen_cap) throw SizeLimitExceeded("min_tensor: generator count above cap");
    std::vector<Vec<S>> gens;
    gens.reserve(count);
    for (const auto& g : c1.generators)
        for (const auto& h : c2.generators) gens.push_back(kron(g, h));
    return PolyCone<S>::trusted(c1.dim * c2.dim, std::move(gens));
}

/// Membership in the maximal tensor cone: for polyhedral factors it suffices
/// to pair against products of dual-cone generators.
template <class S>
bool max_tensor_member(const PolyCone<S>& c1, const PolyCone<S>& c2, const Vec<S>& y,
                       const S& tol = scalar_traits<S>::default_tol()) {
    if (static_cast<int>(y.size()) != c1.dim * c2.dim)
        throw DimensionMismatch("max_tensor_member: point dimension");
    if (!c1.has_facets() || !c2.has_facets())
        throw Error("max_tensor_member: H-descriptions required");
    for (const auto& a : c1.facets)
        for (const auto& b : c2.facets)
            if (dot(kron(a, b), y) < -tol) return false;
    return true;
}

/// Coefficients of the canonical evaluation tensor chi in a dual basis pair:
/// <chi, alpha (x) v> = alpha(v).
template <class S>
struct CanonicalTensor {
    int dim = 0;
    Mat<S> coeffs;

    explicit CanonicalTensor(int d) : dim(d), coeffs(d, d) {
        for (int i = 0; i < d; ++i) coeffs(i, i) = S(1);
    }

    /// Flattened as an element of L (x) L^*, row-major.
    Vec<S> flat() const { return coeffs.data; }

    S pair(const Vec<S>& alpha, const Vec<S>& v) const {
        if (static_cast<int>(alpha.size()) != dim || static_cast<int>(v.size()) != dim)
            throw DimensionMismatch("CanonicalTensor::pair");
        return dot(alpha, v);
    }
};

/// A linear map Phi in fixed bases, doubling as the tensor phi^Phi via
/// <phi^Phi, w (x) v> = <Phi(w), v>.
template <class S>
struct MapTensor {
    int domain_dim = 0;
    int codomain_dim = 0;
    Mat<S> coeffs;  // coeffs(i, j) = component i of Phi(basis_j)

    MapTensor(int dom, int cod) : domain_dim(dom), codomain_dim(cod), coeffs(cod, dom) {}

    Vec<S> apply(const Vec<S>& w) const { return coeffs.apply(w); }

    Vec<S> apply_adjoint(const Vec<S>& v) const { return coeffs.transposed().apply(v); }

    /// phi^Phi flattened in M^* (x) L^* order: entry [j * codomain + i].
    Vec<S> as_tensor() const {
        Vec<S> t(static_cast<std::size_t>(domain_dim) * codomain_dim);
        for (int j = 0; j < domain_dim; ++j)
            for (int i = 0; i < codomain_dim; ++i)
                t[static_cast<std::size_t>(j) * codomain_dim + i] = coeffs(i, j);
        return t;
    }
};

}  // namespace gptc
