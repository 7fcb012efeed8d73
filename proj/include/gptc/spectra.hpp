#pragma once

#include <optional>
#include <vector>

#include "gptc/compat.hpp"
#include "gptc/cone.hpp"
#include "gptc/enumeration.hpp"
#include "gptc/gpt.hpp"
#include "gptc/outcome_space.hpp"
#include "gptc/random.hpp"

namespace gptc {

/// A point of a generalized spectrahedron over (k, L): the free block z0 and
/// the blocks z_j^{(i)}, i in [g], j in [k_i - 1].
template <class S>
struct SpectraPoint {
    Vec<S> z0;
    std::vector<std::vector<Vec<S>>> z;

    int g() const { return static_cast<int>(z.size()); }

    static SpectraPoint zero(const std::vector<int>& k, int dim) {
        SpectraPoint p;
        p.z0 = zeros<S>(dim);
        for (int ki : k) p.z.push_back(std::vector<Vec<S>>(ki - 1, zeros<S>(dim)));
        return p;
    }
};

namespace detail {

template <class S>
void check_point_shape(const std::vector<int>& k, const PolyCone<S>& L,
                       const SpectraPoint<S>& p) {
    if (static_cast<int>(p.z0.size()) != L.dim || p.z.size() != k.size())
        throw DimensionMismatch("spectra: point shape");
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (static_cast<int>(p.z[i].size()) != k[i] - 1)
            throw DimensionMismatch("spectra: block count");
        for (const auto& zij : p.z[i])
            if (static_cast<int>(zij.size()) != L.dim)
                throw DimensionMismatch("spectra: block dimension");
    }
}

/// The slice z_kappa = z0 + sum_ij w_j^{(i)}(kappa) z_j^{(i)}.
template <class S>
Vec<S> jewel_slice(const std::vector<int>& k, const SpectraPoint<S>& p,
                   const std::vector<int>& kappa) {
    Vec<S> acc = p.z0;
    for (std::size_t i = 0; i < k.size(); ++i)
        for (int j = 0; j < k[i] - 1; ++j)
            axpy(from_rational<S>(
                     OutcomeSpace<S>::w_coeff(k, static_cast<int>(i), j, kappa)),
                 p.z[i][j], acc);
    return acc;
}

}  // namespace detail

/// Membership in the (k; L, L+)-jewel: every slice z_kappa lies in L^+.  For
/// dichotomic k this is the diamond condition z0 + sum eps_i z_i in L^+.
template <class S>
bool jewel_member(const std::vector<int>& k, const PolyCone<S>& L, const SpectraPoint<S>& p,
                  const S& tol = scalar_traits<S>::default_tol()) {
    detail::check_point_shape(k, L, p);
    bool ok = true;
    for_each_multi_index(k, [&](const std::vector<int>& kappa) {
        if (ok && !L.contains(detail::jewel_slice(k, p, kappa), tol)) ok = false;
    });
    return ok;
}

/// Barycenter of the slices; equals z0 for points of the jewel.
template <class S>
Vec<S> jewel_barycenter(const std::vector<int>& k, const SpectraPoint<S>& p) {
    Vec<S> acc = zeros<S>(static_cast<int>(p.z0.size()));
    for_each_multi_index(k, [&](const std::vector<int>& kappa) {
        acc = add(acc, detail::jewel_slice(k, p, kappa));
    });
    return scaled(acc, S(1) / S(static_cast<long>(index_product(k))));
}

/// Membership in D_f(k; L, L+): the tensor 1 (x) z0 + sum p_j^{(i)} (x) z_j^{(i)}
/// must lie in A^+ (x)_min L^+, decided by LP over the product generators.
template <class S>
bool df_member(const Gpt<S>& g, const MeasurementFamily<S>& fam, const PolyCone<S>& L,
               const SpectraPoint<S>& p, const S& tol = scalar_traits<S>::default_tol()) {
    detail::check_point_shape(fam.outcome_vector(), L, p);
    auto t = effect_tensor(g, fam);
    const int d = g.dim, dl = L.dim;
    Vec<S> target(static_cast<std::size_t>(d) * dl, S{});
    for (int a = 0; a < d; ++a)
        for (int l = 0; l < dl; ++l) {
            S v = g.unit[a] * p.z0[l];
            for (std::size_t i = 0; i < t.p.size(); ++i)
                for (std::size_t j = 0; j < t.p[i].size(); ++j)
                    v += t.p[i][j][a] * p.z[i][j][l];
            target[static_cast<std::size_t>(a) * dl + l] = v;
        }
    std::vector<Vec<S>> gens;
    for (const auto& am : g.dual_generators())
        for (const auto& gl : L.generators) gens.push_back(kron(am, gl));
    return conic_decomposition(gens, target, tol).feasible;
}

/// Random point of the jewel over a polyhedral cone, used by the optional
/// refutation pre-pass of jewel_inclusion and by tests.
template <class S>
SpectraPoint<S> sample_jewel_point(const std::vector<int>& k, const PolyCone<S>& L,
                                   const Vec<S>& unit, Rng& rng) {
    SpectraPoint<S> p;
    // Random interior-ish base point.
    p.z0 = zeros<S>(L.dim);
    for (const auto& gen : L.generators)
        axpy(scalar_traits<S>::from_double(0.05 + rng.uniform01()), gen, p.z0);
    S u = dot(unit, p.z0);
    p.z0 = scaled(p.z0, S(1) / u);
    for (int ki : k) {
        std::vector<Vec<S>> blocks;
        for (int j = 0; j + 1 < ki; ++j) {
            Vec<S> r(L.dim);
            for (auto& v : r) v = scalar_traits<S>::from_double(rng.uniform(-1, 1));
            blocks.push_back(std::move(r));
        }
        p.z.push_back(std::move(blocks));
    }
    if (!L.has_facets()) throw Error("sample_jewel_point: facets required");
    double tmax = 1e30;
    for_each_multi_index(k, [&](const std::vector<int>& kappa) {
        Vec<S> dir = zeros<S>(L.dim);
        for (std::size_t i = 0; i < k.size(); ++i)
            for (int j = 0; j < k[i] - 1; ++j)
                axpy(from_rational<S>(
                         OutcomeSpace<S>::w_coeff(k, static_cast<int>(i), j, kappa)),
                     p.z[i][j], dir);
        for (const auto& h : L.facets) {
            double num = scalar_traits<S>::to_double(dot(h, p.z0));
            double den = scalar_traits<S>::to_double(dot(h, dir));
            if (den < -1e-15) tmax = std::min(tmax, num / -den);
        }
    });
    if (tmax > 1e29) tmax = 1.0;
    S t = scalar_traits<S>::from_double(tmax * rng.uniform01());
    for (auto& blocks : p.z)
        for (auto& b : blocks) b = scaled(b, t);
    return p;
}

/*
 * Inclusion of the GPT jewel in D_f over (V, V^+), equivalent to the
 * positivity of Phi^(f) (x) id on the maximal tensor cone.  Decided exactly
 * through the finite reduction for polyhedral data: phi^(f) must decompose
 * over the generators J(e_kappa) (x) a_m of (E_k^+)^* (x)_min A^+.  A
 * positive sampler budget enables a fast refutation pre-pass through
 * df_member; the verdict itself never comes from sampling.
 */
template <class S>
bool jewel_inclusion(const Gpt<S>& g, const MeasurementFamily<S>& fam, int sampler_budget = 0,
                     Rng* rng = nullptr, const S& tol = scalar_traits<S>::default_tol()) {
    const auto k = fam.outcome_vector();
    if (sampler_budget > 0 && rng != nullptr) {
        const auto& cone = g.require_cone();
        for (int t = 0; t < sampler_budget; ++t) {
            auto p = sample_jewel_point(k, cone, g.unit, *rng);
            if (!df_member(g, fam, cone, p, tol)) return false;
        }
    }
    auto os = OutcomeSpace<S>::build(k);
    const auto& apos = g.dual_generators();
    const int nm = static_cast<int>(apos.size());
    const int d = g.dim;
    Vec<S> full = effect_tensor(g, fam).full();
    LpProblem<S> p;
    p.add_vars(static_cast<int>(os.total) * nm, VarSign::NonNeg);
    for (std::size_t kap = 0; kap < os.total; ++kap)
        for (int a = 0; a < d; ++a) {
            Vec<S> row(p.num_vars(), S{});
            for (std::size_t e = 0; e < os.total; ++e)
                for (int m = 0; m < nm; ++m)
                    row[e * static_cast<std::size_t>(nm) + m] =
                        os.projection(kap, e) * apos[m][a];
            p.add_row(std::move(row), Rel::Eq, full[kap * static_cast<std::size_t>(d) + a]);
        }
    return lp_feasible(p, tol).feasible;
}

/// Scaled inclusion (1, s) . jewel inside D_f, which by the inclusion-constant
/// identity is the inclusion for the correspondingly noised family.
template <class S>
bool jewel_inclusion_scaled(const Gpt<S>& g, const MeasurementFamily<S>& fam, const Vec<S>& s,
                            const S& tol = scalar_traits<S>::default_tol()) {
    return jewel_inclusion(g, add_noise(g, fam, s), 0, nullptr, tol);
}

/// Minimal generalized spectrahedron: (v_1..v_g) with sum e_i (x) v_i in
/// C (x)_min L^+, decided by decomposition over the product generators.
template <class S>
bool dmin_member(const PolyCone<S>& C, const PolyCone<S>& L, const std::vector<Vec<S>>& v,
                 const S& tol = scalar_traits<S>::default_tol()) {
    if (static_cast<int>(v.size()) != C.dim) throw DimensionMismatch("dmin_member: tuple size");
    const int dl = L.dim;
    Vec<S> target(static_cast<std::size_t>(C.dim) * dl);
    for (int i = 0; i < C.dim; ++i)
        for (int l = 0; l < dl; ++l)
            target[static_cast<std::size_t>(i) * dl + l] = v[i][l];
    std::vector<Vec<S>> gens;
    for (const auto& c : C.generators)
        for (const auto& gl : L.generators) gens.push_back(kron(c, gl));
    return conic_decomposition(gens, target, tol).feasible;
}

/// Maximal generalized spectrahedron: sum_i h_i v_i in L^+ for every
/// generator h of the dual cone of C (its facet covectors).
template <class S>
bool dmax_member(const PolyCone<S>& C, const PolyCone<S>& L, const std::vector<Vec<S>>& v,
                 const S& tol = scalar_traits<S>::default_tol()) {
    if (static_cast<int>(v.size()) != C.dim) throw DimensionMismatch("dmax_member: tuple size");
    if (!C.has_facets()) throw Error("dmax_member: H-description of C required");
    for (const auto& h : C.facets) {
        Vec<S> acc = zeros<S>(L.dim);
        for (int i = 0; i < C.dim; ++i) axpy(h[i], v[i], acc);
        if (!L.contains(acc, tol)) return false;
    }
    return true;
}

/*
 * Level-1 data: the extreme rays of the (k; R, R_+)-jewel in w coordinates
 * (z0, z_j^{(i)}).  Per factor they are (1, (k_i/2) e_j) and
 * (1, -(k_i/2)(1..1)); the multi-factor rays embed factor by factor since
 * level-1 inclusions split over direct sums.
 */
inline std::vector<Vec<double>> level1_jewel_rays(const std::vector<int>& k) {
    int dim_e = 1;
    for (int ki : k) dim_e += ki - 1;
    std::vector<Vec<double>> rays;
    int offset = 1;
    for (int ki : k) {
        for (int j = 0; j < ki - 1; ++j) {
            Vec<double> r(dim_e, 0.0);
            r[0] = 1.0;
            r[offset + j] = ki / 2.0;
            rays.push_back(std::move(r));
        }
        Vec<double> rneg(dim_e, 0.0);
        rneg[0] = 1.0;
        for (int j = 0; j < ki - 1; ++j) rneg[offset + j] = -ki / 2.0;
        rays.push_back(std::move(rneg));
        offset += ki - 1;
    }
    return rays;
}

/// Level-1 inclusion D_jewel(k; R, R+) within D_f(k; R, R+): the rays must
/// map into A^+ under Phi^(f); holds exactly for valid measurement tuples.
template <class S>
bool level1_inclusion(const Gpt<S>& g, const std::vector<std::vector<Vec<S>>>& effects_head,
                      const std::vector<int>& k,
                      const S& tol = scalar_traits<S>::default_tol()) {
    // effects_head[i] holds the first k_i - 1 effects of measurement i.
    auto rays = level1_jewel_rays(k);
    std::vector<std::pair<int, int>> col_to_ij;
    for (std::size_t i = 0; i < k.size(); ++i)
        for (int j = 0; j < k[i] - 1; ++j) col_to_ij.push_back({static_cast<int>(i), j});
    for (const auto& r : rays) {
        Vec<S> img = scaled(g.unit, scalar_traits<S>::from_double(r[0]));
        for (std::size_t c = 0; c < col_to_ij.size(); ++c) {
            double coef = r[c + 1];
            if (coef == 0.0) continue;
            auto [i, j] = col_to_ij[c];
            Vec<S> block = scaled(effects_head[i][j], S(2));
            axpy(S(-2) / S(k[i]), g.unit, block);
            axpy(scalar_traits<S>::from_double(coef), block, img);
        }
        if (!in_dual_cone(g, img, tol)) return false;
    }
    return true;
}

/// Functional range helpers (polytope predicates used by direct-sum tests).
/// W(a) vertices are the images of the normalized dual-cone generators.
template <class S>
std::vector<Vec<double>> functional_range_vertices(const PolyCone<S>& L, const Vec<S>& unit_L,
                                                   const std::vector<Vec<S>>& a) {
    std::vector<Vec<double>> verts;
    if (!L.has_facets()) throw Error("functional_range_vertices: H-description required");
    for (const auto& phi : L.facets) {
        S nrm = dot(phi, unit_L);
        if (!(nrm > S{})) continue;
        Vec<double> v;
        for (const auto& ai : a)
            v.push_back(scalar_traits<S>::to_double(dot(phi, ai) / nrm));
        verts.push_back(std::move(v));
    }
    return verts;
}

/*
 * Search for a counterexample to "z0 = 0 forces z = 0" on the jewel: for
 * every block coordinate, an LP asks for a jewel point with z0 = 0 and that
 * coordinate pinned to +-1.  All searches infeasible means the zero slice is
 * trivial (any nonzero point could be rescaled to pin some coordinate).
 */
template <class S>
bool jewel_zero_base_forces_zero(const std::vector<int>& k, const PolyCone<S>& L,
                                 const S& tol = scalar_traits<S>::default_tol()) {
    if (!L.has_facets()) throw Error("jewel_zero_base_forces_zero: H-description required");
    int nblocks = 0;
    for (int ki : k) nblocks += ki - 1;
    const int dl = L.dim;
    for (int pin = 0; pin < nblocks * dl; ++pin)
        for (int sign : {1, -1}) {
            LpProblem<S> p;
            p.add_vars(nblocks * dl, VarSign::Free);
            for_each_multi_index(k, [&](const std::vector<int>& kappa) {
                for (const auto& h : L.facets) {
                    Vec<S> row(p.num_vars(), S{});
                    int blk = 0;
                    for (std::size_t i = 0; i < k.size(); ++i)
                        for (int j = 0; j < k[i] - 1; ++j, ++blk) {
                            S c = from_rational<S>(
                                OutcomeSpace<S>::w_coeff(k, static_cast<int>(i), j, kappa));
                            for (int l = 0; l < dl; ++l) row[blk * dl + l] = c * h[l];
                        }
                    p.add_row(std::move(row), Rel::Ge, S{});
                }
            });
            Vec<S> pinrow(p.num_vars(), S{});
            pinrow[pin] = S(1);
            p.add_row(std::move(pinrow), Rel::Eq, S(sign));
            if (lp_feasible(p, tol).feasible) return false;
        }
    return true;
}

/// x in C_a iff 1_L - sum_i x_i a_i in L^+; equals the polar of W(a).
template <class S>
bool in_Ca(const PolyCone<S>& L, const Vec<S>& unit_L, const std::vector<Vec<S>>& a,
           const Vec<double>& x, const S& tol = scalar_traits<S>::default_tol()) {
    Vec<S> acc = unit_L;
    for (std::size_t i = 0; i < a.size(); ++i)
        axpy(scalar_traits<S>::from_double(-x[i]), a[i], acc);
    return L.contains(acc, tol);
}

inline bool in_polar_of(const std::vector<Vec<double>>& vertices, const Vec<double>& x,
                        double tol = 1e-9) {
    for (const auto& v : vertices)
        if (dot(v, x) > 1.0 + tol) return false;
    return true;
}

}  // namespace gptc
