#pragma once

#include <cstddef>
#include <vector>

#include "gptc/enumeration.hpp"
#include "gptc/error.hpp"
#include "gptc/gpt.hpp"
#include "gptc/linalg.hpp"

namespace gptc {

template <class S>
S from_rational(const Rational& q) {
    if constexpr (scalar_traits<S>::exact)
        return q;
    else
        return scalar_traits<Rational>::to_double(q);
}

/*
 * The affine-function space of the polysimplex with outcome vector k, realized
 * as the subspace E_k of R^{k1...kg} spanned by the w basis
 *
 *     w = { 1_k,  w_j^{(i)} },   w_j^{(i)}(kappa) = -2/k_i + 2 delta_{kappa_i, j},
 *
 * together with the dual basis w^* and the orthogonal projection J onto E_k.
 * J is computed as W (W^T W)^{-1} W^T in exact rational arithmetic and only
 * then converted to the working scalar, so the dual-cone generators J(e_kappa)
 * carry no drift.
 */
template <class S>
struct OutcomeSpace {
    std::vector<int> k;
    std::size_t total = 0;  // k_1 * ... * k_g
    int dim_e = 0;          // 1 - g + sum k_i
    Mat<S> w_basis;         // total x dim_e, column 0 = 1_k
    Mat<S> w_dual;          // total x dim_e, dual basis of E^* in ambient coordinates
    Mat<S> projection;      // total x total

    int g() const { return static_cast<int>(k.size()); }

    /// Column of w_j^{(i)} (0-based factor i, 0-based j < k_i - 1).
    int w_index(int i, int j) const {
        int idx = 1;
        for (int t = 0; t < i; ++t) idx += k[t] - 1;
        return idx + j;
    }

    /// Coefficient w_j^{(i)}(kappa) = -2/k_i + 2 delta_{kappa_i, j}.
    static Rational w_coeff(const std::vector<int>& k, int i, int j, const std::vector<int>& kappa) {
        Rational c = Rational(-2) / k[i];
        if (kappa[i] == j) c += 2;
        return c;
    }

    /// Generator eta_j^{(i)} of E_k^+: indicator of {kappa_i = j}.
    Vec<S> eta(int i, int j) const {
        Vec<S> e(total, S{});
        std::size_t idx = 0;
        for_each_multi_index(k, [&](const std::vector<int>& kappa) {
            if (kappa[i] == j) e[idx] = S(1);
            ++idx;
        });
        return e;
    }

    /// Generators of (E_k^+)^*: the projections J(e_kappa).
    std::vector<Vec<S>> dual_cone_generators() const {
        std::vector<Vec<S>> gens;
        gens.reserve(total);
        for (std::size_t i = 0; i < total; ++i) gens.push_back(projection.col(i));
        return gens;
    }

    static OutcomeSpace build(const std::vector<int>& k, std::size_t cap = (std::size_t{1} << 16)) {
        for (int ki : k)
            if (ki < 2) throw Error("outcome space: every k_i must be >= 2");
        if (k.empty()) throw Error("outcome space: empty outcome vector");
        OutcomeSpace os;
        os.k = k;
        os.total = index_product(k);
        if (os.total > cap) throw SizeLimitExceeded("outcome space: index product above cap");
        os.dim_e = 1 - static_cast<int>(k.size());
        for (int ki : k) os.dim_e += ki;

        const std::size_t n = os.total;
        const int de = os.dim_e;
        Mat<Rational> W(n, de), Wd(n, de);
        Rational invN = Rational(1) / Rational(static_cast<long>(n));
        std::size_t row = 0;
        for_each_multi_index(k, [&](const std::vector<int>& kappa) {
            W(row, 0) = 1;
            Wd(row, 0) = invN;
            int col = 1;
            for (std::size_t i = 0; i < k.size(); ++i) {
                for (int j = 0; j < k[i] - 1; ++j, ++col) {
                    W(row, col) = w_coeff(k, static_cast<int>(i), j, kappa);
                    // w^*_j^{(i)}(kappa) = (k_i / N) * (delta_{kappa_i, j} - delta_{kappa_i, k_i - 1}) / 2
                    Rational v(0);
                    if (kappa[i] == j) v += Rational(1) / 2;
                    if (kappa[i] == k[i] - 1) v -= Rational(1) / 2;
                    Wd(row, col) = Rational(k[i]) * invN * v;
                }
            }
            ++row;
        });

        // Exact orthogonal projector J = W (W^T W)^{-1} W^T.
        Mat<Rational> Wt = W.transposed();
        Mat<Rational> gram = mat_mul(Wt, W);
        Mat<Rational> J = mat_mul(mat_mul(W, inverse(gram)), Wt);

        // Construction-time verification of the basis and projector identities.
        for (int a = 0; a < de; ++a)
            for (int b = 0; b < de; ++b) {
                Rational pair(0);
                for (std::size_t r = 0; r < n; ++r) pair += Wd(r, a) * W(r, b);
                if (pair != Rational(a == b ? 1 : 0))
                    throw Error("outcome space: dual basis pairing failed");
            }
        Mat<Rational> JJ = mat_mul(J, J);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (JJ(i, j) != J(i, j)) throw Error("outcome space: J^2 != J");
                if (J(i, j) != J(j, i)) throw Error("outcome space: J not symmetric");
            }
        if (rank(W, Rational(0)) != static_cast<std::size_t>(de))
            throw Error("outcome space: w basis is rank-deficient");

        os.w_basis = Mat<S>(n, de);
        os.w_dual = Mat<S>(n, de);
        os.projection = Mat<S>(n, n);
        for (std::size_t r = 0; r < n; ++r) {
            for (int c = 0; c < de; ++c) {
                os.w_basis(r, c) = from_rational<S>(W(r, c));
                os.w_dual(r, c) = from_rational<S>(Wd(r, c));
            }
            for (std::size_t c = 0; c < n; ++c) os.projection(r, c) = from_rational<S>(J(r, c));
        }
        return os;
    }
};

/// The positive unital map associated with a measurement family, in the
/// (w basis of E_k) -> (A) coordinates: 1_k -> 1, w_j^{(i)} -> 2 f_j^{(i)} - (2/k_i) 1.
template <class S>
MapTensor<S> phi_map(const Gpt<S>& g, const MeasurementFamily<S>& fam,
                     const S& tol = scalar_traits<S>::default_tol()) {
    if (!validate_family(g, fam, tol)) throw Error("phi_map: invalid measurement family");
    auto os = OutcomeSpace<S>::build(fam.outcome_vector());
    MapTensor<S> phi(os.dim_e, g.dim);
    for (int r = 0; r < g.dim; ++r) phi.coeffs(r, 0) = g.unit[r];
    for (int i = 0; i < fam.size(); ++i) {
        const int ki = fam.measurements[i].outcomes();
        for (int j = 0; j + 1 < ki; ++j) {
            int col = os.w_index(i, j);
            for (int r = 0; r < g.dim; ++r)
                phi.coeffs(r, col) =
                    S(2) * fam.measurements[i].effects[j][r] - S(2) / S(ki) * g.unit[r];
        }
    }
    return phi;
}

/*
 * Coefficient array of the tensor phi^(f) in the (w dual, A) pair of bases:
 * p_0 together with the p_j^{(i)}.  For a measurement family p_0 = 1 and
 * p_j^{(i)} = 2 f_j^{(i)} - (2/k_i) 1.
 */
template <class S>
struct EffectTensor {
    std::vector<int> k;
    Vec<S> p0;
    std::vector<std::vector<Vec<S>>> p;  // p[i][j], j < k_i - 1

    int g() const { return static_cast<int>(k.size()); }
    int ambient_dim() const { return static_cast<int>(p0.size()); }

    bool dichotomic() const {
        for (int ki : k)
            if (ki != 2) return false;
        return true;
    }

    /// Blocks 2 f_i - 1 of the reduced tensor phi-bar, dichotomic case.
    const std::vector<Vec<S>> dichotomic_blocks() const {
        if (!dichotomic()) throw Error("effect tensor: not dichotomic");
        std::vector<Vec<S>> blocks;
        blocks.reserve(p.size());
        for (const auto& pi : p) blocks.push_back(pi[0]);
        return blocks;
    }

    /// Full array in R^k (x) A, row-major [kappa][a].
    Vec<S> full() const {
        auto os = OutcomeSpace<S>::build(k);
        const int d = ambient_dim();
        Vec<S> out(os.total * static_cast<std::size_t>(d), S{});
        for (std::size_t r = 0; r < os.total; ++r) {
            for (int a = 0; a < d; ++a) {
                S v = os.w_dual(r, 0) * p0[a];
                int col = 1;
                for (std::size_t i = 0; i < k.size(); ++i)
                    for (int j = 0; j < k[i] - 1; ++j, ++col)
                        v += os.w_dual(r, col) * p[i][j][a];
                out[r * d + a] = v;
            }
        }
        return out;
    }
};

template <class S>
EffectTensor<S> effect_tensor(const Gpt<S>& g, const MeasurementFamily<S>& fam) {
    EffectTensor<S> t;
    t.k = fam.outcome_vector();
    t.p0 = g.unit;
    for (const auto& m : fam.measurements) {
        std::vector<Vec<S>> pi;
        const int ki = m.outcomes();
        for (int j = 0; j + 1 < ki; ++j) {
            Vec<S> block = scaled(m.effects[j], S(2));
            axpy(S(-2) / S(ki), g.unit, block);
            pi.push_back(std::move(block));
        }
        t.p.push_back(std::move(pi));
    }
    return t;
}

/// Dichotomic tensor from the first effects f_1..f_g (k = 2 x ... x 2).
template <class S>
EffectTensor<S> effect_tensor_dichotomic(const Gpt<S>& g, const std::vector<Vec<S>>& effects) {
    EffectTensor<S> t;
    t.k.assign(effects.size(), 2);
    t.p0 = g.unit;
    for (const auto& f : effects) {
        Vec<S> block = scaled(f, S(2));
        axpy(S(-1), g.unit, block);
        t.p.push_back({std::move(block)});
    }
    return t;
}

/// Centrally symmetric split of a dichotomic tensor: phi-bar = y (x) 1 + xi-bar
/// with y_i = 2 alpha_i - 1 and xi-bar blocks 2 fbar_i.
template <class S>
struct CsSplit {
    Vec<S> y;                     // length g
    std::vector<Vec<S>> xi_bar;   // blocks in Abar, length g
};

template <class S>
CsSplit<S> cs_split(const Gpt<S>& g, const EffectTensor<S>& t) {
    if (!g.cs) throw Error("cs_split: model is not centrally symmetric");
    auto blocks = t.dichotomic_blocks();
    CsSplit<S> s;
    for (const auto& b : blocks) {
        s.y.push_back(b[0]);
        s.xi_bar.push_back(Vec<S>(b.begin() + 1, b.end()));
    }
    return s;
}

/// Relabel the outcomes of one factor by a permutation (sigma_eps sign maps
/// are the label swaps 0 <-> 1 on dichotomic factors).
template <class S>
Vec<S> relabel_factor(const std::vector<int>& k, const Vec<S>& full, int block_dim, int factor,
                      const std::vector<int>& perm) {
    Vec<S> out(full.size(), S{});
    std::size_t row = 0;
    for_each_multi_index(k, [&](const std::vector<int>& kappa) {
        std::vector<int> target = kappa;
        target[factor] = perm[kappa[factor]];
        std::size_t trow = linear_index(k, target);
        for (int a = 0; a < block_dim; ++a)
            out[trow * block_dim + a] = full[row * block_dim + a];
        ++row;
    });
    return out;
}

/// Pairing of a full tensor in R^k (x) A against eta_j^{(i)} (x) v.
template <class S>
S pair_eta(const OutcomeSpace<S>& os, const Vec<S>& full, int block_dim, int i, int j,
           const Vec<S>& v) {
    S r{};
    std::size_t row = 0;
    for_each_multi_index(os.k, [&](const std::vector<int>& kappa) {
        if (kappa[i] == j) {
            for (int a = 0; a < block_dim; ++a) r += full[row * block_dim + a] * v[a];
        }
        ++row;
    });
    return r;
}

/// phi in (E_k^+)^* (x)_max A^+: finite check against the extremal rays
/// eta_j^{(i)} of E_k^+ and the generators of V^+.
template <class S>
bool tensor_in_max_dual(const Gpt<S>& g, const OutcomeSpace<S>& os, const Vec<S>& full,
                        const S& tol = scalar_traits<S>::default_tol()) {
    for (int i = 0; i < os.g(); ++i)
        for (int j = 0; j < os.k[i]; ++j)
            for (const auto& v : g.state_generators())
                if (pair_eta(os, full, g.dim, i, j, v) < -tol) return false;
    return true;
}

}  // namespace gptc
