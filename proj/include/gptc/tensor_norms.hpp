#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "gptc/enumeration.hpp"
#include "gptc/gpt.hpp"
#include "gptc/lp.hpp"
#include "gptc/outcome_space.hpp"
#include "gptc/random.hpp"

namespace gptc {

/// z = sum_i e_i (x) z_i with blocks z_i in some normed space X.
template <class S>
struct TensorElement {
    std::vector<Vec<S>> blocks;

    int g() const { return static_cast<int>(blocks.size()); }
};

using NormFn = std::function<double(const Vec<double>&)>;

inline NormFn p_norm_fn(BarNorm tag) {
    switch (tag) {
        case BarNorm::L1: return [](const Vec<double>& v) { return one_norm(v); };
        case BarNorm::Linf: return [](const Vec<double>& v) { return inf_norm(v); };
        case BarNorm::L2:
            return [](const Vec<double>& v) {
                double s = 0;
                for (double x : v) s += x * x;
                return std::sqrt(s);
            };
        default: throw Error("p_norm_fn: no closed form for this tag");
    }
}

/// Injective norm on l_1^g (x) X: sup over sign vectors of ||sum eps_i z_i||_X.
inline double injective_norm_l1(const TensorElement<double>& z, const NormFn& x_norm) {
    const int g = z.g();
    if (g > 24) throw SizeLimitExceeded("injective_norm_l1: 2^g enumeration too large");
    if (g == 0) return 0.0;
    double best = 0.0;
    for_each_sign_vector(g, [&](const std::vector<int>& eps) {
        Vec<double> acc(z.blocks[0].size(), 0.0);
        for (int i = 0; i < g; ++i) axpy(static_cast<double>(eps[i]), z.blocks[i], acc);
        best = std::max(best, x_norm(acc));
    });
    return best;
}

/// Projective norm on l_1^g (x) X: sum of the block norms.
inline double projective_norm_l1(const TensorElement<double>& z, const NormFn& x_norm) {
    double total = 0.0;
    for (const auto& b : z.blocks) total += x_norm(b);
    return total;
}

/// Injective norm on l_inf^g (x) X is the max block norm.
inline double injective_norm_linf(const TensorElement<double>& z, const NormFn& x_norm) {
    double best = 0.0;
    for (const auto& b : z.blocks) best = std::max(best, x_norm(b));
    return best;
}

/// Projective norm on l_inf^2 (x) X, closed form for a pair of blocks.
inline double projective_norm_linf_pair(const Vec<double>& x1, const Vec<double>& x2,
                                        const NormFn& x_norm) {
    return 0.5 * (x_norm(add(x1, x2)) + x_norm(sub(x1, x2)));
}

/*
 * Projective norm on l_inf^g (x) X for a polytope norm on X, by LP over the
 * vertex description of the pi unit ball: its extreme points are the
 * products (sign vector) (x) (X-ball vertex), so ||z||_pi is the smallest t
 * with z in t * conv of those products.
 */
template <class S>
S projective_norm_linf_polytope(const std::vector<Vec<S>>& blocks,
                                const std::vector<Vec<S>>& ball_vertices,
                                const S& tol = scalar_traits<S>::default_tol()) {
    const int g = static_cast<int>(blocks.size());
    if (g == 0) return S{};
    if (g > 20) throw SizeLimitExceeded("projective_norm_linf_polytope: sign enumeration");
    const int d = static_cast<int>(blocks[0].size());
    const int nv = static_cast<int>(ball_vertices.size());
    std::vector<std::vector<int>> signs;
    for_each_sign_vector(g, [&](const std::vector<int>& eps) { signs.push_back(eps); });
    const int ncoef = static_cast<int>(signs.size()) * nv;

    LpProblem<S> p;
    p.add_vars(ncoef + 1, VarSign::NonNeg);  // last variable is t
    // sum_{eps, w} c_{eps,w} * eps_i * w = z_i  (per measurement block), and
    // sum c <= t so that the convex -> conic scaling is captured by t.
    for (int i = 0; i < g; ++i)
        for (int a = 0; a < d; ++a) {
            Vec<S> row(ncoef + 1, S{});
            int idx = 0;
            for (const auto& eps : signs)
                for (int w = 0; w < nv; ++w, ++idx)
                    row[idx] = S(eps[i]) * ball_vertices[w][a];
            p.add_row(std::move(row), Rel::Eq, blocks[i][a]);
        }
    Vec<S> budget(ncoef + 1, S(1));
    budget[ncoef] = S(-1);
    p.add_row(std::move(budget), Rel::Le, S{});
    p.objective.assign(ncoef + 1, S{});
    p.objective[ncoef] = S(-1);
    auto r = lp_maximize(p, tol);
    if (r.status != LpStatus::Optimal)
        throw LpNumericalFailure("projective_norm_linf_polytope: LP failed");
    return -r.value;
}

namespace detail {

/// Full coordinate array of sum_i check-c_i (x) p_i in R^{2^g} (x) A.
template <class S>
Vec<S> dichotomic_bar_full(const std::vector<Vec<S>>& blocks) {
    const int g = static_cast<int>(blocks.size());
    const std::size_t n = std::size_t{1} << g;
    const int d = static_cast<int>(blocks[0].size());
    const S scale = S(1) / S(static_cast<long>(n));
    Vec<S> full(n * d, S{});
    std::vector<int> k(g, 2);
    std::size_t row = 0;
    for_each_multi_index(k, [&](const std::vector<int>& kappa) {
        for (int i = 0; i < g; ++i) {
            S ci = kappa[i] == 0 ? S(1) : S(-1);
            for (int a = 0; a < d; ++a) full[row * d + a] += scale * ci * blocks[i][a];
        }
        ++row;
    });
    return full;
}

}  // namespace detail

template <class S>
struct RhoComputation {
    S primal{};           // inf{lambda : lambda * check1 (x) 1 - phi-bar in min cone}
    S dual{};             // sup over the diamond-constrained functionals
    Vec<S> dual_y0;       // optimizer, ambient coordinates
    std::vector<Vec<S>> dual_y;

    S value() const { return dual; }
};

/*
 * The crossnorm whose unit ball consists exactly of the (bar tensors of)
 * compatible effect tuples.  Both conic-program forms are solved and their
 * agreement is asserted, a built-in strong-duality self test:
 *
 *   primal:  min lambda  s.t.  lambda * check1_g (x) 1 - phi-bar
 *                              in (E_g^+)^* (x)_min A^+
 *   dual:    max <phi-bar, 1_g (x) y_0 + sum_i c_i (x) y_i>
 *            s.t. <1, y_0> <= 1,  y_0 in V^+,
 *                 y_0 + sum_i eps_i y_i in V^+ for all sign vectors.
 */
template <class S>
RhoComputation<S> rho_norm_detail(const Gpt<S>& g, const std::vector<Vec<S>>& blocks,
                                  const S& tol = scalar_traits<S>::default_tol()) {
    const int gg = static_cast<int>(blocks.size());
    if (gg == 0) throw Error("rho_norm: empty tensor");
    if (gg > 16) throw SizeLimitExceeded("rho_norm: sign enumeration too large");
    const int d = g.dim;
    for (const auto& b : blocks)
        if (static_cast<int>(b.size()) != d) throw DimensionMismatch("rho_norm: block size");
    const auto& apos = g.dual_generators();   // generators of A^+
    RhoComputation<S> out;

    {  // Dual form.
        LpProblem<S> p;
        p.add_vars((gg + 1) * d, VarSign::Free);  // y_0, y_1, ..., y_g
        auto var = [&](int block, int coord) { return block * d + coord; };
        {
            Vec<S> row(p.num_vars(), S{});
            for (int a = 0; a < d; ++a) row[var(0, a)] = g.unit[a];
            p.add_row(std::move(row), Rel::Le, S(1));
        }
        for (const auto& h : apos) {  // y_0 in V^+
            Vec<S> row(p.num_vars(), S{});
            for (int a = 0; a < d; ++a) row[var(0, a)] = h[a];
            p.add_row(std::move(row), Rel::Ge, S{});
        }
        for_each_sign_vector(gg, [&](const std::vector<int>& eps) {
            for (const auto& h : apos) {
                Vec<S> row(p.num_vars(), S{});
                for (int a = 0; a < d; ++a) {
                    row[var(0, a)] = h[a];
                    for (int i = 0; i < gg; ++i) row[var(i + 1, a)] = S(eps[i]) * h[a];
                }
                p.add_row(std::move(row), Rel::Ge, S{});
            }
        });
        p.objective.assign(p.num_vars(), S{});
        for (int i = 0; i < gg; ++i)
            for (int a = 0; a < d; ++a) p.objective[var(i + 1, a)] = blocks[i][a];
        auto r = lp_maximize(p, tol);
        if (r.status != LpStatus::Optimal) throw LpNumericalFailure("rho_norm: dual LP failed");
        out.dual = r.value;
        out.dual_y0.assign(r.x.begin(), r.x.begin() + d);
        for (int i = 0; i < gg; ++i)
            out.dual_y.push_back(Vec<S>(r.x.begin() + (i + 1) * d, r.x.begin() + (i + 2) * d));
    }

    {  // Primal form over the generators J(e_eps) (x) a_m of the min cone.
        auto os = OutcomeSpace<S>::build(std::vector<int>(gg, 2));
        const std::size_t n = os.total;
        const int nm = static_cast<int>(apos.size());
        Vec<S> bar = detail::dichotomic_bar_full(blocks);
        const S invn = S(1) / S(static_cast<long>(n));
        LpProblem<S> p;
        const int ncoef = static_cast<int>(n) * nm;
        p.add_vars(ncoef + 1, VarSign::NonNeg);  // coefficients, then lambda
        for (std::size_t kap = 0; kap < n; ++kap)
            for (int a = 0; a < d; ++a) {
                Vec<S> row(ncoef + 1, S{});
                for (std::size_t e = 0; e < n; ++e)
                    for (int m = 0; m < nm; ++m)
                        row[e * nm + m] = os.projection(kap, e) * apos[m][a];
                row[ncoef] = -invn * g.unit[a];
                p.add_row(std::move(row), Rel::Eq, -bar[kap * d + a]);
            }
        p.objective.assign(ncoef + 1, S{});
        p.objective[ncoef] = S(-1);
        auto r = lp_maximize(p, tol);
        if (r.status != LpStatus::Optimal) throw LpNumericalFailure("rho_norm: primal LP failed");
        out.primal = -r.value;
    }

    S gap = scalar_traits<S>::abs(out.primal - out.dual);
    if constexpr (scalar_traits<S>::exact) {
        if (gap != S{}) throw LpNumericalFailure("rho_norm: strong duality violated exactly");
    } else {
        if (gap > 1e-7) throw LpNumericalFailure("rho_norm: primal/dual gap above 1e-7");
    }
    return out;
}

template <class S>
S rho_norm(const Gpt<S>& g, const std::vector<Vec<S>>& blocks,
           const S& tol = scalar_traits<S>::default_tol()) {
    return rho_norm_detail(g, blocks, tol).value();
}

template <class S>
S rho_norm(const Gpt<S>& g, const EffectTensor<S>& t,
           const S& tol = scalar_traits<S>::default_tol()) {
    return rho_norm(g, t.dichotomic_blocks(), tol);
}

/// Compatibility region of the hypercube model: all partial sums over index
/// sets of size <= n stay below one.  Checked via the min(g, n) largest
/// entries of s.
inline bool region_hypercube(int g, int n, const Vec<double>& s, double tol = 1e-12) {
    if (static_cast<int>(s.size()) != g) throw DimensionMismatch("region_hypercube");
    Vec<double> sorted = s;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double acc = 0;
    for (int i = 0; i < std::min(g, n); ++i) acc += sorted[i];
    return acc <= 1.0 + tol;
}

struct BallRegion {
    bool member = false;
    bool exact = false;  // the quadratic condition is the exact region iff g <= n
};

/// Euclidean ball models: QC_g = {sum s_i^2 <= 1}; exact for g <= n, a
/// lower bound (sufficient condition) otherwise.
inline BallRegion region_ball(int g, int n, const Vec<double>& s, double tol = 1e-12) {
    if (static_cast<int>(s.size()) != g) throw DimensionMismatch("region_ball");
    double acc = 0;
    for (double v : s) acc += v * v;
    return BallRegion{acc <= 1.0 + tol, g <= n};
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    long double r = 1.0L;
    for (int i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / i;
    return static_cast<double>(r);
}

/// Compatibility degree of the cross-polytope models,
/// f(g) = (floor(g/2)+1) binom(g, floor(g/2)+1) / (g 2^{g-1});
/// attained whenever n >= 2^{g-1}.
inline double gamma_crosspolytope(int g) {
    if (g < 1) throw Error("gamma_crosspolytope: g must be >= 1");
    const int h = g / 2 + 1;
    return h * binomial(g, h) / (g * std::pow(2.0, g - 1));
}

/// 1-summing constants pi_1 of the classical sequence spaces; for the
/// self-adjoint trace-class the known bound c*d with c = 7.79 is returned
/// (an upper bound, not an exact value).
inline double one_summing(const std::string& tag, int n) {
    if (n < 1) throw Error("one_summing: n must be >= 1");
    if (tag == "linf") return static_cast<double>(n);
    if (tag == "l1") {
        const int h = n / 2 + 1;
        return std::pow(2.0, n - 1) * n / (h * binomial(n, h));
    }
    if (tag == "l2") {
        // sqrt(pi) Gamma((n+1)/2) / Gamma(n/2), in half-integer closed form.
        const int m = n / 2;
        if (n % 2 == 0) return 3.14159265358979323846 * m * binomial(2 * m, m) / std::pow(4.0, m);
        return std::pow(4.0, m) / binomial(2 * m, m);
    }
    if (tag == "S1_selfadjoint_bound") return 7.79 * n;
    throw Error("one_summing: unknown space tag '" + tag + "'");
}

struct Interval {
    double lower = 0;
    double upper = 0;
};

/*
 * Estimate rho(l_1^g, X) = max ||z||_pi / ||z||_eps for X one of the tagged
 * n-dimensional spaces.  Lower bound: canonical candidates (diagonal basis
 * blocks; Walsh sign columns for l_1) plus random search with coordinate
 * polishing.  Upper bound: min(g, n), tightened by the known values where
 * the candidates are optimal.
 */
inline Interval rho_ratio_estimate(BarNorm tag, int n, int g, int budget, Rng& rng) {
    NormFn nf = p_norm_fn(tag);
    auto ratio = [&](const TensorElement<double>& z) {
        double e = injective_norm_l1(z, nf);
        if (e < 1e-12) return 0.0;
        return projective_norm_l1(z, nf) / e;
    };

    double lower = 1.0;
    {  // Diagonal candidate: z_i = e_i for i < n, zero beyond.
        TensorElement<double> z;
        for (int i = 0; i < g; ++i)
            z.blocks.push_back(i < n ? unit_vec<double>(n, i) : zeros<double>(n));
        lower = std::max(lower, ratio(z));
    }
    if (tag == BarNorm::L1 && n >= (1 << (g - 1))) {
        // Columns (1, eps) over half the sign vectors; rows become blocks.
        TensorElement<double> z;
        z.blocks.assign(g, Vec<double>(n, 0.0));
        int col = 0;
        for_each_sign_vector(g - 1, [&](const std::vector<int>& eps) {
            z.blocks[0][col] = 1.0;
            for (int i = 1; i < g; ++i) z.blocks[i][col] = eps[i - 1];
            ++col;
        });
        lower = std::max(lower, ratio(z));
    }
    TensorElement<double> best;
    best.blocks.assign(g, Vec<double>(n, 0.0));
    for (int t = 0; t < budget; ++t) {
        TensorElement<double> z;
        for (int i = 0; i < g; ++i) {
            Vec<double> b(n);
            for (auto& v : b) v = rng.uniform(-1, 1);
            z.blocks.push_back(b);
        }
        double r = ratio(z);
        if (r > lower) {
            lower = r;
            best = z;
        }
    }
    // Coordinate polishing around the best random point.
    for (int pass = 0; pass < 3 && budget > 0; ++pass) {
        for (int i = 0; i < g; ++i)
            for (int a = 0; a < n; ++a)
                for (double step : {0.25, -0.25, 0.05, -0.05}) {
                    TensorElement<double> z = best;
                    z.blocks[i][a] += step;
                    double r = ratio(z);
                    if (r > lower) {
                        lower = r;
                        best = z;
                    }
                }
    }

    double upper = static_cast<double>(std::min(g, n));
    if (tag == BarNorm::Linf) upper = static_cast<double>(std::min(g, n));
    if (tag == BarNorm::L2 && g <= n) upper = std::sqrt(static_cast<double>(g));
    if (tag == BarNorm::L1) upper = std::min(upper, 1.0 / gamma_crosspolytope(g));
    if (lower > upper) lower = upper;
    return Interval{lower, upper};
}

}  // namespace gptc
