#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "gptc/enumeration.hpp"
#include "gptc/gpt.hpp"
#include "gptc/lp.hpp"
#include "gptc/outcome_space.hpp"
#include "gptc/sampling.hpp"
#include "gptc/tensor_norms.hpp"

namespace gptc {

template <class S>
struct CompatResult {
    bool compatible = false;
    /// Joint effects h_kappa in linear-index order, when compatible.
    std::optional<std::vector<Vec<S>>> joint;
    /// Farkas certificate of the deciding LP otherwise.
    std::optional<FarkasCertificate<S>> certificate;
};

namespace detail {

/// Variables of the compatibility LPs: h_kappa = sum_m c_{kappa,m} a_m over
/// the generators a_m of A^+.  Returns the joint effects for a solution.
template <class S>
std::vector<Vec<S>> assemble_joint(const Gpt<S>& g, std::size_t total, const Vec<S>& coeffs) {
    const auto& apos = g.dual_generators();
    const int nm = static_cast<int>(apos.size());
    std::vector<Vec<S>> joint;
    joint.reserve(total);
    for (std::size_t kap = 0; kap < total; ++kap) {
        Vec<S> h(g.dim, S{});
        for (int m = 0; m < nm; ++m)
            axpy(coeffs[kap * static_cast<std::size_t>(nm) + m], apos[m], h);
        joint.push_back(std::move(h));
    }
    return joint;
}

template <class S>
void check_joint_marginals(const Gpt<S>& g, const MeasurementFamily<S>& fam,
                           const std::vector<Vec<S>>& joint, const S& tol) {
    const auto k = fam.outcome_vector();
    for (int i = 0; i < fam.size(); ++i)
        for (int j = 0; j < k[i]; ++j) {
            Vec<S> acc(g.dim, S{});
            std::size_t row = 0;
            for_each_multi_index(k, [&](const std::vector<int>& kappa) {
                if (kappa[i] == j) acc = add(acc, joint[row]);
                ++row;
            });
            if (inf_norm(sub(acc, fam.measurements[i].effects[j])) > tol)
                throw LpNumericalFailure("compat: joint marginal failed re-verification");
        }
}

}  // namespace detail

/*
 * Joint-measurement feasibility: find h_kappa in A^+ whose marginals are the
 * given measurements.  The LP carries one equality block per marginal
 * constraint (j < k_i - 1) plus the normalization sum_kappa h_kappa = 1; the
 * remaining marginals follow.  A returned joint is re-verified; a Farkas
 * certificate of the marginal system is attached on failure.
 */
template <class S>
CompatResult<S> is_compatible(const Gpt<S>& g, const MeasurementFamily<S>& fam,
                              const S& tol = scalar_traits<S>::default_tol()) {
    if (!validate_family(g, fam, tol))
        throw Error("is_compatible: invalid measurement family");
    const auto k = fam.outcome_vector();
    const auto os_total = index_product(k);
    const auto& apos = g.dual_generators();
    const int nm = static_cast<int>(apos.size());
    const int nvar = static_cast<int>(os_total) * nm;

    LpProblem<S> p;
    p.add_vars(nvar, VarSign::NonNeg);
    auto add_block = [&](int i, int j, const Vec<S>& target) {
        // sum over {kappa : kappa_i = j} (all kappa when i < 0) of h_kappa = target
        for (int a = 0; a < g.dim; ++a) {
            Vec<S> row(nvar, S{});
            std::size_t kap = 0;
            for_each_multi_index(k, [&](const std::vector<int>& kappa) {
                if (i < 0 || kappa[i] == j)
                    for (int m = 0; m < nm; ++m)
                        row[kap * static_cast<std::size_t>(nm) + m] = apos[m][a];
                ++kap;
            });
            p.add_row(std::move(row), Rel::Eq, target[a]);
        }
    };
    for (int i = 0; i < fam.size(); ++i)
        for (int j = 0; j + 1 < k[i]; ++j) add_block(i, j, fam.measurements[i].effects[j]);
    add_block(-1, 0, g.unit);

    auto cert = lp_feasible(p, tol);
    CompatResult<S> res;
    res.compatible = cert.feasible;
    if (cert.feasible) {
        res.joint = detail::assemble_joint(g, os_total, cert.x);
        S vtol = scalar_traits<S>::exact ? S{} : S(1e-8);
        detail::check_joint_marginals(g, fam, *res.joint, vtol);
    } else {
        res.certificate = std::move(cert.farkas);
    }
    return res;
}

/*
 * Positive-extension route: find h_kappa in A^+ with Phi-tilde(e_kappa) =
 * h_kappa restricting to Phi^(f) on the w basis, i.e.
 *
 *   sum_kappa h_kappa = 1,
 *   sum_kappa w_j^{(i)}(kappa) h_kappa = 2 f_j^{(i)} - (2/k_i) 1.
 *
 * Equivalent to is_compatible but a differently shaped LP.
 */
template <class S>
CompatResult<S> is_compatible_via_extension(const Gpt<S>& g, const MeasurementFamily<S>& fam,
                                            const S& tol = scalar_traits<S>::default_tol()) {
    if (!validate_family(g, fam, tol))
        throw Error("is_compatible_via_extension: invalid measurement family");
    const auto k = fam.outcome_vector();
    auto os = OutcomeSpace<S>::build(k);
    const auto& apos = g.dual_generators();
    const int nm = static_cast<int>(apos.size());
    const int nvar = static_cast<int>(os.total) * nm;
    auto t = effect_tensor(g, fam);

    LpProblem<S> p;
    p.add_vars(nvar, VarSign::NonNeg);
    // Images of the w basis under Phi^(f), indexed like the basis columns.
    std::vector<Vec<S>> targets(os.dim_e, g.unit);
    for (std::size_t i = 0; i < k.size(); ++i)
        for (int j = 0; j < k[i] - 1; ++j)
            targets[os.w_index(static_cast<int>(i), j)] = t.p[i][j];
    for (int c = 0; c < os.dim_e; ++c) {
        const Vec<S>& target = targets[c];
        for (int a = 0; a < g.dim; ++a) {
            Vec<S> row(nvar, S{});
            for (std::size_t kap = 0; kap < os.total; ++kap)
                for (int m = 0; m < nm; ++m)
                    row[kap * static_cast<std::size_t>(nm) + m] =
                        os.w_basis(kap, c) * apos[m][a];
            p.add_row(std::move(row), Rel::Eq, target[a]);
        }
    }

    auto cert = lp_feasible(p, tol);
    CompatResult<S> res;
    res.compatible = cert.feasible;
    if (cert.feasible) {
        res.joint = detail::assemble_joint(g, os.total, cert.x);
        S vtol = scalar_traits<S>::exact ? S{} : S(1e-8);
        detail::check_joint_marginals(g, fam, *res.joint, vtol);
    } else {
        res.certificate = std::move(cert.farkas);
    }
    return res;
}

/// Noise vector s applied componentwise, then joint-measurement feasibility.
template <class S>
bool region_membership(const Gpt<S>& g, const MeasurementFamily<S>& fam, const Vec<S>& s,
                       const S& tol = scalar_traits<S>::default_tol()) {
    if (s.size() != static_cast<std::size_t>(fam.size()))
        throw DimensionMismatch("region_membership: noise vector length");
    for (const auto& v : s)
        if (v < S{} || v > S(1)) throw Error("region_membership: s outside [0,1]^g");
    return is_compatible(g, add_noise(g, fam, s), tol).compatible;
}

/// Largest uniform noise level keeping the family compatible, by bisection.
/// Compatibility is monotone under mixing, so the bracket stays valid.
template <class S>
double gamma_of_family(const Gpt<S>& g, const MeasurementFamily<S>& fam,
                       double bisect_tol = 1e-6, int max_iters = 40,
                       const S& tol = scalar_traits<S>::default_tol()) {
    if (is_compatible(g, fam, tol).compatible) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < max_iters && hi - lo > bisect_tol * 0.5; ++it) {
        double mid = 0.5 * (lo + hi);
        if (is_compatible(g, add_uniform_noise(g, fam, scalar_traits<S>::from_double(mid)), tol)
                .compatible)
            lo = mid;
        else
            hi = mid;
    }
    if (lo == 0.0 &&
        !is_compatible(g, add_uniform_noise(g, fam, S{}), tol).compatible)
        throw LpNumericalFailure("gamma_of_family: fully noisy family reported incompatible");
    return 0.5 * (lo + hi);
}

/// Diagonal scaling of the symmetrization embedding: a certified diagonal
/// point of the dichotomic inclusion set for sum_i (k_i - 1) measurements
/// yields ((k_1-1)^{-2} s_1, ..., (k_g-1)^{-2} s_g) for k outcomes.
inline Vec<double> symmetrization_lift(const Vec<double>& s, const std::vector<int>& k) {
    if (s.size() != k.size()) throw DimensionMismatch("symmetrization_lift");
    Vec<double> out(s.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
        double f = static_cast<double>(k[i] - 1);
        out[i] = s[i] / (f * f);
    }
    return out;
}

/// Compatibility degree of a pair of unbiased ball-model effects with Bloch
/// blocks a, b: gamma = 2 / (||a+b||_2 + ||a-b||_2), clipped to 1.
template <class S>
double euclidean_pair_gamma(const Gpt<S>& g, const Vec<double>& a, const Vec<double>& b) {
    if (!g.cs || g.cs->bar_norm != BarNorm::L2 || g.polyhedral())
        throw NonPolyhedralModel("euclidean_pair_gamma: needs a ball model");
    if (a.size() != b.size() || static_cast<int>(a.size()) != g.dim - 1)
        throw DimensionMismatch("euclidean_pair_gamma");
    auto l2 = p_norm_fn(BarNorm::L2);
    if (l2(a) > 1 + 1e-12 || l2(b) > 1 + 1e-12)
        throw Error("euclidean_pair_gamma: Bloch blocks must have norm <= 1");
    double denom = l2(add(a, b)) + l2(sub(a, b));
    if (denom < 1e-15) return 1.0;
    return std::min(1.0, 2.0 / denom);
}

/// Grid sample of a single family's noise region, with its diagonal degree.
struct RegionSample {
    int grid = 0;
    std::vector<Vec<double>> points;
    std::vector<bool> member;
    double gamma_diag = 0;
};

template <class S>
RegionSample sample_region(const Gpt<S>& g, const MeasurementFamily<S>& fam, int grid,
                           const S& tol = scalar_traits<S>::default_tol()) {
    if (grid < 2) throw Error("sample_region: need at least two grid points per axis");
    RegionSample out;
    out.grid = grid;
    std::vector<int> steps(fam.size(), grid);
    for_each_multi_index(steps, [&](const std::vector<int>& idx) {
        Vec<double> sd(idx.size());
        Vec<S> s(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            sd[i] = static_cast<double>(idx[i]) / (grid - 1);
            s[i] = scalar_traits<S>::from_double(sd[i]);
        }
        out.points.push_back(sd);
        out.member.push_back(region_membership(g, fam, s, tol));
    });
    out.gamma_diag = gamma_of_family(g, fam, 1e-6, 40, tol);
    return out;
}

/// Closed-form lower bound on the compatibility degree for k outcomes.
template <class S>
double gamma_model_lower_bound(const Gpt<S>& g, const std::vector<int>& k) {
    const int gg = static_cast<int>(k.size());
    double lower = 1.0 / gg;  // the simplex {sum s_i <= 1} is always inside
    bool dichotomic = true;
    int kmax = 2;
    for (int ki : k) {
        dichotomic = dichotomic && ki == 2;
        kmax = std::max(kmax, ki);
    }
    const int n = g.dim - 1;
    if (dichotomic) {
        if (g.name.rfind("classical", 0) == 0) return 1.0;
        lower = std::max(lower, 1.0 / std::min(gg, g.dim));
        if (g.cs) {
            lower = std::max(lower, 1.0 / std::min(gg, n));
            if (g.cs->bar_norm == BarNorm::L1) {
                lower = std::max(lower, gamma_crosspolytope(gg));
                lower = std::max(lower, 1.0 / one_summing("l1", n));
            }
            if (g.cs->bar_norm == BarNorm::L2)
                lower = std::max(lower, 1.0 / std::sqrt(static_cast<double>(gg)));
        }
    } else {
        // Scale the dichotomic bound through the symmetrization embedding.
        int gbar = 0, worst = 1;
        for (int ki : k) {
            gbar += ki - 1;
            worst = std::max(worst, (ki - 1) * (ki - 1));
        }
        std::vector<int> dich(gbar, 2);
        double base = gamma_model_lower_bound(g, dich);
        lower = std::max(lower, base / worst);
    }
    return lower;
}

/// Analytic upper bounds where the closed forms pin the degree.
template <class S>
double gamma_model_upper_bound(const Gpt<S>& g, const std::vector<int>& k) {
    bool dichotomic = true;
    for (int ki : k) dichotomic = dichotomic && ki == 2;
    const int gg = static_cast<int>(k.size());
    const int n = g.dim - 1;
    double upper = 1.0;
    if (dichotomic && g.cs) {
        // Carried upper-bound constants for centrally symmetric models.
        if (gg >= 2 && n >= 2) upper = std::min(upper, 1.0 / std::sqrt(2.0));
        if (n >= gg) upper = std::min(upper, std::sqrt(2.0 / gg));
        if (g.cs->bar_norm == BarNorm::Linf) upper = std::min(upper, 1.0 / std::min(gg, n));
        if (g.cs->bar_norm == BarNorm::L2) {
            if (gg <= n)
                upper = 1.0 / std::sqrt(static_cast<double>(gg));
            else
                upper = std::min(upper, 1.0 / std::sqrt(static_cast<double>(n)));
        }
        if (g.cs->bar_norm == BarNorm::L1 && n >= (1 << (gg - 1)) && gg >= 2)
            upper = gamma_crosspolytope(gg);
    }
    return upper;
}

/*
 * Interval estimate of the compatibility degree gamma(k; V, V^+): the lower
 * end is the best applicable closed form, the upper end the smallest gamma(f)
 * met by adversarial search (tuples of extreme effects first, then random
 * restarts).  The interval may be loose.
 */
template <class S>
Interval gamma_model(const Gpt<S>& g, const std::vector<int>& k, int budget, Rng& rng,
                     const S& tol = scalar_traits<S>::default_tol()) {
    const int gg = static_cast<int>(k.size());
    Interval out;
    out.lower = gamma_model_lower_bound(g, k);
    out.upper = gamma_model_upper_bound(g, k);
    if (!g.polyhedral()) return out;  // ball models: closed-form bounds only

    bool dichotomic = true;
    for (int ki : k) dichotomic = dichotomic && ki == 2;

    auto consider = [&](const MeasurementFamily<S>& fam) {
        double gamma;
        if (dichotomic) {
            double rho = scalar_traits<S>::to_double(rho_norm(g, effect_tensor(g, fam), tol));
            gamma = rho <= 1.0 ? 1.0 : 1.0 / rho;
        } else {
            gamma = gamma_of_family(g, fam, 1e-7, 40, tol);
        }
        out.upper = std::min(out.upper, gamma);
    };

    int used = 0;
    if (dichotomic) {
        auto ext = extreme_effects(g);
        // Unbiased sharp effects first; tuples are enumerated with repetition.
        if (!ext.empty() && gg <= 4) {
            const int base = static_cast<int>(ext.size());
            long count = 1;
            for (int i = 0; i < gg; ++i) count *= base;
            for (long t = 0; t < count && used < budget; ++t) {
                long v = t;
                MeasurementFamily<S> fam;
                bool increasing = true;
                std::vector<int> chosen;
                for (int i = 0; i < gg; ++i) {
                    chosen.push_back(static_cast<int>(v % base));
                    v /= base;
                }
                for (int i = 0; i + 1 < gg; ++i) increasing &= chosen[i] <= chosen[i + 1];
                if (!increasing) continue;  // order is irrelevant to gamma
                for (int i = 0; i < gg; ++i) {
                    Measurement<S> m;
                    m.effects = {ext[chosen[i]], sub(g.unit, ext[chosen[i]])};
                    fam.measurements.push_back(std::move(m));
                }
                consider(fam);
                ++used;
            }
        }
    }
    while (used < budget) {
        consider(random_family(g, k, rng));
        ++used;
    }
    if (out.upper < out.lower) {
        // Bounds disagree beyond tolerance only on a numerical failure;
        // collapse conservatively onto the closed form.
        if (out.lower - out.upper > 1e-6)
            throw LpNumericalFailure("gamma_model: search value below the proven lower bound");
        out.upper = out.lower;
    }
    return out;
}

}  // namespace gptc
