#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "gptc/compat.hpp"
#include "gptc/gpt.hpp"
#include "gptc/lp.hpp"
#include "gptc/outcome_space.hpp"
#include "gptc/tensor_norms.hpp"

namespace gptc {

/// An incompatibility witness: g vectors in V together with (once certified)
/// a state z0 placing (z0, z) in the GPT diamond.
template <class S>
struct Witness {
    std::vector<Vec<S>> z;
    std::optional<Vec<S>> z0;

    int g() const { return static_cast<int>(z.size()); }
};

/// Search for a certifying state: z0 in K with z0 + sum_i eps_i z_i in V^+
/// for every sign vector.  Returns the state or nothing.
template <class S>
std::optional<Vec<S>> is_witness(const Gpt<S>& g, const std::vector<Vec<S>>& z,
                                 const S& tol = scalar_traits<S>::default_tol()) {
    const int gg = static_cast<int>(z.size());
    if (gg > 20) throw SizeLimitExceeded("is_witness: too many blocks (> 20)");
    const auto& gens = g.state_generators();
    const auto& facets = g.dual_generators();
    const int m = static_cast<int>(gens.size());
    LpProblem<S> p;
    p.add_vars(m, VarSign::NonNeg);
    {
        Vec<S> row(m);
        for (int j = 0; j < m; ++j) row[j] = dot(g.unit, gens[j]);
        p.add_row(std::move(row), Rel::Eq, S(1));
    }
    for_each_sign_vector(gg, [&](const std::vector<int>& eps) {
        Vec<S> shift(g.dim, S{});
        for (int i = 0; i < gg; ++i) axpy(S(eps[i]), z[i], shift);
        for (const auto& h : facets) {
            Vec<S> row(m);
            for (int j = 0; j < m; ++j) row[j] = dot(h, gens[j]);
            p.add_row(std::move(row), Rel::Ge, -dot(h, shift));
        }
    });
    auto cert = lp_feasible(p, tol);
    if (!cert.feasible) return std::nullopt;
    Vec<S> z0(g.dim, S{});
    for (int j = 0; j < m; ++j) axpy(cert.x[j], gens[j], z0);
    return z0;
}

/// Strictness: the witness can actually detect something, i.e. its
/// l1-projective norm sum ||z_i||_V exceeds one.
template <class S>
bool is_strict(const Gpt<S>& g, const std::vector<Vec<S>>& z,
               const S& tol = scalar_traits<S>::default_tol()) {
    if (!is_witness(g, z, tol)) throw Error("is_strict: not a witness");
    S total{};
    for (const auto& zi : z) total += base_norm(g, zi, tol);
    return total > S(1) + tol;
}

/// Pairing <z, phi-bar^(f)> = sum_i <2 f_i - 1, z_i>; a value above one
/// certifies incompatibility when z is a witness.
template <class S>
S evaluate_witness(const std::vector<Vec<S>>& z, const EffectTensor<S>& t) {
    auto blocks = t.dichotomic_blocks();
    if (blocks.size() != z.size()) throw DimensionMismatch("evaluate_witness: block count");
    S r{};
    for (std::size_t i = 0; i < z.size(); ++i) r += dot(blocks[i], z[i]);
    return r;
}

/// Dual norm of the rho crossnorm: the witness set is exactly its unit ball.
/// ||z||_rho* = min{1(y0) : y0 + sum eps_i z_i in V^+ for all eps}.
template <class S>
S rho_star_norm(const Gpt<S>& g, const std::vector<Vec<S>>& z,
                const S& tol = scalar_traits<S>::default_tol()) {
    const int gg = static_cast<int>(z.size());
    if (gg > 20) throw SizeLimitExceeded("rho_star_norm: too many blocks");
    const auto& gens = g.state_generators();
    const auto& facets = g.dual_generators();
    const int m = static_cast<int>(gens.size());
    LpProblem<S> p;
    p.add_vars(m, VarSign::NonNeg);
    for_each_sign_vector(gg, [&](const std::vector<int>& eps) {
        Vec<S> shift(g.dim, S{});
        for (int i = 0; i < gg; ++i) axpy(S(eps[i]), z[i], shift);
        for (const auto& h : facets) {
            Vec<S> row(m);
            for (int j = 0; j < m; ++j) row[j] = dot(h, gens[j]);
            p.add_row(std::move(row), Rel::Ge, -dot(h, shift));
        }
    });
    p.objective.assign(m, S{});
    for (int j = 0; j < m; ++j) p.objective[j] = -dot(g.unit, gens[j]);
    auto r = lp_maximize(p, tol);
    if (r.status != LpStatus::Optimal) throw LpNumericalFailure("rho_star_norm: LP failed");
    return -r.value;
}

/*
 * Witness extraction from the Farkas certificate of the joint-measurement LP
 * for a dichotomic family.  The multipliers per marginal block give vectors
 * whose half-sums form a diamond point; normalizing by the unit evaluated at
 * the barycenter (strictly positive for a genuine certificate) yields a
 * witness with evaluate > 1.  Degenerate certificates return nothing.
 */
template <class S>
std::optional<Witness<S>> witness_from_joint_farkas(const Gpt<S>& g,
                                                    const MeasurementFamily<S>& fam,
                                                    const FarkasCertificate<S>& cert) {
    if (!fam.dichotomic()) throw Error("witness_from_joint_farkas: dichotomic families only");
    const int gg = fam.size();
    const int d = g.dim;
    if (cert.y.size() != static_cast<std::size_t>((gg + 1) * d))
        throw DimensionMismatch("witness_from_joint_farkas: certificate row count");
    std::vector<Vec<S>> v(gg);
    Vec<S> v0(d);
    for (int i = 0; i < gg; ++i)
        v[i] = negated(Vec<S>(cert.y.begin() + i * d, cert.y.begin() + (i + 1) * d));
    for (int a = 0; a < d; ++a) v0[a] = -cert.y[static_cast<std::size_t>(gg) * d + a];

    Vec<S> z0p = v0;
    for (int i = 0; i < gg; ++i) axpy(S(1) / S(2), v[i], z0p);
    S den = dot(g.unit, z0p);
    S floor = scalar_traits<S>::exact ? S{} : S(1e-12);
    if (!(den > floor)) return std::nullopt;
    Witness<S> w;
    Vec<S> z0 = scaled(z0p, S(1) / den);
    for (int i = 0; i < gg; ++i) w.z.push_back(scaled(v[i], S(-1) / (S(2) * den)));
    w.z0 = std::move(z0);
    return w;
}

/// Convenience: decide compatibility and, on failure, extract the witness.
template <class S>
std::optional<Witness<S>> extract_witness(const Gpt<S>& g, const MeasurementFamily<S>& fam,
                                          const S& tol = scalar_traits<S>::default_tol()) {
    auto res = is_compatible(g, fam, tol);
    if (res.compatible || !res.certificate) return std::nullopt;
    return witness_from_joint_farkas(g, fam, *res.certificate);
}

/*
 * Random element of the witness set with a certificate attached: a random
 * state and random directions scaled until the diamond constraints bind.
 * Works for polyhedral cones (facet ratios) and for the Euclidean ball
 * models (quadratic fit), so the sampled routes need no LP.
 */
template <class S>
Witness<S> sample_witness(const Gpt<S>& g, int gg, Rng& rng, bool boundary = false) {
    Witness<S> w;
    Vec<S> z0;
    std::vector<Vec<S>> dirs(gg);
    if (g.polyhedral()) {
        z0 = random_state(g, rng);
        for (auto& r : dirs) {
            r = zeros<S>(g.dim);
            for (int a = 0; a < g.dim; ++a)
                r[a] = scalar_traits<S>::from_double(rng.uniform(-1, 1));
        }
        // Largest t with z0 + t * sum eps r in V^+ for all eps.
        double tmax = 1e30;
        for_each_sign_vector(gg, [&](const std::vector<int>& eps) {
            Vec<S> shift(g.dim, S{});
            for (int i = 0; i < gg; ++i) axpy(S(eps[i]), dirs[i], shift);
            for (const auto& h : g.dual_generators()) {
                double num = scalar_traits<S>::to_double(dot(h, z0));
                double den = scalar_traits<S>::to_double(dot(h, shift));
                if (den < -1e-15) tmax = std::min(tmax, num / -den);
            }
        });
        if (tmax > 1e29) tmax = 1.0;
        S t = scalar_traits<S>::from_double(boundary ? tmax : tmax * rng.uniform01());
        for (const auto& r : dirs) w.z.push_back(scaled(r, t));
        w.z0 = z0;
        return w;
    }
    if (!g.cs || g.cs->bar_norm != BarNorm::L2)
        throw NonPolyhedralModel("sample_witness: unsupported model");
    // Ball model: state (1, xbar) with ||xbar||_2 <= 1; quadratic fit in t.
    const int n = g.dim - 1;
    Vec<double> xbar(n);
    double r2 = 0;
    for (auto& v : xbar) {
        v = rng.uniform(-1, 1);
        r2 += v * v;
    }
    double shrink = rng.uniform01() / std::max(1.0, std::sqrt(r2));
    for (auto& v : xbar) v *= shrink;
    std::vector<Vec<double>> dbar(gg, Vec<double>(n));
    std::vector<double> dhead(gg);
    for (int i = 0; i < gg; ++i) {
        dhead[i] = rng.uniform(-0.2, 0.2);
        for (auto& v : dbar[i]) v = rng.uniform(-1, 1);
    }
    double tmax = 1e30;
    for_each_sign_vector(gg, [&](const std::vector<int>& eps) {
        // ||xbar + t b||^2 <= (1 + t b0)^2 with b = sum eps dbar, b0 = sum eps dhead.
        Vec<double> b(n, 0.0);
        double b0 = 0;
        for (int i = 0; i < gg; ++i) {
            axpy(static_cast<double>(eps[i]), dbar[i], b);
            b0 += eps[i] * dhead[i];
        }
        double qa = dot(b, b) - b0 * b0;
        double qb = 2.0 * (dot(xbar, b) - b0);
        double qc = dot(xbar, xbar) - 1.0;  // <= 0
        double root;
        if (std::fabs(qa) < 1e-15) {
            root = qb > 1e-15 ? -qc / qb : 1e30;
        } else if (qa > 0) {
            double disc = qb * qb - 4 * qa * qc;
            root = (-qb + std::sqrt(std::max(0.0, disc))) / (2 * qa);
        } else {
            // Concave parabola opening down: feasible beyond the larger root
            // only up to the smaller one; take the positive crossing if any.
            double disc = qb * qb - 4 * qa * qc;
            if (disc < 0) return;  // never violated
            double r1 = (-qb + std::sqrt(disc)) / (2 * qa);
            double r2_ = (-qb - std::sqrt(disc)) / (2 * qa);
            double lo = std::min(r1, r2_), hi = std::max(r1, r2_);
            root = lo > 0 ? lo : (hi > 0 ? hi : 1e30);
        }
        if (root >= 0) tmax = std::min(tmax, root);
    });
    if (tmax > 1e29) tmax = 1.0;
    double t = boundary ? tmax : tmax * rng.uniform01();
    Vec<S> z0v(g.dim);
    z0v[0] = S(1);
    for (int a = 0; a < n; ++a) z0v[a + 1] = scalar_traits<S>::from_double(xbar[a]);
    for (int i = 0; i < gg; ++i) {
        Vec<S> zi(g.dim);
        zi[0] = scalar_traits<S>::from_double(t * dhead[i]);
        for (int a = 0; a < n; ++a) zi[a + 1] = scalar_traits<S>::from_double(t * dbar[i][a]);
        w.z.push_back(std::move(zi));
    }
    w.z0 = z0v;
    return w;
}

struct BlindRegionResult {
    bool member = false;
    bool exact = false;           // verdict comes from a closed form
    bool violator_found = false;  // a sampled witness certifies non-membership
};

/*
 * Blind region: noise vectors s that blind every witness, i.e.
 * sum_i s_i ||z_i||_V <= 1 on the whole witness set.  It coincides with the
 * compatibility region, so closed forms settle the standard models exactly;
 * otherwise sampled witnesses either refute membership or support it.
 */
template <class S>
BlindRegionResult blind_region_member(const Gpt<S>& g, const Vec<double>& s, int budget,
                                      Rng& rng) {
    const int gg = static_cast<int>(s.size());
    for (double v : s)
        if (v < 0 || v > 1) throw Error("blind_region_member: s outside [0,1]^g");
    BlindRegionResult out;
    double total = 0;
    for (double v : s) total += v;

    if (g.name.rfind("classical", 0) == 0) {
        out.member = true;
        out.exact = true;
        return out;
    }
    if (g.cs && g.cs->bar_norm == BarNorm::Linf) {
        out.member = region_hypercube(gg, g.dim - 1, s);
        out.exact = true;
    } else if (g.cs && g.cs->bar_norm == BarNorm::L2) {
        auto br = region_ball(gg, g.dim - 1, s);
        if (br.exact || br.member) {
            // Exact region for g <= n; for g > n membership in QC still
            // certifies, only exclusion stays open.
            out.member = br.member;
            out.exact = true;
        }
    } else if (total <= 1.0 + 1e-12) {
        out.member = true;  // the probability simplex always blinds
        out.exact = true;
    }

    // Sampling route, reported alongside (and decisive when no closed form).
    bool refuted = false;
    if (g.cs && g.cs->bar_norm != BarNorm::CustomPolytope) {
        // Restricted witnesses (0, zbar) normalized in the reduced injective
        // norm are always in the witness set; axis-aligned and Walsh-type
        // tuples adapted to s cover the extremal directions.
        NormFn nf = p_norm_fn(g.cs->bar_norm);
        const int n = g.dim - 1;
        auto consider = [&](const std::vector<Vec<double>>& zbar) {
            TensorElement<double> te{zbar};
            double en = injective_norm_l1(te, nf);
            if (en < 1e-12) return;
            double acc = 0;
            for (int i = 0; i < gg; ++i) acc += s[i] * nf(zbar[i]) / en;
            if (acc > 1.0 + 1e-9) refuted = true;
        };
        std::vector<int> order(gg);
        for (int i = 0; i < gg; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return s[a] > s[b]; });
        for (int m = 1; m <= std::min({gg, n, 12}) && !refuted; ++m) {
            std::vector<Vec<double>> zbar(gg, zeros<double>(n));
            for (int t = 0; t < m; ++t) zbar[order[t]][t] = 1.0;
            consider(zbar);
        }
        if (!refuted && g.cs->bar_norm == BarNorm::L1 && gg <= 12 &&
            n >= (1 << (gg - 1))) {
            std::vector<Vec<double>> zbar(gg, zeros<double>(n));
            int col = 0;
            for_each_sign_vector(gg - 1, [&](const std::vector<int>& eps) {
                zbar[0][col] = 1.0;
                for (int i = 1; i < gg; ++i) zbar[i][col] = eps[i - 1];
                ++col;
            });
            consider(zbar);
        }
    }
    for (int t = 0; t < budget && !refuted; ++t) {
        auto w = sample_witness(g, gg, rng, /*boundary=*/true);
        double acc = 0;
        for (int i = 0; i < gg; ++i)
            acc += s[i] * scalar_traits<S>::to_double(base_norm(g, w.z[i]));
        if (acc > 1.0 + 1e-9) refuted = true;
    }
    out.violator_found = refuted;
    if (!out.exact) out.member = !refuted;
    return out;
}

}  // namespace gptc
