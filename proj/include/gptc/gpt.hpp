#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gptc/cone.hpp"
#include "gptc/error.hpp"
#include "gptc/linalg.hpp"

namespace gptc {

enum class BarNorm { L1, L2, Linf, CustomPolytope };

inline std::string to_string(BarNorm n) {
    switch (n) {
        case BarNorm::L1: return "l1";
        case BarNorm::L2: return "l2";
        case BarNorm::Linf: return "linf";
        case BarNorm::CustomPolytope: return "custom-polytope";
    }
    return "?";
}

/// Centrally symmetric structure: V = R v0 (+) Vbar with positivity
/// ||xbar|| <= x0 and unit 1(x) = x0.  v0 is pinned to coordinate 0.
struct CsStructure {
    int v0_index = 0;
    BarNorm bar_norm = BarNorm::Linf;
};

/*
 * A GPT triple (V, V^+, 1).  The state cone is polyhedral except for the
 * Euclidean ball models, which carry only the centrally symmetric structure;
 * LP-based operations reject those with NonPolyhedralModel and the
 * closed-form paths serve them instead.
 */
template <class S>
struct Gpt {
    int dim = 0;
    std::optional<PolyCone<S>> cone;  // V^+; generators + facets
    Vec<S> unit;                      // order unit in A = V^*
    std::optional<CsStructure> cs;
    std::string name;

    bool polyhedral() const { return cone.has_value(); }

    const PolyCone<S>& require_cone() const {
        if (!cone) throw NonPolyhedralModel(name + ": operation needs a polyhedral cone");
        return *cone;
    }

    /// Generators of A^+ = (V^+)^*: the facet covectors of V^+.
    const std::vector<Vec<S>>& dual_generators() const {
        const auto& c = require_cone();
        if (!c.has_facets()) throw Error(name + ": cone carries no H-description");
        return c.facets;
    }

    /// Generators of V^+.
    const std::vector<Vec<S>>& state_generators() const { return require_cone().generators; }
};

/// Classical d-level system: simplex state space, self-dual orthant cone.
template <class S>
Gpt<S> make_classical(int d) {
    if (d < 1) throw DegenerateCone("make_classical: d must be >= 1");
    Gpt<S> g;
    g.dim = d;
    g.cone = orthant<S>(d);
    g.unit = Vec<S>(d, S(1));
    g.name = "classical(" + std::to_string(d) + ")";
    return g;
}

/// Hypercube state space (unit ball of l_inf^n).
template <class S>
Gpt<S> make_hypercube(int n) {
    Gpt<S> g;
    g.dim = n + 1;
    g.cone = linf_ball_cone<S>(n);
    g.unit = unit_vec<S>(n + 1, 0);
    g.cs = CsStructure{0, BarNorm::Linf};
    g.name = "hypercube(" + std::to_string(n) + ")";
    return g;
}

/// Cross-polytope state space (unit ball of l_1^n).
template <class S>
Gpt<S> make_crosspolytope(int n) {
    Gpt<S> g;
    g.dim = n + 1;
    g.cone = l1_ball_cone<S>(n);
    g.unit = unit_vec<S>(n + 1, 0);
    g.cs = CsStructure{0, BarNorm::L1};
    g.name = "crosspolytope(" + std::to_string(n) + ")";
    return g;
}

/// Euclidean ball state space (unit ball of l_2^n); no polyhedral cone,
/// membership is norm-based.  n = 3 is the Bloch ball.
template <class S>
Gpt<S> make_ball(int n) {
    if (n < 1) throw DegenerateCone("make_ball: n must be >= 1");
    Gpt<S> g;
    g.dim = n + 1;
    g.unit = unit_vec<S>(n + 1, 0);
    g.cs = CsStructure{0, BarNorm::L2};
    g.name = "ball(" + std::to_string(n) + ")";
    return g;
}

/// Custom model from a validated cone and an order unit that must be
/// strictly positive on every generator.
template <class S>
Gpt<S> make_custom(PolyCone<S> cone, Vec<S> unit,
                   const S& tol = scalar_traits<S>::default_tol()) {
    cone.validate(tol);
    if (static_cast<int>(unit.size()) != cone.dim)
        throw DimensionMismatch("make_custom: unit dimension");
    for (const auto& g : cone.generators)
        if (dot(unit, g) <= tol)
            throw Error("make_custom: unit is not strictly positive on the cone");
    Gpt<S> g;
    g.dim = cone.dim;
    g.cone = std::move(cone);
    g.unit = std::move(unit);
    g.name = "custom(" + std::to_string(g.dim) + ")";
    return g;
}

namespace detail {

template <class S>
S p_norm(const Vec<S>& v, BarNorm n) {
    switch (n) {
        case BarNorm::L1: return one_norm(v);
        case BarNorm::Linf: return inf_norm(v);
        case BarNorm::L2: {
            double s = 0;
            for (const auto& x : v) {
                double d = scalar_traits<S>::to_double(x);
                s += d * d;
            }
            return scalar_traits<S>::from_double(std::sqrt(s));
        }
        case BarNorm::CustomPolytope:
            throw Error("bar norm: custom polytope has no direct formula here");
    }
    return S{};
}

}  // namespace detail

/// Norm on Vbar for a centrally symmetric model; for custom polytopes it is
/// min{t : (t, xbar) in V^+}, read off the facet inequalities.
template <class S>
S vbar_norm(const Gpt<S>& g, const Vec<S>& xbar) {
    if (!g.cs) throw Error(g.name + ": not centrally symmetric");
    if (g.cs->bar_norm != BarNorm::CustomPolytope)
        return detail::p_norm(xbar, g.cs->bar_norm);
    const auto& facets = g.dual_generators();
    S best{};
    for (const auto& h : facets) {
        S tail{};
        for (std::size_t i = 1; i < h.size(); ++i) tail += h[i] * xbar[i - 1];
        S bound = -tail / h[0];
        if (bound > best) best = bound;
    }
    return best;
}

/// Dual norm on Abar: sup over Vbar-ball vertices (cone generators).
template <class S>
S abar_norm(const Gpt<S>& g, const Vec<S>& abar) {
    if (!g.cs) throw Error(g.name + ": not centrally symmetric");
    switch (g.cs->bar_norm) {
        case BarNorm::L1: return inf_norm(abar);
        case BarNorm::Linf: return one_norm(abar);
        case BarNorm::L2: return detail::p_norm(abar, BarNorm::L2);
        case BarNorm::CustomPolytope: {
            S best{};
            for (const auto& v : g.state_generators()) {
                S val{};
                for (std::size_t i = 1; i < v.size(); ++i) val += abar[i - 1] * v[i];
                val = scalar_traits<S>::abs(val / v[0]);
                if (val > best) best = val;
            }
            return best;
        }
    }
    return S{};
}

/// Base norm ||x||_V = inf{1(y) + 1(z) : x = y - z, y,z in V^+}, by LP for
/// polyhedral models and max(|x0|, ||xbar||) for centrally symmetric ones.
template <class S>
S base_norm(const Gpt<S>& g, const Vec<S>& x,
            const S& tol = scalar_traits<S>::default_tol()) {
    if (static_cast<int>(x.size()) != g.dim) throw DimensionMismatch("base_norm");
    if (g.cs) {
        Vec<S> xbar(x.begin() + 1, x.end());
        S head = scalar_traits<S>::abs(x[0]);
        S tail = vbar_norm(g, xbar);
        return head > tail ? head : tail;
    }
    const auto& gens = g.state_generators();
    const int m = static_cast<int>(gens.size());
    LpProblem<S> p;
    p.add_vars(2 * m, VarSign::NonNeg);
    for (int i = 0; i < g.dim; ++i) {
        Vec<S> row(2 * m);
        for (int j = 0; j < m; ++j) {
            row[j] = gens[j][i];
            row[m + j] = -gens[j][i];
        }
        p.add_row(std::move(row), Rel::Eq, x[i]);
    }
    p.objective.assign(2 * m, S{});
    for (int j = 0; j < m; ++j) {
        S w = dot(g.unit, gens[j]);
        p.objective[j] = -w;
        p.objective[m + j] = -w;
    }
    auto r = lp_maximize(p, tol);
    if (r.status != LpStatus::Optimal) throw LpNumericalFailure("base_norm: LP failed");
    return -r.value;
}

/// Order unit norm ||a||_A = inf{t : -t1 <= a <= t1}, by LP against the
/// state generators, or |a0| + ||abar|| for centrally symmetric models.
template <class S>
S order_unit_norm(const Gpt<S>& g, const Vec<S>& a,
                  const S& tol = scalar_traits<S>::default_tol()) {
    if (static_cast<int>(a.size()) != g.dim) throw DimensionMismatch("order_unit_norm");
    if (g.cs) {
        Vec<S> abar(a.begin() + 1, a.end());
        return scalar_traits<S>::abs(a[0]) + abar_norm(g, abar);
    }
    const auto& gens = g.state_generators();
    LpProblem<S> p;
    p.add_var(VarSign::NonNeg);
    for (const auto& v : gens) {
        S uv = dot(g.unit, v), av = dot(a, v);
        p.add_row({uv}, Rel::Ge, av);   // <t1 - a, v> >= 0
        p.add_row({uv}, Rel::Ge, -av);  // <t1 + a, v> >= 0
    }
    p.objective = {S(-1)};
    auto r = lp_maximize(p, tol);
    if (r.status != LpStatus::Optimal) throw LpNumericalFailure("order_unit_norm: LP failed");
    return -r.value;
}

/// Tuple of effect covectors with a fixed outcome count.
template <class S>
struct Measurement {
    std::vector<Vec<S>> effects;

    int outcomes() const { return static_cast<int>(effects.size()); }
};

template <class S>
struct MeasurementFamily {
    std::vector<Measurement<S>> measurements;

    int size() const { return static_cast<int>(measurements.size()); }

    std::vector<int> outcome_vector() const {
        std::vector<int> k;
        k.reserve(measurements.size());
        for (const auto& m : measurements) k.push_back(m.outcomes());
        return k;
    }

    bool dichotomic() const {
        for (const auto& m : measurements)
            if (m.outcomes() != 2) return false;
        return true;
    }
};

template <class S>
bool in_dual_cone(const Gpt<S>& g, const Vec<S>& a, const S& tol) {
    if (g.polyhedral()) {
        for (const auto& v : g.state_generators())
            if (dot(a, v) < -tol) return false;
        return true;
    }
    // Centrally symmetric without a cone: ||abar|| <= a0.
    Vec<S> abar(a.begin() + 1, a.end());
    return abar_norm(g, abar) <= a[0] + tol;
}

/// Effect: f in A^+ and 1 - f in A^+.
template <class S>
bool validate_effect(const Gpt<S>& g, const Vec<S>& f,
                     const S& tol = scalar_traits<S>::default_tol()) {
    if (static_cast<int>(f.size()) != g.dim) throw DimensionMismatch("validate_effect");
    return in_dual_cone(g, f, tol) && in_dual_cone(g, sub(g.unit, f), tol);
}

/// Measurement: k >= 2 effects in A^+ summing to the order unit.
template <class S>
bool validate_measurement(const Gpt<S>& g, const Measurement<S>& m,
                          const S& tol = scalar_traits<S>::default_tol()) {
    if (m.outcomes() < 2) return false;
    Vec<S> total(g.dim, S{});
    for (const auto& f : m.effects) {
        if (static_cast<int>(f.size()) != g.dim)
            throw DimensionMismatch("validate_measurement");
        if (!in_dual_cone(g, f, tol)) return false;
        total = add(total, f);
    }
    return inf_norm(sub(total, g.unit)) <= tol;
}

template <class S>
bool validate_family(const Gpt<S>& g, const MeasurementFamily<S>& fam,
                     const S& tol = scalar_traits<S>::default_tol()) {
    if (fam.size() == 0) return false;
    for (const auto& m : fam.measurements)
        if (!validate_measurement(g, m, tol)) return false;
    return true;
}

/// White noise: f_j -> s f_j + (1-s) 1/k.
template <class S>
Measurement<S> add_noise(const Gpt<S>& g, const Measurement<S>& m, const S& s) {
    if (s < S{} || s > S(1)) throw Error("add_noise: noise parameter outside [0,1]");
    const S k = S(m.outcomes());
    Measurement<S> out;
    out.effects.reserve(m.effects.size());
    for (const auto& f : m.effects) {
        Vec<S> e = scaled(f, s);
        axpy((S(1) - s) / k, g.unit, e);
        out.effects.push_back(std::move(e));
    }
    return out;
}

template <class S>
MeasurementFamily<S> add_noise(const Gpt<S>& g, const MeasurementFamily<S>& fam,
                               const Vec<S>& s) {
    if (s.size() != static_cast<std::size_t>(fam.size()))
        throw DimensionMismatch("add_noise: noise vector length");
    MeasurementFamily<S> out;
    out.measurements.reserve(fam.measurements.size());
    for (int i = 0; i < fam.size(); ++i)
        out.measurements.push_back(add_noise(g, fam.measurements[i], s[i]));
    return out;
}

template <class S>
MeasurementFamily<S> add_uniform_noise(const Gpt<S>& g, const MeasurementFamily<S>& fam,
                                       const S& s) {
    return add_noise(g, fam, Vec<S>(fam.size(), s));
}

/// The k-outcome trivial measurement (1/k, ..., 1/k).
template <class S>
Measurement<S> trivial_measurement(const Gpt<S>& g, int k) {
    Measurement<S> m;
    for (int j = 0; j < k; ++j) m.effects.push_back(scaled(g.unit, S(1) / S(k)));
    return m;
}

}  // namespace gptc
