#pragma once

#include <vector>

#include "gptc/gpt.hpp"
#include "gptc/random.hpp"

namespace gptc {

/// Random state: convex combination of normalized cone generators.
template <class S>
Vec<S> random_state(const Gpt<S>& g, Rng& rng) {
    const auto& gens = g.state_generators();
    Vec<S> x(g.dim, S{});
    S total{};
    Vec<S> weights;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        S w = scalar_traits<S>::from_double(rng.uniform01());
        weights.push_back(w);
        total += w;
    }
    for (std::size_t i = 0; i < gens.size(); ++i) {
        S coeff = weights[i] / total / dot(g.unit, gens[i]);
        axpy(coeff, gens[i], x);
    }
    return x;
}

/// Random element of A^+ as a nonnegative combination of dual generators.
template <class S>
Vec<S> random_positive_functional(const Gpt<S>& g, Rng& rng) {
    Vec<S> a(g.dim, S{});
    for (const auto& h : g.dual_generators())
        if (rng.below(2) == 0)
            axpy(scalar_traits<S>::from_double(rng.uniform01()), h, a);
    return a;
}

/// Largest t with t*a <= bound in the dual order (both in A^+).
template <class S>
S fit_below(const Gpt<S>& g, const Vec<S>& a, const Vec<S>& bound) {
    bool constrained = false;
    S best{};
    for (const auto& v : g.state_generators()) {
        S av = dot(a, v);
        if (av <= S{}) continue;
        S t = dot(bound, v) / av;
        if (!constrained || t < best) {
            best = t;
            constrained = true;
        }
    }
    return constrained ? best : S{};
}

/// Random effect: a random positive functional scaled into [0, 1].
template <class S>
Vec<S> random_effect(const Gpt<S>& g, Rng& rng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Vec<S> a = random_positive_functional(g, rng);
        S t = fit_below(g, a, g.unit);
        if (t <= S{}) continue;
        return scaled(a, t * scalar_traits<S>::from_double(rng.uniform01()));
    }
    return scaled(g.unit, scalar_traits<S>::from_double(0.5));
}

/// Random k-outcome measurement: effects are carved out of the remaining
/// budget one by one, so they sum to the order unit exactly.
template <class S>
Measurement<S> random_measurement(const Gpt<S>& g, int k, Rng& rng) {
    Measurement<S> m;
    Vec<S> remaining = g.unit;
    for (int j = 0; j + 1 < k; ++j) {
        Vec<S> a = random_positive_functional(g, rng);
        S t = fit_below(g, a, remaining);
        Vec<S> f = scaled(a, t * scalar_traits<S>::from_double(rng.uniform01()));
        remaining = sub(remaining, f);
        m.effects.push_back(std::move(f));
    }
    m.effects.push_back(remaining);
    return m;
}

template <class S>
MeasurementFamily<S> random_family(const Gpt<S>& g, const std::vector<int>& k, Rng& rng) {
    MeasurementFamily<S> fam;
    for (int ki : k) fam.measurements.push_back(random_measurement(g, ki, rng));
    return fam;
}

/// Vertices of the effect order interval [0, 1] for the standard models;
/// empty when no closed-form vertex list is known.
template <class S>
std::vector<Vec<S>> extreme_effects(const Gpt<S>& g, std::size_t cap = 4096) {
    std::vector<Vec<S>> out;
    const S half = S(1) / S(2);
    if (g.name.rfind("classical", 0) == 0) {
        if ((std::size_t{1} << g.dim) > cap) return out;
        for (std::size_t mask = 0; mask < (std::size_t{1} << g.dim); ++mask) {
            Vec<S> f(g.dim, S{});
            for (int i = 0; i < g.dim; ++i)
                if ((mask >> i) & 1) f[i] = S(1);
            out.push_back(std::move(f));
        }
        return out;
    }
    if (!g.cs || !g.polyhedral()) return out;
    // Suspension polytope: 0, 1, and the sharp unbiased effects
    // (1/2, w/2) over the vertices w of the unit ball of Abar.
    out.push_back(Vec<S>(g.dim, S{}));
    out.push_back(g.unit);
    std::vector<Vec<S>> ball_vertices;
    const int n = g.dim - 1;
    if (g.cs->bar_norm == BarNorm::Linf) {
        // Abar = l1: vertices +-e_j.
        for (int j = 0; j < n; ++j)
            for (int s : {1, -1}) {
                Vec<S> w(n, S{});
                w[j] = S(s);
                ball_vertices.push_back(std::move(w));
            }
    } else if (g.cs->bar_norm == BarNorm::L1) {
        // Abar = linf: vertices {+-1}^n.
        if ((std::size_t{1} << n) > cap) return {};
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            Vec<S> w(n);
            for (int j = 0; j < n; ++j) w[j] = (mask >> j) & 1 ? S(-1) : S(1);
            ball_vertices.push_back(std::move(w));
        }
    } else {
        return {};
    }
    for (const auto& w : ball_vertices) {
        Vec<S> f(g.dim);
        f[0] = half;
        for (int j = 0; j < n; ++j) f[j + 1] = half * w[j];
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace gptc
