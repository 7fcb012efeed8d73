#pragma once

#include <cstddef>
#include <vector>

#include "gptc/error.hpp"
#include "gptc/scalar.hpp"

namespace gptc {

template <class S>
using Vec = std::vector<S>;

template <class S>
S dot(const Vec<S>& a, const Vec<S>& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot: size mismatch");
    S r{};
    for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
    return r;
}

template <class S>
Vec<S> add(const Vec<S>& a, const Vec<S>& b) {
    if (a.size() != b.size()) throw DimensionMismatch("add: size mismatch");
    Vec<S> r(a);
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

template <class S>
Vec<S> sub(const Vec<S>& a, const Vec<S>& b) {
    if (a.size() != b.size()) throw DimensionMismatch("sub: size mismatch");
    Vec<S> r(a);
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return r;
}

template <class S>
Vec<S> scaled(const Vec<S>& a, const S& t) {
    Vec<S> r(a);
    for (auto& v : r) v *= t;
    return r;
}

template <class S>
void axpy(const S& t, const Vec<S>& x, Vec<S>& y) {
    if (x.size() != y.size()) throw DimensionMismatch("axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += t * x[i];
}

template <class S>
Vec<S> negated(const Vec<S>& a) {
    Vec<S> r(a);
    for (auto& v : r) v = -v;
    return r;
}

/// Kronecker product, row-major: (a ⊗ b)[i*|b|+j] = a[i]*b[j].
template <class S>
Vec<S> kron(const Vec<S>& a, const Vec<S>& b) {
    Vec<S> r;
    r.reserve(a.size() * b.size());
    for (const auto& ai : a)
        for (const auto& bj : b) r.push_back(ai * bj);
    return r;
}

template <class S>
S inf_norm(const Vec<S>& a) {
    S r{};
    for (const auto& v : a) {
        S av = scalar_traits<S>::abs(v);
        if (av > r) r = av;
    }
    return r;
}

template <class S>
S one_norm(const Vec<S>& a) {
    S r{};
    for (const auto& v : a) r += scalar_traits<S>::abs(v);
    return r;
}

template <class S>
Vec<S> zeros(std::size_t n) {
    return Vec<S>(n, S{});
}

template <class S>
Vec<S> unit_vec(std::size_t n, std::size_t i) {
    Vec<S> r(n, S{});
    r[i] = S(1);
    return r;
}

template <class T, class S>
Vec<T> convert_vec(const Vec<S>& a) {
    Vec<T> r;
    r.reserve(a.size());
    for (const auto& v : a) r.push_back(T(v));
    return r;
}

inline Vec<double> to_double_vec(const Vec<Rational>& a) {
    Vec<double> r;
    r.reserve(a.size());
    for (const auto& v : a) r.push_back(scalar_traits<Rational>::to_double(v));
    return r;
}

/// Dense row-major matrix.
template <class S>
struct Mat {
    std::size_t rows = 0, cols = 0;
    Vec<S> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, S{}) {}

    S& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    Vec<S> row(std::size_t i) const {
        return Vec<S>(data.begin() + static_cast<std::ptrdiff_t>(i * cols),
                      data.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
    }

    Vec<S> col(std::size_t j) const {
        Vec<S> r(rows);
        for (std::size_t i = 0; i < rows; ++i) r[i] = (*this)(i, j);
        return r;
    }

    Mat transposed() const {
        Mat t(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Vec<S> apply(const Vec<S>& x) const {
        if (x.size() != cols) throw DimensionMismatch("Mat::apply: size mismatch");
        Vec<S> y(rows, S{});
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }
};

template <class S>
Mat<S> mat_mul(const Mat<S>& a, const Mat<S>& b) {
    if (a.cols != b.rows) throw DimensionMismatch("mat_mul: size mismatch");
    Mat<S> c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const S& aik = a(i, k);
            if (aik == S{}) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

/// Rank via Gaussian elimination with partial (magnitude) pivoting.
/// With rational scalars the result is exact.
template <class S>
std::size_t rank(Mat<S> m, const S& tol = scalar_traits<S>::default_tol()) {
    std::size_t r = 0;
    for (std::size_t j = 0; j < m.cols && r < m.rows; ++j) {
        std::size_t piv = r;
        S best = scalar_traits<S>::abs(m(r, j));
        for (std::size_t i = r + 1; i < m.rows; ++i) {
            S v = scalar_traits<S>::abs(m(i, j));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= tol) continue;
        if (piv != r)
            for (std::size_t c = 0; c < m.cols; ++c) std::swap(m(piv, c), m(r, c));
        for (std::size_t i = r + 1; i < m.rows; ++i) {
            S f = m(i, j) / m(r, j);
            if (f == S{}) continue;
            for (std::size_t c = j; c < m.cols; ++c) m(i, c) -= f * m(r, c);
        }
        ++r;
    }
    return r;
}

/// Inverse by Gauss-Jordan; throws DegenerateCone-agnostic Error on singular input.
template <class S>
Mat<S> inverse(Mat<S> m) {
    if (m.rows != m.cols) throw DimensionMismatch("inverse: not square");
    const std::size_t n = m.rows;
    Mat<S> inv(n, n);
    for (std::size_t i = 0; i < n; ++i) inv(i, i) = S(1);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t piv = j;
        S best = scalar_traits<S>::abs(m(j, j));
        for (std::size_t i = j + 1; i < n; ++i) {
            S v = scalar_traits<S>::abs(m(i, j));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == S{}) throw Error("inverse: singular matrix");
        if (piv != j)
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(m(piv, c), m(j, c));
                std::swap(inv(piv, c), inv(j, c));
            }
        S d = m(j, j);
        for (std::size_t c = 0; c < n; ++c) {
            m(j, c) /= d;
            inv(j, c) /= d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j) continue;
            S f = m(i, j);
            if (f == S{}) continue;
            for (std::size_t c = 0; c < n; ++c) {
                m(i, c) -= f * m(j, c);
                inv(i, c) -= f * inv(j, c);
            }
        }
    }
    return inv;
}

}  // namespace gptc
