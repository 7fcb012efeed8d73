#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>

namespace gptc {

/// Exact arbitrary-precision rational scalar, used by the exact mode of the
/// LP core and cone arithmetic.  Conversion from double is exact (binary
/// fractions), so float inputs can be promoted without rounding disputes.
using Rational = boost::multiprecision::cpp_rational;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double abs(double x) { return std::fabs(x); }
    static double from_double(double x) { return x; }
    static double to_double(double x) { return x; }
    /// Default feasibility / membership tolerance.
    static double default_tol() { return 1e-9; }
    /// Pivot magnitude below which a tableau entry is treated as zero.
    static double pivot_tol() { return 1e-11; }
    static std::string name() { return "float64"; }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
    static Rational from_double(double x) { return Rational(x); }
    static double to_double(const Rational& x) { return x.template convert_to<double>(); }
    static Rational default_tol() { return Rational(0); }
    static Rational pivot_tol() { return Rational(0); }
    static std::string name() { return "rational"; }
};

}  // namespace gptc
