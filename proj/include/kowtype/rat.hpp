#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>

namespace kow {

// Exact coefficient field for all identity checks. Numerator/denominator
// magnitudes are unbounded; float arithmetic appears only in ODE work.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using cplx = std::complex<double>;

inline Rat rat(long long num, long long den = 1) { return Rat(Int(num), Int(den)); }

inline double to_double(const Rat& q) { return static_cast<double>(q); }

// Exact square root when the argument is a perfect rational square.
inline std::optional<Rat> sqrt_exact(const Rat& q) {
    if (q < 0) return std::nullopt;
    const Int num = boost::multiprecision::numerator(q);
    const Int den = boost::multiprecision::denominator(q);
    const Int rn = boost::multiprecision::sqrt(num);
    const Int rd = boost::multiprecision::sqrt(den);
    if (rn * rn != num || rd * rd != den) return std::nullopt;
    return Rat(rn, rd);
}

inline std::string rat_to_string(const Rat& q) { return q.str(); }

// Coefficient-type shims so polynomial templates read identically over
// Rat, double, and complex<double>.
template <class T> struct scalar_traits;

template <> struct scalar_traits<Rat> {
    static bool is_zero(const Rat& x) { return x == 0; }
    static Rat zero() { return Rat(0); }
    static Rat one() { return Rat(1); }
};
template <> struct scalar_traits<double> {
    static bool is_zero(double x) { return x == 0.0; }
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
};
template <> struct scalar_traits<cplx> {
    static bool is_zero(const cplx& x) { return x == cplx(0.0, 0.0); }
    static cplx zero() { return cplx(0.0, 0.0); }
    static cplx one() { return cplx(1.0, 0.0); }
};

} // namespace kow
