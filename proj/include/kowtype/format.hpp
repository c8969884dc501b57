#pragma once

#include <charconv>
#include <complex>
#include <string>

namespace kow {

// Shortest decimal that round-trips the double, capped at 17 significant
// digits by construction of to_chars. All file output goes through here so
// reruns are byte-identical.
inline std::string fmt_double(double x) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

inline std::string fmt_complex(const std::complex<double>& z) {
    std::string s = fmt_double(z.real());
    if (z.imag() >= 0 || z.imag() != z.imag()) s += "+";
    s += fmt_double(z.imag());
    s += "i";
    return s;
}

} // namespace kow
