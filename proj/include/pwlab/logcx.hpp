#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>

namespace pwlab {

// Complex number stored as (log-modulus, argument). Keeps factorial-scale
// magnitudes (N^N / N!, kernel prefactors, Bell coefficients) representable
// where an ordinary double would overflow long before the final result,
// which is typically O(1).
//
// Internals run in 80-bit long double: products of ~N log-sized terms must
// survive to ~1e-13 relative accuracy at N = 400, and plain double log
// accumulation loses exactly that last digit.
struct LogComplex {
    long double log_abs = -std::numeric_limits<long double>::infinity();
    long double arg = 0.0L;  // principal, in (-pi, pi]; 0 for the zero element

    bool is_zero() const { return std::isinf(log_abs) && log_abs < 0; }
};

namespace detail {

inline constexpr long double pi_l = 3.14159265358979323846264338327950288L;

// Reduce an angle into (-pi, pi]. remainderl returns [-pi, pi]; fold -pi up.
inline long double principal_angle(long double a) {
    long double r = std::remainder(a, 2.0L * pi_l);
    if (r <= -pi_l) r = pi_l;
    return r;
}

}  // namespace detail

inline LogComplex log_zero() { return LogComplex{}; }

inline LogComplex log_one() { return LogComplex{0.0L, 0.0L}; }

// Value given directly in log polar form; the angle is renormalized.
inline LogComplex from_log_polar(long double log_abs, long double arg) {
    if (std::isinf(log_abs) && log_abs < 0) return log_zero();
    return LogComplex{log_abs, detail::principal_angle(arg)};
}

// Positive real given by its natural log (e.g. a lgamma value).
inline LogComplex from_log_real(long double log_abs) {
    return LogComplex{log_abs, 0.0L};
}

inline LogComplex from_complex(std::complex<double> w) {
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
        throw std::invalid_argument("logcx: from_complex requires finite input");
    if (w.real() == 0.0 && w.imag() == 0.0) return log_zero();
    const long double re = w.real(), im = w.imag();
    return LogComplex{std::log(std::hypot(re, im)), std::atan2(im, re)};
}

inline std::complex<double> to_complex(const LogComplex& a) {
    if (a.is_zero()) return {0.0, 0.0};
    const long double m = std::exp(a.log_abs);
    return {static_cast<double>(m * std::cos(a.arg)),
            static_cast<double>(m * std::sin(a.arg))};
}

// Like to_complex but refuses to silently return inf.
inline std::complex<double> to_complex_checked(const LogComplex& a) {
    if (!a.is_zero() && a.log_abs > 709.0L)
        throw std::overflow_error("logcx: modulus exceeds double range (log|z| = " +
                                  std::to_string(static_cast<double>(a.log_abs)) + ")");
    return to_complex(a);
}

inline LogComplex mul(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero() || b.is_zero()) return log_zero();
    return LogComplex{a.log_abs + b.log_abs, detail::principal_angle(a.arg + b.arg)};
}

inline LogComplex pow_int(const LogComplex& a, long n) {
    if (a.is_zero()) {
        if (n < 0) throw std::domain_error("logcx: zero base with negative exponent");
        return n == 0 ? log_one() : log_zero();
    }
    if (n == 0) return log_one();
    const long double ln = static_cast<long double>(n);
    return LogComplex{a.log_abs * ln, detail::principal_angle(a.arg * ln)};
}

// Log-sum-exp generalized to complex phase: rescale by the largest modulus,
// accumulate as ordinary complex, restore the offset. Cancellation below
// ~1e-18 of the dominant term is inherently lost.
inline LogComplex sum(std::span<const LogComplex> terms) {
    if (terms.empty()) throw std::invalid_argument("logcx: sum of empty sequence");
    long double m = -std::numeric_limits<long double>::infinity();
    for (const auto& t : terms)
        if (!t.is_zero() && t.log_abs > m) m = t.log_abs;
    if (std::isinf(m)) return log_zero();  // all zero
    std::complex<long double> acc{0.0L, 0.0L};
    for (const auto& t : terms) {
        if (t.is_zero()) continue;
        const long double s = std::exp(t.log_abs - m);
        acc += std::complex<long double>{s * std::cos(t.arg), s * std::sin(t.arg)};
    }
    if (acc.real() == 0.0L && acc.imag() == 0.0L) return log_zero();
    return LogComplex{m + std::log(std::abs(acc)),
                      std::atan2(acc.imag(), acc.real())};
}

inline LogComplex sum(std::initializer_list<LogComplex> terms) {
    return sum(std::span<const LogComplex>(terms.begin(), terms.size()));
}

}  // namespace pwlab
