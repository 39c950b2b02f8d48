#include "pwlab/curves.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pwlab/quadrature.hpp"

namespace pwlab {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0))
        throw std::invalid_argument(std::string("curves: ") + name + " must be positive, got " +
                                    std::to_string(v));
}

}  // namespace

double curve_offset(const CurveSpec& curve, double y) {
    require_positive(y, "y");
    return std::visit(
        [y]<typename K>(const K& kind) -> double {
            if constexpr (std::is_same_v<K, RealAxis>) {
                return 0.0;
            } else if constexpr (std::is_same_v<K, MixtureParabola>) {
                return -kind.mu * std::sqrt(2.0 * y) / kind.sigma;
            } else {
                return kind.c(y);
            }
        },
        curve);
}

std::complex<double> curve_point(const CurveSpec& curve, double y) {
    return {y, curve_offset(curve, y)};
}

std::optional<double> growth_constant(const CurveSpec& curve) {
    return std::visit(
        []<typename K>(const K& kind) -> std::optional<double> {
            if constexpr (std::is_same_v<K, RealAxis>) {
                return 0.0;
            } else if constexpr (std::is_same_v<K, MixtureParabola>) {
                return 2.0 * kind.mu * kind.mu / (kind.sigma * kind.sigma);
            } else {
                return std::nullopt;
            }
        },
        curve);
}

LogComplex kernel(const CurveSpec& curve, int n, double t, double x) {
    if (n < 1) throw std::invalid_argument("kernel: N must be >= 1");
    require_positive(t, "t");
    require_positive(x, "x");
    const double xc = x * curve_offset(curve, n / x);
    // (N + i xc)^(N+1) / N! * t^N * e^(-Nt) * e^(-i xc t)
    const LogComplex base_pow = pow_int(from_complex({static_cast<double>(n), xc}), n + 1);
    const long double tl = t;
    const long double log_abs = base_pow.log_abs - std::lgamma(n + 1.0L) +
                                n * std::log(tl) - n * tl;
    return from_log_polar(log_abs, base_pow.arg - static_cast<long double>(xc) * tl);
}

double kernel_t_cut(int n) {
    // first t > 1 with ln t - t + 1 = -120/N
    const double target = -120.0 / n;
    double lo = 1.0, hi = 120.0 / n + 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::log(mid) - mid + 1.0 > target ? lo : hi) = mid;
    }
    return hi;
}

std::complex<double> moment_closed(const CurveSpec& curve, int n, int r, double x,
                                   bool allow_general_r) {
    if (n < 1) throw std::invalid_argument("moment_closed: N must be >= 1");
    if (r < 0 || (r > 2 && !allow_general_r))
        throw std::invalid_argument("moment_closed: r must be in {0, 1, 2} "
                                    "(pass allow_general_r for larger r)");
    if (r == 0) return {1.0, 0.0};
    double numer = 1.0;
    for (int l = 1; l <= r; ++l) numer *= 1.0 + static_cast<double>(l) / n;
    const double c = curve_offset(curve, n / x);
    const std::complex<double> denom_base{1.0, (x / n) * c};
    return numer / std::pow(denom_base, r);
}

std::complex<double> moment_quadrature(const CurveSpec& curve, int n, int r, double x) {
    if (n < 1 || n > 500)
        throw std::invalid_argument("moment_quadrature: N must be in [1, 500]");
    const double t_cut = kernel_t_cut(n);
    auto integrand = [&](double t) -> std::complex<double> {
        if (t <= 0.0) return {0.0, 0.0};
        return std::pow(t, r) * to_complex(kernel(curve, n, t, x));
    };
    return integrate_or_throw(integrand, 0.0, t_cut, QuadOptions{1e-10, 8000});
}

double kernel_tail_mass(const CurveSpec& curve, int n, double x, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("kernel_tail_mass: delta must be in (0, 1)");
    auto abs_kernel = [&](double t) -> double {
        if (t <= 0.0) return 0.0;
        const LogComplex k = kernel(curve, n, t, x);
        return k.is_zero() ? 0.0 : static_cast<double>(std::exp(k.log_abs));
    };
    const QuadOptions opt{1e-12, 8000};
    const double left = integrate_or_throw(abs_kernel, 0.0, 1.0 - delta, opt);
    const double t_cut = std::max(kernel_t_cut(n), 1.0 + delta + 1e-6);
    const double right = integrate_or_throw(abs_kernel, 1.0 + delta, t_cut, opt);
    return left + right;
}

}  // namespace pwlab
