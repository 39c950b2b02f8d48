#include "pwlab/inversion.hpp"

#include <cmath>
#include <stdexcept>

#include "pwlab/errors.hpp"
#include "pwlab/quadrature.hpp"

namespace pwlab {

namespace detail {

void require_transform_point(std::complex<double> z) {
    if (!(z.real() > 0.0))
        throw std::invalid_argument("oracle: Re z must be positive");
}

}  // namespace detail

LaplaceOracle builtin_oracle(const ExponentialTransform& kind) {
    if (!(kind.lambda > 0.0))
        throw std::invalid_argument("builtin_oracle: Exponential rate must be positive");
    const double lambda = kind.lambda;
    return LaplaceOracle{
        [lambda](int n, std::complex<double> z) -> LogComplex {
            if (n < 0) throw std::invalid_argument("oracle: derivative order must be >= 0");
            detail::require_transform_point(z);
            // (-1)^N N! lambda (lambda + z)^(-N-1)
            const LogComplex shifted = pow_int(from_complex(z + lambda), -(n + 1));
            const long double log_abs =
                std::lgamma(n + 1.0L) + std::log(static_cast<long double>(lambda)) + shifted.log_abs;
            return from_log_polar(log_abs, shifted.arg + n * detail::pi_l);
        },
        "exp:" + std::to_string(kind.lambda)};
}

LaplaceOracle builtin_oracle(const GammaTransform& kind) {
    if (!(kind.alpha > 0.0) || !(kind.beta > 0.0))
        throw std::invalid_argument("builtin_oracle: Gamma parameters must be positive");
    const double alpha = kind.alpha, beta = kind.beta;
    return LaplaceOracle{
        [alpha, beta](int n, std::complex<double> z) -> LogComplex {
            if (n < 0) throw std::invalid_argument("oracle: derivative order must be >= 0");
            detail::require_transform_point(z);
            // (-1)^N beta^alpha (alpha)_N (beta + z)^(-alpha - N), principal power
            const LogComplex shifted = from_complex(z + beta);
            const long double al = alpha, be = beta;
            const long double rising = std::lgamma(al + n) - std::lgamma(al);
            const long double expo = -(al + n);
            return from_log_polar(al * std::log(be) + rising + expo * shifted.log_abs,
                                  expo * shifted.arg + n * detail::pi_l);
        },
        "gamma:" + std::to_string(kind.alpha) + ":" + std::to_string(kind.beta)};
}

InversionResult invert(const LaplaceOracle& oracle, const CurveSpec& curve, int n, double x) {
    if (n < 1) throw std::invalid_argument("invert: N must be >= 1");
    if (!(x > 0.0)) throw std::invalid_argument("invert: x must be positive");
    const std::complex<double> z = curve_point(curve, n / x);
    if (!(z.real() > 0.0)) throw std::invalid_argument("invert: curve left the right half-plane");

    // (-1)^N / N! * z^(N+1) * L^(N)(z)
    const LogComplex prefactor =
        from_log_polar(-std::lgamma(n + 1.0L), n * detail::pi_l);
    const LogComplex p = mul(mul(prefactor, pow_int(from_complex(z), n + 1)),
                             oracle.deriv(n, z));
    std::complex<double> value;
    try {
        value = to_complex_checked(p);
    } catch (const std::overflow_error& e) {
        throw numeric_error(std::string("invert: p_N does not fit a double at x=") +
                            std::to_string(x) + " (divergent configuration): " + e.what());
    }
    return InversionResult{x, n, value, value.real()};
}

std::complex<double> invert_via_kernel(const std::function<double(double)>& density,
                                       const CurveSpec& curve, int n, double x) {
    if (n < 1 || n > 200)
        throw std::invalid_argument("invert_via_kernel: N must be in [1, 200]");
    if (!(x > 0.0)) throw std::invalid_argument("invert_via_kernel: x must be positive");
    const double t_cut = kernel_t_cut(n);
    auto integrand = [&](double t) -> std::complex<double> {
        if (t <= 0.0) return {0.0, 0.0};
        return density(t * x) * to_complex(kernel(curve, n, t, x));
    };
    return integrate_or_throw(integrand, 0.0, t_cut, QuadOptions{1e-9, 8000});
}

}  // namespace pwlab
