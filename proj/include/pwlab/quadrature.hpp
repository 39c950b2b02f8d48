#pragma once

#include <cmath>
#include <complex>
#include <queue>
#include <vector>

#include "pwlab/errors.hpp"

namespace pwlab {

struct QuadOptions {
    double abs_tol = 1e-10;
    int max_panels = 8000;
};

template <typename T>
struct QuadResult {
    T value{};
    double error = 0.0;     // achieved error estimate
    bool converged = false;
    int panels = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK dqk15 abscissae/weights).
inline constexpr double gk_x[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F, typename T>
void gk15(F& f, double a, double b, T& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T kron = gk_wk[7] * fc;
    T gauss = gk_wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * gk_x[i];
        T fs = f(c - dx) + f(c + dx);
        kron += gk_wk[i] * fs;
        if (i % 2 == 1) gauss += gk_wg[i / 2] * fs;
    }
    value = kron * h;
    // QUADPACK-style inflation of the raw Gauss-Kronrod difference.
    const double diff = std::abs((kron - gauss) * h);
    err = diff > 0 ? std::pow(200.0 * diff, 1.5) : 0.0;
    if (err < 1e-300) err = diff;
}

}  // namespace detail

// Adaptive bisection on [a, b], always splitting the panel with the largest
// error estimate, until the summed estimates meet opt.abs_tol.
// T is double or std::complex<double>, deduced from the integrand.
template <typename F, typename T = decltype(std::declval<F&>()(0.0))>
QuadResult<T> integrate_adaptive(F&& f, double a, double b, QuadOptions opt = {}) {
    struct Panel {
        double a, b, err;
        T value;
        bool operator<(const Panel& o) const { return err < o.err; }
    };

    QuadResult<T> res;
    if (a == b) {
        res.converged = true;
        return res;
    }

    std::priority_queue<Panel> panels;
    {
        Panel p{a, b, 0.0, T{}};
        detail::gk15(f, a, b, p.value, p.err);
        panels.push(p);
    }
    double total_err = panels.top().err;
    T total = panels.top().value;
    int n = 1;

    while (total_err > opt.abs_tol && n < opt.max_panels) {
        Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // panel narrower than one ulp
            panels.push(worst);
            break;
        }
        Panel left{worst.a, mid, 0.0, T{}};
        Panel right{mid, worst.b, 0.0, T{}};
        detail::gk15(f, left.a, left.b, left.value, left.err);
        detail::gk15(f, right.a, right.b, right.value, right.err);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        panels.push(left);
        panels.push(right);
        ++n;
    }

    // Re-sum from the panel list to shed accumulated update roundoff.
    total = T{};
    total_err = 0.0;
    while (!panels.empty()) {
        total += panels.top().value;
        total_err += panels.top().err;
        panels.pop();
    }

    res.value = total;
    res.error = total_err;
    res.converged = total_err <= opt.abs_tol;
    res.panels = n;
    return res;
}

// Same, but throws on non-convergence, reporting the achieved estimate.
template <typename F, typename T = decltype(std::declval<F&>()(0.0))>
T integrate_or_throw(F&& f, double a, double b, QuadOptions opt = {}) {
    auto r = integrate_adaptive(std::forward<F>(f), a, b, opt);
    if (!r.converged)
        throw numeric_error("quadrature did not reach abs_tol=" + std::to_string(opt.abs_tol) +
                            " (achieved error estimate " + std::to_string(r.error) + " with " +
                            std::to_string(r.panels) + " panels)");
    return r.value;
}

}  // namespace pwlab
