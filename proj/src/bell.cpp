#include "pwlab/bell.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pwlab {

namespace {

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log(e^a + e^b) without leaving the log domain; both operands finite or -inf.
double log_add(double a, double b) {
    if (std::isinf(a) && a < 0) return b;
    if (std::isinf(b) && b < 0) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp(-(std::fabs(a - b))));
}

}  // namespace

double bell_argument(int l) {
    if (l < 1) throw std::invalid_argument("bell_argument: l must be >= 1");
    // ln[(2(l-1))!] - (l-1) ln 2 - ln[(l-1)!]
    return std::lgamma(2.0 * l - 1.0) - (l - 1) * std::log(2.0) - std::lgamma(static_cast<double>(l));
}

BellTable::BellTable(int n_max) : n_max_(n_max) {
    if (n_max < 1 || n_max > 1000)
        throw std::invalid_argument("BellTable: n_max must be in [1, 1000]");
    log_f_.assign(static_cast<size_t>(n_max) * (n_max + 1) / 2, 0.0);
}

double BellTable::log_f(int n, int k) const {
    if (n < 1 || n > n_max_ || k < 1 || k > n)
        throw std::out_of_range("BellTable: (" + std::to_string(n) + ", " + std::to_string(k) +
                                ") outside triangle with n_max=" + std::to_string(n_max_));
    return log_f_[static_cast<size_t>(n) * (n - 1) / 2 + (k - 1)];
}

BellTable build_table(int n_max) {
    BellTable table(n_max);
    const double neg_inf = -std::numeric_limits<double>::infinity();

    std::vector<double> args(n_max + 1);
    for (int l = 1; l <= n_max; ++l) args[l] = bell_argument(l);

    // log B(N, k) over the full triangle including the k=0 axis:
    // B(0,0) = 1, B(N,0) = 0 for N >= 1, and
    //   B(N,k) = sum_{i=1}^{N-k+1} C(N-1, i-1) a_i B(N-i, k-1).
    // Every summand is positive, so log-sum-exp accumulation is safe.
    std::vector<std::vector<double>> logb(n_max + 1);
    for (int n = 0; n <= n_max; ++n) logb[n].assign(n + 1, neg_inf);
    logb[0][0] = 0.0;

    for (int n = 1; n <= n_max; ++n) {
        for (int k = 1; k <= n; ++k) {
            double acc = neg_inf;
            for (int i = 1; i <= n - k + 1; ++i) {
                const double prev = logb[n - i][k - 1];
                if (std::isinf(prev)) continue;
                acc = log_add(acc, log_binomial(n - 1, i - 1) + args[i] + prev);
            }
            logb[n][k] = acc;
        }
    }

    for (int n = 1; n <= n_max; ++n)
        for (int k = 1; k <= n; ++k)
            table.log_f_[static_cast<size_t>(n) * (n - 1) / 2 + (k - 1)] = logb[n][k];
    return table;
}

namespace {

using u128 = unsigned __int128;

u128 factorial_u128(int n) {
    u128 r = 1;
    for (int i = 2; i <= n; ++i) r *= static_cast<unsigned>(i);
    return r;
}

// a_l as an exact integer: 1, 1, 3, 15, 105, ... (odd double factorials).
u128 bell_argument_int(int l) {
    u128 r = 1;
    for (int m = 3; m <= 2 * l - 3; m += 2) r *= static_cast<unsigned>(m);
    return r;
}

// Walk all partitions of `remaining` with parts <= max_part, tracking the
// multinomial denominator and the product of arguments as we go.
void enumerate(int n, int k_target, int remaining, int max_part, int parts_used,
               u128 denom, u128 arg_prod, u128& total) {
    if (remaining == 0) {
        if (parts_used == k_target) total += factorial_u128(n) / denom * arg_prod;
        return;
    }
    if (parts_used >= k_target) return;
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        // take multiplicity m of this part size
        u128 d = denom, a = arg_prod;
        const u128 part_fact = factorial_u128(part);
        const u128 part_arg = bell_argument_int(part);
        for (int m = 1; m * part <= remaining; ++m) {
            d *= static_cast<unsigned>(m);  // builds m! incrementally
            d *= part_fact;
            a *= part_arg;
            enumerate(n, k_target, remaining - m * part, part - 1, parts_used + m, d, a, total);
        }
    }
}

}  // namespace

double brute_force_f(int n, int k) {
    if (n < 1 || n > 12) throw std::invalid_argument("brute_force_f: n must be in [1, 12]");
    if (k < 1 || k > n) throw std::invalid_argument("brute_force_f: k must be in [1, n]");
    u128 total = 0;
    enumerate(n, k, n, n, 0, 1, 1, total);
    if (total == 0) return -std::numeric_limits<double>::infinity();
    // Totals stay far below 2^53 for n <= 12, so the conversion is exact.
    return std::log(static_cast<double>(static_cast<unsigned long long>(total)));
}

}  // namespace pwlab
