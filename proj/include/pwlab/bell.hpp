#pragma once

#include <cstdint>
#include <vector>

namespace pwlab {

// Triangular table of ln F(N, k), 1 <= k <= N <= n_max, where F(N, k) is the
// partial Bell polynomial B_{N,k} evaluated at the sequence
//   a_l = (2(l-1))! / (2^(l-1) (l-1)!),   l = 1, 2, ...
// These coefficients turn derivatives of a Fourier transform taken along the
// mixture curve into derivatives of the underlying Laplace transform.
class BellTable {
public:
    explicit BellTable(int n_max);

    int n_max() const { return n_max_; }

    // ln F(N, k); requires 1 <= k <= N <= n_max.
    double log_f(int n, int k) const;

private:
    friend BellTable build_table(int n_max);

    int n_max_;
    std::vector<double> log_f_;      // row N starts at offset N(N-1)/2, entries k=1..N
};

// ln a_l, computed through lgamma so it stays exact-enough out to l = 1000.
double bell_argument(int l);

BellTable build_table(int n_max);

// Exact partition-multinomial enumeration of ln F(N, k) in 128-bit integer
// arithmetic. Test oracle; N <= 12.
double brute_force_f(int n, int k);

}  // namespace pwlab
