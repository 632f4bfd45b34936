#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ergolab::comb {

// Binomial coefficients from a Pascal table with kPascalRows rows.
// Exact in 64-bit integers for every entry the table holds.
inline constexpr int kPascalRows = 64;

double binomial(int n, int k);
std::int64_t binomial_exact(int n, int k);

// Partial exponential Bell polynomial B_{r,j}(y_1, ..., y_{r-j+1})
// through the recurrence
//   B_{r,j}(y) = sum_{i=1}^{r-j+1} C(r-1, i-1) * y_i * B_{r-i, j-1}(y)
// with B_{0,0} = 1 and B_{r,0} = 0 for r >= 1.
// Requires 0 <= j <= r and, for r >= 1, y.size() >= r-j+1.
// Integral inputs with r <= 12 are routed through the exact integer path, so
// small integer instances (Stirling comparisons) are bit-exact.
double bell_partial(int r, int j, std::span<const double> y);

// Exact integer evaluation of the same recurrence; intended for small
// arguments (r <= 12, |y_i| small) where no intermediate overflows.
std::int64_t bell_partial_exact(int r, int j, std::span<const std::int64_t> y);

// Stirling numbers of the second kind by explicit enumeration of set
// partitions as restricted-growth strings. Independent of bell_partial.
// Requires 0 <= k <= n <= 12.
std::int64_t stirling_oracle(int n, int k);

// s-th derivative of a composition f(g(x)) from raw derivative vectors
// f_derivs[k] = f^(k)(g(x)) and g_derivs[k] = g^(k)(x), k = 0..s:
//   (f o g)^(s) = sum_{j=1}^{s} f^(j)(g(x)) * B_{s,j}(g', ..., g^{(s-j+1)})
// and f(g(x)) for s = 0.
double faa_di_bruno(std::span<const double> f_derivs, std::span<const double> g_derivs, int s);

}  // namespace ergolab::comb
