#include "ergolab/combinatorics.hpp"

#include <array>
#include <cmath>

#include "ergolab/errors.hpp"
#include "ergolab/expr.hpp"

namespace ergolab::comb {

namespace {

struct PascalTable {
    std::array<std::array<std::int64_t, kPascalRows>, kPascalRows> c{};
    PascalTable() {
        for (int n = 0; n < kPascalRows; ++n) {
            c[n][0] = 1;
            for (int k = 1; k <= n; ++k)
                c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
        }
    }
};

const PascalTable& pascal() {
    static const PascalTable table;
    return table;
}

void check_bell_contract(int r, int j, std::size_t y_size) {
    if (r < 0 || j < 0 || j > r) throw PreconditionError("bell_partial: need 0 <= j <= r");
    if (r >= 1 && y_size < static_cast<std::size_t>(r - j + 1))
        throw PreconditionError("bell_partial: argument vector shorter than r-j+1");
}

}  // namespace

std::int64_t binomial_exact(int n, int k) {
    if (n < 0 || n >= kPascalRows || k < 0 || k > n)
        throw PreconditionError("binomial: index out of table range");
    return pascal().c[n][k];
}

double binomial(int n, int k) { return static_cast<double>(binomial_exact(n, k)); }

std::int64_t bell_partial_exact(int r, int j, std::span<const std::int64_t> y) {
    check_bell_contract(r, j, y.size());
    // b[rho][iota] over the needed triangle
    std::vector<std::vector<std::int64_t>> b(r + 1, std::vector<std::int64_t>(j + 1, 0));
    b[0][0] = 1;
    for (int rho = 1; rho <= r; ++rho) {
        for (int iota = 1; iota <= std::min(rho, j); ++iota) {
            if (rho - iota > r - j) continue;  // unreachable from (r, j)
            std::int64_t acc = 0;
            for (int i = 1; i <= rho - iota + 1; ++i)
                acc += binomial_exact(rho - 1, i - 1) * y[i - 1] * b[rho - i][iota - 1];
            b[rho][iota] = acc;
        }
    }
    return b[r][j];
}

double bell_partial(int r, int j, std::span<const double> y) {
    check_bell_contract(r, j, y.size());
    if (r <= 12) {
        bool integral = true;
        std::vector<std::int64_t> yi;
        yi.reserve(y.size());
        for (double v : y) {
            if (!num::is_integer(v) || std::fabs(v) > 1e6) {
                integral = false;
                break;
            }
            yi.push_back(static_cast<std::int64_t>(v));
        }
        if (integral) return static_cast<double>(bell_partial_exact(r, j, yi));
    }
    std::vector<std::vector<double>> b(r + 1, std::vector<double>(j + 1, 0.0));
    b[0][0] = 1.0;
    for (int rho = 1; rho <= r; ++rho) {
        for (int iota = 1; iota <= std::min(rho, j); ++iota) {
            if (rho - iota > r - j) continue;
            double acc = 0.0;
            for (int i = 1; i <= rho - iota + 1; ++i)
                acc += binomial(rho - 1, i - 1) * y[i - 1] * b[rho - i][iota - 1];
            b[rho][iota] = acc;
        }
    }
    return b[r][j];
}

std::int64_t stirling_oracle(int n, int k) {
    if (n < 0 || k < 0 || k > n || n > 12)
        throw PreconditionError("stirling_oracle: need 0 <= k <= n <= 12");
    if (n == 0) return k == 0 ? 1 : 0;
    // Restricted-growth strings: a[0] = 0, a[i] <= max(a[0..i-1]) + 1.
    std::int64_t count = 0;
    struct Rec {
        int n, k;
        std::int64_t* count;
        void walk(int pos, int max_block) const {
            if (pos == n) {
                if (max_block + 1 == k) ++*count;
                return;
            }
            for (int b = 0; b <= max_block + 1 && b < k; ++b)
                walk(pos + 1, std::max(max_block, b));
        }
    };
    Rec{n, k, &count}.walk(1, 0);
    return k >= 1 ? count : 0;
}

double faa_di_bruno(std::span<const double> f_derivs, std::span<const double> g_derivs, int s) {
    if (s < 0 || f_derivs.size() != static_cast<std::size_t>(s) + 1 ||
        g_derivs.size() != static_cast<std::size_t>(s) + 1)
        throw PreconditionError("faa_di_bruno: derivative vectors must have s+1 entries");
    if (s == 0) return f_derivs[0];
    std::span<const double> inner = g_derivs.subspan(1);
    double acc = 0.0;
    for (int j = 1; j <= s; ++j) acc += f_derivs[j] * bell_partial(s, j, inner);
    return acc;
}

}  // namespace ergolab::comb
