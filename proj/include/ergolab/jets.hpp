#pragma once

#include <vector>

#include "ergolab/expr.hpp"

namespace ergolab {

// Truncated Taylor data of a smooth function at a point. derivs[j] holds the
// raw j-th derivative (not divided by j!), matching the derivative symbols
// the operator engine consumes.
struct Jet {
    double base = 0.0;
    std::vector<double> derivs;

    int order() const { return static_cast<int>(derivs.size()) - 1; }
    double value() const { return derivs[0]; }
};

// Hard cap; factorial growth makes higher orders meaningless in doubles.
inline constexpr int kMaxJetOrder = 12;
// Engine-facing default, see EngineSettings.
inline constexpr int kDefaultJetOrderCap = 8;

// Jet of e at x by forward propagation of truncated Taylor series through
// the tree. The order-0 entry equals evaluate(e, x) bit-exactly.
Jet jet_lift(const Expression& e, double x, int order);

Jet identity_jet(double x, int order);
Jet constant_jet(double c, double x, int order);

// Jet of outer∘inner at inner.base. Requires equal orders and
// outer.base == inner.value() within 1e-9*(1+|inner.value()|).
Jet jet_compose(const Jet& outer, const Jet& inner);

// Leibniz product: result.derivs[s] = sum_r C(s,r) a.derivs[s-r] b.derivs[r].
Jet jet_multiply(const Jet& a, const Jet& b);

// Jet of 1/a; requires a.value() != 0.
Jet jet_reciprocal(const Jet& a);

Jet jet_scale(const Jet& a, double c);
Jet jet_add(const Jet& a, const Jet& b);

// Jet of f' (one order lower) from the jet of f.
Jet derivative_jet(const Jet& a);

// Jet of the local inverse g = f^{-1} at f(y0), from the jet of f at y0.
// Requires f'(y0) != 0. Uses B_{s,s} = (f')^s to peel the top term of the
// composition identity g∘f = id.
Jet inverse_function_jet(const Jet& forward);

// Jets of the m-fold compositions phi^m at x for m = 0..n, by per-step
// lift-and-compose along the orbit. The order-0 entries reproduce the plain
// orbit exactly. Throws EscapeError naming the first unreachable step.
std::vector<Jet> iterate_jets(const Expression& phi, double x, int n, int order);

}  // namespace ergolab
